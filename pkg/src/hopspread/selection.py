"""Seed selection: lazy greedy with optional upper-bound bootstrap, a naive
full-evaluation greedy for cross-checking, and the degree heuristics.

Submodularity makes every previously computed marginal gain a valid upper
bound on the current one, so the lazy greedy keeps candidates in a max-heap
keyed by cached gain and only re-evaluates the top until it is fresh. With
`bootstrap="upper_bounds"` the heap starts from the closed-form single-seed
bounds instead of evaluating every node once, which removes the full first
pass entirely.

All ties break toward the smaller node id, both in the heap order and in the
naive argmax, so the two paths return identical seed sequences.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import upper_bounds
from .hop_estimator import commit, eval_gain, init_state


class CelfEntry:
    """Heap entry: a candidate with its cached (upper-bounding) gain."""

    __slots__ = ("node", "cached_gain", "evaluated_at")

    def __init__(self, node, cached_gain, evaluated_at):
        self.node = node
        self.cached_gain = cached_gain
        self.evaluated_at = evaluated_at

    def __lt__(self, other):
        if self.cached_gain != other.cached_gain:
            return self.cached_gain > other.cached_gain
        return self.node < other.node


@dataclass(frozen=True)
class SeedResult:
    """Selected seeds in pick order with bookkeeping for benchmarks."""

    seeds: list[int]
    marginal_gains: list[float]
    algorithm: str
    elapsed: float
    evaluations: int
    spread: float = 0.0
    hops: int | None = None
    model: str | None = None


def _check_k(g, k):
    if not 1 <= k <= g.node_count:
        raise ValueError(f"k={k} out of range for {g.node_count} nodes")


def greedy_celf(g, k, model="ic", hops=2, bootstrap="upper_bounds", refresh_interval=None):
    """Lazy greedy selection of k seeds under hop-limited influence.

    bootstrap="upper_bounds" seeds the queue with the closed-form single-seed
    bounds (cascade model only); bootstrap="none" evaluates every node once
    up front. Both return the same seed sequence.
    """
    _check_k(g, k)
    if bootstrap not in ("upper_bounds", "none"):
        raise ValueError(f"unknown bootstrap {bootstrap!r}")
    if bootstrap == "upper_bounds" and model != "ic":
        raise ValueError("upper-bound bootstrap is only valid under the cascade model")
    t0 = time.perf_counter()
    kwargs = {} if refresh_interval is None else {"refresh_interval": refresh_interval}
    state = init_state(g, model=model, hops=hops, **kwargs)
    evaluations = 0
    last_report = None

    def evaluate(node):
        nonlocal evaluations, last_report
        evaluations += 1
        last_report = eval_gain(state, node)
        return last_report.gain

    if bootstrap == "none":
        heap = []
        best_report = None
        for v in range(g.node_count):
            gain = evaluate(v)
            heap.append(CelfEntry(v, gain, 0))
            if best_report is None or (gain, -v) > (best_report.gain, -best_report.candidate):
                best_report = last_report
        last_report = best_report
    else:
        ub = upper_bounds(g, hops).values.tolist()
        heap = [CelfEntry(v, ub[v], -1) for v in range(g.node_count)]
    heapq.heapify(heap)

    seeds = []
    gains = []
    while len(seeds) < k:
        entry = heapq.heappop(heap)
        if entry.evaluated_at == len(seeds):
            node = entry.node
            if last_report is None or last_report.candidate != node or last_report.state_version != state.version:
                evaluate(node)
            commit(state, last_report)
            seeds.append(node)
            gains.append(last_report.gain)
        else:
            entry.cached_gain = evaluate(entry.node)
            entry.evaluated_at = len(seeds)
            heapq.heappush(heap, entry)
    elapsed = time.perf_counter() - t0
    name = ("twohop" if hops == 2 else "onehop") + ("-o" if bootstrap == "none" else "")
    return SeedResult(
        seeds=seeds,
        marginal_gains=gains,
        algorithm=name,
        elapsed=elapsed,
        evaluations=evaluations,
        spread=state.spread(),
        hops=hops,
        model=model,
    )


def greedy_naive(g, k, model="ic", hops=2):
    """Greedy that re-evaluates every non-seed each iteration.

    Exists as the reference implementation the lazy greedy must match.
    """
    _check_k(g, k)
    t0 = time.perf_counter()
    state = init_state(g, model=model, hops=hops)
    evaluations = 0
    seeds = []
    gains = []
    for _ in range(k):
        best = None
        for v in range(g.node_count):
            if state.seed_mask[v]:
                continue
            rep = eval_gain(state, v)
            evaluations += 1
            if best is None or rep.gain > best.gain:
                best = rep
        commit(state, best)
        seeds.append(best.candidate)
        gains.append(best.gain)
    elapsed = time.perf_counter() - t0
    return SeedResult(
        seeds=seeds,
        marginal_gains=gains,
        algorithm=f"naive-{'twohop' if hops == 2 else 'onehop'}",
        elapsed=elapsed,
        evaluations=evaluations,
        spread=state.spread(),
        hops=hops,
        model=model,
    )


def high_degree(g, k, degree="out"):
    """The k nodes of largest degree, ties toward smaller ids."""
    _check_k(g, k)
    t0 = time.perf_counter()
    if degree == "out":
        deg = g.out_degrees()
    elif degree == "in":
        deg = g.in_degrees()
    elif degree == "total":
        deg = g.out_degrees() + g.in_degrees()
    else:
        raise ValueError(f"unknown degree kind {degree!r}")
    order = np.lexsort((np.arange(g.node_count), -deg))
    seeds = [int(v) for v in order[:k]]
    return SeedResult(
        seeds=seeds,
        marginal_gains=[],
        algorithm="highdegree",
        elapsed=time.perf_counter() - t0,
        evaluations=0,
    )


def degree_discount(g, k, p=0.01):
    """Degree-discount heuristic on out-degrees.

    A node's priority starts at its out-degree d and drops to
    d - 2t - (d - t)*t*p once t of its in-neighbors are selected. The heap
    holds lazily invalidated entries; `current` is authoritative.
    """
    _check_k(g, k)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    t0 = time.perf_counter()
    n = g.node_count
    d = g.out_degrees().astype(np.float64)
    t = np.zeros(n)
    current = d.copy()
    heap = [(-current[v], v) for v in range(n)]
    heapq.heapify(heap)
    selected = np.zeros(n, dtype=bool)
    seeds = []
    while len(seeds) < k:
        negdd, u = heapq.heappop(heap)
        if selected[u] or -negdd != current[u]:
            continue
        selected[u] = True
        seeds.append(u)
        nbrs, _ = g.out_edges(u)
        for v in nbrs:
            v = int(v)
            if selected[v]:
                continue
            t[v] += 1.0
            current[v] = d[v] - 2.0 * t[v] - (d[v] - t[v]) * t[v] * p
            heapq.heappush(heap, (-current[v], v))
    return SeedResult(
        seeds=seeds,
        marginal_gains=[],
        algorithm="degreediscount",
        elapsed=time.perf_counter() - t0,
        evaluations=0,
    )
