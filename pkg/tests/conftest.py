"""Shared graph builders and reference formulas for the test suite.

The closed-form recomputations here are intentionally independent of the
incremental estimator: they evaluate the per-node activation products/sums
directly from the full seed set every time they are called.
"""

import numpy as np
import pytest

from hopspread.graph import Graph


def random_ic_graph(rng, n_max=8, m_max=12, p_one_frac=0.0, n_min=2):
    """Small random simple digraph with uniform-random edge probabilities."""
    n = int(rng.integers(n_min, n_max + 1))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    idx = rng.permutation(len(pairs))
    m = int(rng.integers(1, min(m_max, len(pairs)) + 1))
    chosen = [pairs[i] for i in idx[:m]]
    src = np.array([u for u, _ in chosen])
    dst = np.array([v for _, v in chosen])
    prob = rng.random(m)
    if p_one_frac:
        prob[rng.random(m) < p_one_frac] = 1.0
    return Graph(n, src, dst, prob)


def random_graph_with_cycles(rng, n, extra_two_cycles=5, avg_deg=3.0, p_one_frac=0.25):
    """Random digraph that always contains 2-cycles and probability-1 edges."""
    pairs = {(u, v) for u, v in zip(rng.integers(0, n, int(avg_deg * n)), rng.integers(0, n, int(avg_deg * n))) if u != v}
    nodes = rng.permutation(n)
    for i in range(min(extra_two_cycles, n // 2)):
        a, b = int(nodes[2 * i]), int(nodes[2 * i + 1])
        pairs.add((a, b))
        pairs.add((b, a))
    chosen = sorted(pairs)
    src = np.array([u for u, _ in chosen])
    dst = np.array([v for _, v in chosen])
    prob = rng.random(len(chosen))
    prob[rng.random(len(chosen)) < p_one_frac] = 1.0
    return Graph(n, src, dst, prob)


def random_lt_graph(rng, n_max=6, m_max=8, n_min=2):
    """Random digraph rescaled so incoming weights sum below 1 per node."""
    g = random_ic_graph(rng, n_max, m_max, n_min=n_min)
    sums = np.zeros(g.node_count)
    np.add.at(sums, g.out_dst, g.out_prob)
    scale = np.ones(g.node_count)
    over = sums > 0.98
    scale[over] = 0.98 / sums[over]
    return g._with_probs(g.out_prob * scale[g.out_dst])


def reference_activation(g, seeds, hops, model="ic"):
    """Per-node activation probabilities recomputed directly from the seed set."""
    n = g.node_count
    smask = np.zeros(n, dtype=bool)
    smask[list(seeds)] = True
    pi1 = np.empty(n)
    for v in range(n):
        srcs, ps = g.in_edges(v)
        if smask[v]:
            pi1[v] = 1.0
        elif model == "ic":
            pi1[v] = 1.0 - np.prod(1.0 - ps[smask[srcs]])
        else:
            pi1[v] = ps[smask[srcs]].sum()
    if hops == 1:
        return pi1
    pi2 = np.empty(n)
    for v in range(n):
        srcs, ps = g.in_edges(v)
        if smask[v]:
            pi2[v] = 1.0
        elif model == "ic":
            pi2[v] = 1.0 - np.prod(1.0 - ps * pi1[srcs])
        else:
            pi2[v] = (ps * pi1[srcs]).sum()
    return pi2


@pytest.fixture
def chain_graph():
    """0 -> 1 -> 2 with probability 0.5 on both edges."""
    return Graph(3, [0, 1], [1, 2], [0.5, 0.5])
