"""Per-node upper bounds on single-seed hop-limited spread.

The recursion bound(0) = 1, bound(h)[v] = 1 + sum over out-edges of
p(v,w) * bound(h-1)[w] dominates the true h-hop spread of {v} and is exact
at h = 1. Each level is one linear pass over the edges, which is what makes
bootstrapping the first greedy iteration essentially free.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from ._segments import segment_sum

_cache = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class UpperBounds:
    """Dominating estimate of sigma_h({v}) for every node v."""

    h: int
    values: np.ndarray


def upper_bounds(g, h):
    """Compute (and cache per graph and hop count) the single-seed bounds."""
    if h < 0:
        raise ValueError("hop count must be non-negative")
    per_graph = _cache.setdefault(g, {})
    if h not in per_graph:
        values = np.ones(g.node_count)
        for _ in range(h):
            values = 1.0 + segment_sum(g.out_prob * values[g.out_dst], g.out_indptr)
        per_graph[h] = UpperBounds(h=h, values=values)
    return per_graph[h]
