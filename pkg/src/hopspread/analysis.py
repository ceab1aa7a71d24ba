"""Closed-form guarantees on scale-free random graphs.

Everything here works with two truncated power-law distributions: the degree
law P0(d) proportional to d^-gamma and the size-biased neighbor law P1(d)
proportional to d^(1-gamma). From them come the ratio lower bound alpha (how
much of the full spread the hop-limited spread must capture), the expected
one-hop spread floor, and the activated-fraction fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TRUNCATION = 10**6
FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITERS = 10**5


@dataclass(frozen=True)
class ScaleFreeParams:
    """Graph-ensemble parameters: exponent, uniform p, and seed ratio."""

    gamma: float
    p: float = 0.0
    seed_ratio: float = 0.0
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1 for a normalizable degree law")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if not 0.0 <= self.seed_ratio <= 1.0:
            raise ValueError("seed_ratio must be in [0, 1]")
        if self.truncation < 10**3:
            raise ValueError("truncation must be at least 1000")


@lru_cache(maxsize=64)
def _norm(gamma, exponent, truncation):
    """Truncated sum of d^exponent for d = 1..truncation."""
    return float(np.power(np.arange(1, truncation + 1, dtype=np.float64), exponent).sum())


@lru_cache(maxsize=16)
def _pmf(gamma, exponent, truncation):
    d = np.arange(1, truncation + 1, dtype=np.float64)
    pmf = np.power(d, exponent)
    pmf /= pmf.sum()
    return pmf


def _exponent(params, which):
    if which == "p0":
        if not params.gamma > 1.0:
            raise ValueError("P0 requires gamma > 1")
        return -params.gamma
    if which == "p1":
        if not params.gamma > 2.0:
            raise ValueError("P1 requires gamma > 2")
        return 1.0 - params.gamma
    raise ValueError(f"unknown distribution {which!r}")


def degree_dist(params, which, d):
    """P0(d) or P1(d) under the truncated power law."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    exp = _exponent(params, which)
    if d > params.truncation:
        return 0.0
    return float(d**exp) / _norm(params.gamma, exp, params.truncation)


def truncation_tail(params, which="p0"):
    """Integral-test estimate of the probability mass beyond the truncation."""
    exp = _exponent(params, which)
    d0 = float(params.truncation)
    tail = d0 ** (exp + 1.0) / (-exp - 1.0)
    return tail / _norm(params.gamma, exp, params.truncation)


def alpha_lower_bound(params):
    """Closed-form floor on (hop-limited spread) / (full spread).

    Clamped to [0, 1]; a vanishing denominator is reported as an error
    rather than clamped away.
    """
    r = params.seed_ratio
    p = params.p
    p0_1 = degree_dist(params, "p0", 1)
    p1_1 = degree_dist(params, "p1", 1)
    a = 1.0 - (1.0 - r) * p1_1
    numerator = 1.0 - (1.0 - r) * (1.0 - p * r)
    denominator = 1.0 - (1.0 - r) * p0_1 * (1.0 - p * a)
    if abs(denominator) < 1e-15:
        raise ValueError("degenerate denominator in ratio lower bound")
    return float(min(max(numerator / denominator, 0.0), 1.0))


def guarantee_factor(alpha):
    """Greedy approximation factor (1 - 1/e) * alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    return (1.0 - 1.0 / math.e) * alpha


def one_hop_expected_lb(params, n, k):
    """Expected one-hop spread floor (p+1)k - p k^2 / n for uniform p."""
    if k > n:
        raise ValueError("k cannot exceed n")
    p = params.p
    return (p + 1.0) * k - p * k * k / n


def solve_expected_fraction(params):
    """Fixed point of the activated-fraction equations.

    Returns (phi, varphi): phi is the expected fraction of nodes activated
    without hop limit, varphi the instrumental edge-following fraction.
    Plain iteration, with 0.5 damping engaged if the updates oscillate.
    """
    r = params.seed_ratio
    p = params.p
    d_max = params.truncation
    p1 = _pmf(params.gamma, _exponent(params, "p1"), d_max)
    p0 = _pmf(params.gamma, _exponent(params, "p0"), d_max)
    buf = np.empty(d_max)
    varphi = r
    damping = 1.0
    prev_delta = None
    for _ in range(FIXED_POINT_MAX_ITERS):
        x = 1.0 - p * varphi
        buf[0] = 1.0
        buf[1:] = x
        np.cumprod(buf, out=buf)  # x^0 .. x^(d_max - 1)
        nxt = 1.0 - (1.0 - r) * float(p1 @ buf)
        delta = nxt - varphi
        if abs(delta) < FIXED_POINT_TOL:
            varphi = nxt
            break
        if prev_delta is not None and delta * prev_delta < 0.0:
            damping = 0.5
        prev_delta = delta
        varphi += damping * delta
    else:
        raise RuntimeError("activated-fraction fixed point did not converge")
    x = 1.0 - p * varphi
    buf[0] = 1.0
    buf[1:] = x
    np.cumprod(buf, out=buf)
    phi = 1.0 - (1.0 - r) * x * float(p0 @ buf)
    return float(min(max(phi, 0.0), 1.0)), float(min(max(varphi, 0.0), 1.0))


def fixed_point_residuals(params, phi, varphi):
    """How far (phi, varphi) are from satisfying both fraction equations."""
    r = params.seed_ratio
    p = params.p
    d_max = params.truncation
    p1 = _pmf(params.gamma, _exponent(params, "p1"), d_max)
    p0 = _pmf(params.gamma, _exponent(params, "p0"), d_max)
    x = 1.0 - p * varphi
    powers = np.empty(d_max)
    powers[0] = 1.0
    powers[1:] = x
    np.cumprod(powers, out=powers)
    res1 = (1.0 - varphi) - (1.0 - r) * float(p1 @ powers)
    res2 = (1.0 - phi) - (1.0 - r) * x * float(p0 @ powers)
    return abs(res1), abs(res2)


def alpha_surface(gamma, ps, seed_ratios, truncation=DEFAULT_TRUNCATION):
    """Grid of (p, seed_ratio, alpha) rows over the given axes."""
    rows = []
    for p in ps:
        for r in seed_ratios:
            params = ScaleFreeParams(gamma=gamma, p=float(p), seed_ratio=float(r), truncation=truncation)
            rows.append((float(p), float(r), alpha_lower_bound(params)))
    return rows


def format_surface_csv(rows):
    """CSV text for a surface grid: header plus 10-significant-digit rows."""
    lines = ["p,seed_ratio,alpha"]
    for p, r, alpha in rows:
        lines.append(f"{p:.10g},{r:.10g},{alpha:.10g}")
    return "\n".join(lines) + "\n"
