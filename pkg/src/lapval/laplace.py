"""Exact evaluation of int_K exp(-<x,y>) dy for simplices, boxes,
polytopes, and finite unions.

The workhorse is the confluent divided difference of exp: for a
non-degenerate simplex S with vertices v_0..v_n,

    int_S exp(-<x,y>) dy = n! vol(S) * dd_exp(-<x,v_0>, ..., -<x,v_n>),

so every polytope value reduces to divided differences over a fan
triangulation.  Boxes short-circuit through the separable product formula.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import geom
from .geom import DegenerateBodyError, PolyUnion, Polytope, Simplex

# Stability switch: Newton recursion for spread >= tau, centered symmetric
# series otherwise (the recursion cancels catastrophically on clustered nodes).
KERNEL_TAU_FACTOR = 1e-4
# Inside the recursion, sub-blocks narrower than this are filled by the
# series: each difference quotient over a gap g amplifies operand error by
# ~m/g, so quotients are only taken over gaps of order one.
NEWTON_BLOCK_SPREAD = 1.0
SERIES_CUTOFF = 1e-18
ZERO_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class TransformValue:
    value: float
    body: object
    point: np.ndarray


def _exp_dd_series(nodes: np.ndarray) -> float:
    """exp(mean) * sum_k h_k(nodes - mean) / (m+k)! via Newton's identities
    on complete homogeneous symmetric polynomials."""
    m = nodes.size - 1
    zbar = nodes.mean()
    d = nodes - zbar
    # power sums of the centered nodes; p_1 = 0 by construction
    max_terms = 600
    powers = np.ones_like(d)
    psums = []
    h = [1.0]
    total = 0.0
    inv_fact = 1.0 / math.factorial(m)
    term = h[0] * inv_fact
    total += term
    small_streak = 0
    for k in range(1, max_terms):
        powers = powers * d
        psums.append(float(np.sum(powers)))  # p_k = sum d^k
        hk = sum(psums[i] * h[k - 1 - i] for i in range(k)) / k
        h.append(hk)
        inv_fact /= m + k
        term = hk * inv_fact
        total += term
        # near-symmetric node sets make single odd-order terms vanish, so
        # stop only on consecutive negligible terms
        if abs(term) <= SERIES_CUTOFF * abs(total):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
    return math.exp(zbar) * total


def _exp_dd_newton(nodes: np.ndarray) -> float:
    """Newton divided-difference table on sorted nodes.

    Sub-blocks whose own spread falls under the clustering threshold are
    filled by the centered series instead of a difference quotient, so tight
    interior clusters (including exact repeats) never cancel."""
    z = np.sort(nodes)
    m1 = z.size
    prev = [math.exp(v) for v in z]
    for level in range(1, m1):
        cur = []
        for i in range(m1 - level):
            j = i + level
            gap = z[j] - z[i]
            local_tau = KERNEL_TAU_FACTOR * max(1.0, abs(float(z[i : j + 1].mean())))
            if gap < max(local_tau, NEWTON_BLOCK_SPREAD):
                cur.append(_exp_dd_series(z[i : j + 1]))
            else:
                cur.append((prev[i + 1] - prev[i]) / gap)
        prev = cur
    return prev[0]


def exp_dd(nodes) -> float:
    """Divided difference of z -> exp(z) at the given nodes (repeats allowed).

    Symmetric in node order and strictly positive.
    """
    z = np.asarray(nodes, dtype=float).ravel()
    if z.size == 0:
        raise ValueError("exp_dd needs at least one node")
    if z.size == 1:
        return math.exp(z[0])
    spread = float(z.max() - z.min())
    tau = KERNEL_TAU_FACTOR * max(1.0, abs(float(z.mean())))
    if spread >= tau:
        return _exp_dd_newton(z)
    return _exp_dd_series(z)


def laplace_simplex(S: Simplex, x) -> float:
    """int_S exp(-<x,y>) dy in closed form."""
    if S.degenerate:
        raise DegenerateBodyError("degenerate simplex")
    x = geom.as_point(x)
    nodes = -(S.vertices @ x)
    return abs(S._det) * exp_dd(nodes)


def laplace_box(lo, hi, x) -> float:
    """Separable product formula with the removable singularity at x_i = 0
    handled per axis (expm1-stable form)."""
    lo = np.atleast_1d(np.asarray(lo, float))
    hi = np.atleast_1d(np.asarray(hi, float))
    if np.any(lo >= hi):
        raise geom.GeometryError("empty box")
    x = geom.as_point(x)
    value = 1.0
    for li, hi_i, xi in zip(lo, hi, x):
        w = hi_i - li
        if abs(xi) < ZERO_AXIS_TOL:
            value *= w
        else:
            value *= math.exp(-xi * li) * (-math.expm1(-xi * w)) / xi
    return value


def laplace_polytope(P: Polytope, x) -> float:
    """L P(x); lower-dimensional bodies map to 0 (simple extension)."""
    if P.is_empty or not P.is_full_dim:
        return 0.0
    if P.box is not None:
        lo, hi = P.box
        return laplace_box(lo, hi, x)
    x = geom.as_point(x)
    return float(sum(laplace_simplex(s, x) for s in geom.triangulate(P)))


def laplace_union(U: PolyUnion, x) -> float:
    """Inclusion-exclusion over part intersections; lower-dimensional
    intersections contribute 0."""
    x = geom.as_point(x)
    return float(sum(sign * laplace_polytope(body, x) for sign, body in U.inclusion_exclusion()))


def _thread_width() -> int:
    try:
        return max(1, int(os.environ.get("LAPVAL_THREADS", "1")))
    except ValueError:
        return 1


def laplace_grid(P: Polytope, xs) -> list[TransformValue]:
    """Pointwise laplace_polytope over a list of points."""
    points = [geom.as_point(x) for x in xs]
    width = _thread_width()
    if width > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=width) as pool:
            values = list(pool.map(lambda p: laplace_polytope(P, p), points))
    else:
        values = [laplace_polytope(P, p) for p in points]
    return [TransformValue(v, P, p) for v, p in zip(values, points)]
