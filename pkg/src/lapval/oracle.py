"""Monte Carlo ground truth, deliberately independent of the exact engine.

Rejection sampling from axis-aligned bounding boxes with a counter-based
Philox generator: the stream depends only on (seed, sample index), so
chunked or parallel evaluation reproduces the serial estimate bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom
from .functrans import GrowthFunction, StepFunction
from .geom import DegenerateBodyError, PolyUnion, Polytope

MIN_SAMPLES = 1_000
CHUNK = 1 << 18


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


def _stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def _estimate(lo, hi, x, integrand, N: int, seed: int) -> MCEstimate:
    """Integrate integrand(y) * exp(-<x,y>) over the box via plain sampling."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    x = geom.as_point(x)
    if N < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    box_vol = float(np.prod(hi - lo))
    rng = _stream(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < N:
        m = min(CHUNK, N - done)
        y = rng.random((m, lo.size)) * (hi - lo) + lo
        vals = integrand(y) * np.exp(-(y @ x))
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += m
    mean = total / N
    var = max(total_sq / N - mean * mean, 0.0) * N / max(N - 1, 1)
    return MCEstimate(
        mean=box_vol * mean,
        stderr=box_vol * float(np.sqrt(var / N)),
        samples=N,
        seed=int(seed),
    )


def mc_body(P: Polytope, x, N: int, seed: int) -> MCEstimate:
    if P.is_empty or not P.is_full_dim:
        raise DegenerateBodyError("oracle needs a full-dimensional body")
    lo, hi = P.bounding_box()
    return _estimate(lo, hi, x, lambda y: P.contains(y).astype(float), N, seed)


def mc_union(U: PolyUnion, x, N: int, seed: int) -> MCEstimate:
    lo, hi = U.bounding_box()

    def indicator(y):
        inside = np.zeros(y.shape[0], dtype=bool)
        for part in U.parts:
            inside |= part.contains(y)
        return inside.astype(float)

    return _estimate(lo, hi, x, indicator, N, seed)


def mc_step(f: StepFunction, h: GrowthFunction, x, N: int, seed: int) -> MCEstimate:
    if not f.pieces:
        return MCEstimate(0.0, 0.0, N, int(seed))
    lo, hi = f.support_box()
    hvec = np.vectorize(h, otypes=[float])

    def integrand(y):
        return hvec(f.value_at(y))

    return _estimate(lo, hi, x, integrand, N, seed)
