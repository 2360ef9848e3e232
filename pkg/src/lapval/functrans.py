"""Transforms of step functions with weight reshaping: z(f) = L(h o f).

Step functions are finite weighted sums of indicators of interior-disjoint
convex polytopes.  A weight function h must vanish at 0 and satisfy a
declared linear growth bound; admissibility is falsified on samples rather
than proved symbolically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geom, laplace
from .geom import LinearMap, Polytope
from .valuation import CheckReport, HarnessError, _report, rel_err

OVERLAP_TOL = 1e-9


class StepFunctionError(Exception):
    pass


class GrowthViolationError(StepFunctionError):
    pass


class ZeroViolationError(StepFunctionError):
    pass


@dataclass(frozen=True)
class GrowthFunction:
    h: object  # callable real -> real
    gamma: float
    label: str = ""

    def __call__(self, a: float) -> float:
        return float(self.h(a))


@dataclass(frozen=True)
class StepFunction:
    """Weighted indicators of interior-disjoint polytopal regions."""

    pieces: tuple  # of (weight, Polytope)
    n: int

    @staticmethod
    def build(pieces, n: int | None = None) -> "StepFunction":
        kept = []
        for w, region in pieces:
            if w == 0.0 or region.is_empty or not region.is_full_dim:
                continue  # zero weights and null regions contribute nothing
            if n is None:
                n = region.n
            elif region.n != n:
                raise StepFunctionError("regions of differing ambient dimension")
            kept.append((float(w), region))
        if n is None:
            raise StepFunctionError("ambient dimension unknown for empty step function")
        return StepFunction(tuple(kept), n)

    def scale(self, s: float) -> "StepFunction":
        return StepFunction.build([(s * w, E) for w, E in self.pieces], self.n)

    def value_at(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, float))
        out = np.zeros(pts.shape[0])
        for w, E in self.pieces:
            mask = E.contains(pts)
            out[mask] = w  # pieces are interior-disjoint
        return out

    def support_box(self):
        if not self.pieces:
            raise StepFunctionError("empty support")
        los, his = zip(*(E.bounding_box() for _, E in self.pieces))
        return np.min(los, axis=0), np.max(his, axis=0)


# -- growth functions ----------------------------------------------------

def default_growth_sample() -> np.ndarray:
    near_zero = np.array([1e-6, -1e-6, 5e-7, 1e-7, 1e-8])
    return np.concatenate([[0.0], np.linspace(-10.0, 10.0, 201), near_zero])


def validate_h(h, gamma: float, sample=None, label: str = "") -> GrowthFunction:
    """Accept h only if h(0) = 0 and |h(a)| <= gamma |a| on the sample."""
    if sample is None:
        sample = default_growth_sample()
    sample = np.asarray(sample, float)
    if 0.0 not in sample or sample.max() < 10.0 or sample.min() > -10.0:
        raise StepFunctionError("sample must include 0 and span [-10, 10]")
    if not np.any((np.abs(sample) > 0) & (np.abs(sample) <= 1e-6)):
        raise StepFunctionError("sample must probe points within 1e-6 of 0")
    if h(0.0) != 0.0:
        raise ZeroViolationError(f"h(0) = {h(0.0)!r}, expected 0")
    for a in sample:
        if abs(h(a)) > gamma * abs(a) * (1.0 + 1e-12):
            raise GrowthViolationError(f"|h({a})| = {abs(h(a))} exceeds gamma*|a| = {gamma * abs(a)}")
    return GrowthFunction(h, float(gamma), label)


def growth_registry() -> dict:
    """Named weight functions for the CLI; the last two are rejection-test
    specimens that must fail validation."""
    return {
        "identity": (lambda a: a, 1.0),
        "saturate": (lambda a: a / (1.0 + abs(a)), 1.0),
        "sqrtsign": (lambda a: math.copysign(math.sqrt(abs(a)), a), 10.0),
        "affine1": (lambda a: a + 1.0, 1.0),
    }


def growth_by_name(name: str, sample=None) -> GrowthFunction:
    registry = growth_registry()
    if name.startswith("scaled:"):
        c = float(name.split(":", 1)[1])
        return validate_h(lambda a: c * a, abs(c), sample, label=name)
    if name not in registry:
        raise StepFunctionError(f"unknown growth function {name!r}")
    h, gamma = registry[name]
    return validate_h(h, gamma, sample, label=name)


def growth_counterexample(j: int, n: int, ratio_base: float = 2.0):
    """The thin-box construction defeating any sublinear-near-zero h:
    weights a_j with |h(a_j)| > 2^j |a_j| paired with boxes E_j of volume
    2^{-j} / |a_j|, so the L^1 norm is 2^{-j} while the transform at the
    origin stays bounded away from 0.  Tuned to square-root-type ratios."""
    alpha = 4.0 ** (-(j + 1))
    width = 2.0 ** (-j) / alpha
    lo = np.zeros(n)
    hi = np.ones(n)
    hi[0] = width
    E = geom.box_polytope(lo, hi)
    return alpha, StepFunction.build([(alpha, E)], n)


# -- transforms ----------------------------------------------------------

def transform_indicator(alpha: float, E: Polytope, h: GrowthFunction, x) -> float:
    return h(alpha) * laplace.laplace_polytope(E, x)


def _check_disjoint(f: StepFunction):
    for i in range(len(f.pieces)):
        for k in range(i + 1, len(f.pieces)):
            inter = geom.intersect(f.pieces[i][1], f.pieces[k][1])
            if geom.volume(inter) > OVERLAP_TOL:
                raise StepFunctionError("step-function pieces share interior volume")


def transform_step(f: StepFunction, h: GrowthFunction, x, check_overlap: bool = False) -> float:
    """L(h o f)(x) = sum_i h(a_i) L(E_i)(x)."""
    if check_overlap:
        _check_disjoint(f)
    return float(sum(transform_indicator(w, E, h, x) for w, E in f.pieces))


def transform_step_map(f: StepFunction, phi: LinearMap | None = None, t=None) -> StepFunction:
    """The step function f(phi^{-1}(. - t)): regions move, weights stay."""
    return StepFunction.build(
        [(w, geom.transform_body(E, phi, t)) for w, E in f.pieces], f.n
    )


# -- lattice operations --------------------------------------------------

def _carve(region: Polytope, holes) -> list:
    """Full-dimensional cells of region minus the union of the holes."""
    remaining = [region]
    for hole in holes:
        nxt = []
        for cell in remaining:
            nxt.extend(geom.difference(cell, hole))
        remaining = nxt
    return remaining


def join_meet(f: StepFunction, g: StepFunction):
    """Pointwise (max, min) on the common refinement of both region lists.

    Cells covered by only one function compare against the implicit 0."""
    if f.n != g.n:
        raise StepFunctionError("ambient dimension mismatch")
    max_pieces, min_pieces = [], []
    g_regions = [E for _, E in g.pieces]
    f_regions = [E for _, E in f.pieces]
    for wf, Ef in f.pieces:
        for wg, Eg in g.pieces:
            cell = geom.intersect(Ef, Eg)
            if cell.is_full_dim:
                max_pieces.append((max(wf, wg), cell))
                min_pieces.append((min(wf, wg), cell))
        for cell in _carve(Ef, g_regions):
            max_pieces.append((max(wf, 0.0), cell))
            min_pieces.append((min(wf, 0.0), cell))
    for wg, Eg in g.pieces:
        for cell in _carve(Eg, f_regions):
            max_pieces.append((max(wg, 0.0), cell))
            min_pieces.append((min(wg, 0.0), cell))
    return (
        StepFunction.build(max_pieces, f.n),
        StepFunction.build(min_pieces, f.n),
    )


# -- property checks -----------------------------------------------------

def check_function_valuation(f: StepFunction, g: StepFunction, h: GrowthFunction, xs, tol: float) -> CheckReport:
    """z(f v g) + z(f ^ g) = z(f) + z(g) with z = L(h o .)."""
    fmax, fmin = join_meet(f, g)
    residuals, witnesses = [], []
    for x in xs:
        lhs = transform_step(fmax, h, x) + transform_step(fmin, h, x)
        rhs = transform_step(f, h, x) + transform_step(g, h, x)
        err = abs(lhs - rhs) / max(abs(rhs), abs(lhs), 1e-300)
        residuals.append(err)
        if err > tol:
            witnesses.append((None, x))
    return _report("function_valuation", residuals, witnesses, tol)


def check_function_covariance(f: StepFunction, h: GrowthFunction, phi: LinearMap, t, xs, tol: float) -> CheckReport:
    """Both covariance identities of the function-side transform."""
    if phi.det <= 0:
        raise HarnessError("covariance check requires positive determinant")
    t = geom.as_point(t)
    moved = transform_step_map(f, phi)
    shifted = transform_step_map(f, None, t)
    residuals, witnesses = [], []
    for x in xs:
        x = geom.as_point(x)
        err_gl = rel_err(
            transform_step(moved, h, x),
            abs(phi.det) * transform_step(f, h, phi.matrix.T @ x),
        )
        err_tr = rel_err(
            transform_step(shifted, h, x),
            math.exp(-float(x @ t)) * transform_step(f, h, x),
        )
        err = max(err_gl, err_tr)
        residuals.append(err)
        if err > tol:
            witnesses.append((None, x))
    return _report("function_covariance", residuals, witnesses, tol)
