"""Abstract valuation handles and the property harness.

Every axiom the characterization rests on -- the splitting law, positive-GL
covariance, logarithmic translation covariance, the cube recursion with its
calibration constant, the simplex functional equation, permutation symmetry,
and pointwise continuity along converging bodies -- is mechanized here as a
pass/fail check returning a ``CheckReport``.  The Laplace transform is the
canonical handle; deliberately broken handles serve as counterexamples.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import geom, laplace
from .geom import Hyperplane, LinearMap, Polytope

REL_FLOOR = 1e-300


class HarnessError(Exception):
    pass


class DegenerateCutError(HarnessError):
    pass


@dataclass(frozen=True)
class ValuationHandle:
    eval: object  # callable (Polytope, x) -> float
    label: str
    simple_extended: bool = False

    def __call__(self, P: Polytope, x) -> float:
        return self.eval(P, x)


@dataclass
class CheckReport:
    name: str
    trials: int
    max_rel_err: float
    passed: bool
    witnesses: list = field(default_factory=list)
    calibration: float | None = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "trials": self.trials,
            "max_rel_err": self.max_rel_err,
            "passed": bool(self.passed),
            "witnesses": [
                {"body": _body_brief(b), "point": np.asarray(x, float).tolist()}
                for b, x in self.witnesses
            ],
        }
        if self.calibration is not None:
            out["calibration"] = self.calibration
        return out


def _body_brief(body) -> object:
    if isinstance(body, Polytope):
        return {"n": body.n, "vertices": body.vertices.tolist()}
    return repr(body)


def rel_err(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), REL_FLOOR)


def merge_reports(name: str, reports) -> CheckReport:
    reports = list(reports)
    return CheckReport(
        name=name,
        trials=sum(r.trials for r in reports),
        max_rel_err=max((r.max_rel_err for r in reports), default=0.0),
        passed=all(r.passed for r in reports),
        witnesses=[w for r in reports for w in r.witnesses],
        calibration=next((r.calibration for r in reports if r.calibration is not None), None),
    )


def _report(name, residuals, witnesses, tol, calibration=None) -> CheckReport:
    worst = max(residuals, default=0.0)
    return CheckReport(
        name=name,
        trials=len(residuals),
        max_rel_err=worst,
        passed=worst <= tol,
        witnesses=witnesses,
        calibration=calibration,
    )


# -- canonical handles ---------------------------------------------------

def laplace_valuation() -> ValuationHandle:
    return ValuationHandle(laplace.laplace_polytope, "laplace", simple_extended=True)


def scaled_laplace(c: float) -> ValuationHandle:
    return ValuationHandle(
        lambda P, x: c * laplace.laplace_polytope(P, x),
        f"{c}*laplace",
        simple_extended=True,
    )


def volume_squared_valuation() -> ValuationHandle:
    """Not a valuation: (a+b)^2 != a^2 + b^2 for positive volumes."""
    return ValuationHandle(lambda P, x: geom.volume(P) ** 2, "vol^2", simple_extended=True)


def volume_valuation() -> ValuationHandle:
    """A valuation, but translation invariant instead of covariant."""
    return ValuationHandle(lambda P, x: geom.volume(P), "vol", simple_extended=True)


def extend_simple(Z: ValuationHandle) -> ValuationHandle:
    """Map lower-dimensional bodies to 0, leave full-dimensional ones alone."""
    if Z.simple_extended:
        return Z
    inner = Z.eval

    def evaluate(P: Polytope, x) -> float:
        if P.is_empty or not P.is_full_dim:
            return 0.0
        return inner(P, x)

    return ValuationHandle(evaluate, Z.label + "|simple", simple_extended=True)


# -- checks --------------------------------------------------------------

def check_split(Z: ValuationHandle, K: Polytope, H: Hyperplane, xs, tol: float) -> CheckReport:
    """Z K = Z(K cap H^-) + Z(K cap H^+) pointwise."""
    Z = extend_simple(Z)
    minus, plus, _ = geom.clip(K, H)
    if not (minus.is_full_dim and plus.is_full_dim):
        raise DegenerateCutError("hyperplane misses the interior of the body")
    residuals, witnesses = [], []
    for x in xs:
        whole = Z(K, x)
        err = rel_err(Z(minus, x) + Z(plus, x), whole)
        residuals.append(err)
        if err > tol:
            witnesses.append((K, x))
    return _report("split", residuals, witnesses, tol)


def check_gl_covariance(Z: ValuationHandle, K: Polytope, phi: LinearMap, xs, tol: float) -> CheckReport:
    """Z(phi K)(x) = |det phi| Z K(phi^t x), det phi > 0."""
    if phi.det <= 0:
        raise HarnessError("covariance check requires positive determinant")
    phiK = geom.transform_body(K, phi)
    residuals, witnesses = [], []
    for x in xs:
        x = geom.as_point(x)
        err = rel_err(Z(phiK, x), abs(phi.det) * Z(K, phi.matrix.T @ x))
        residuals.append(err)
        if err > tol:
            witnesses.append((K, x))
    return _report("gl_covariance", residuals, witnesses, tol)


def check_translation_covariance(Z: ValuationHandle, K: Polytope, t, xs, tol: float) -> CheckReport:
    """Z(K + t)(x) = exp(-<t, x>) Z K(x)."""
    t = geom.as_point(t)
    Kt = geom.transform_body(K, None, t)
    residuals, witnesses = [], []
    for x in xs:
        x = geom.as_point(x)
        err = rel_err(Z(Kt, x), math.exp(-float(t @ x)) * Z(K, x))
        residuals.append(err)
        if err > tol:
            witnesses.append((K, x))
    return _report("translation_covariance", residuals, witnesses, tol)


def eq30_arguments(x: np.ndarray, lam: float):
    """The two substituted points of the functional equation."""
    x = geom.as_point(x)
    mix = lam * x[0] + (1.0 - lam) * x[1]
    x1 = x.copy()
    x1[0] = mix
    x2 = x.copy()
    x2[1] = mix
    return x1, x2


def check_eq30(f, lam: float, xs, tol: float) -> CheckReport:
    """f(x) = lam f(phi_1^t x) + (1 - lam) f(phi_2^t x)."""
    if not 0.0 < lam < 1.0:
        raise HarnessError("lambda must lie in (0, 1)")
    residuals, witnesses = [], []
    for x in xs:
        x = geom.as_point(x)
        x1, x2 = eq30_arguments(x, lam)
        err = rel_err(lam * f(x1) + (1.0 - lam) * f(x2), f(x))
        residuals.append(err)
        if err > tol:
            witnesses.append((None, x))
    return _report("eq30", residuals, witnesses, tol)


def check_permutation_symmetry(f, xs, tol: float, even_only: bool = True) -> CheckReport:
    """f(x) = f(pi x) over coordinate permutations."""
    residuals, witnesses = [], []
    for x in xs:
        x = geom.as_point(x)
        n = x.size
        if n < 2:
            raise HarnessError("permutation symmetry needs n >= 2")
        ref = f(x)
        for perm in itertools.permutations(range(n)):
            if even_only and _parity(perm) < 0:
                continue
            err = rel_err(f(x[list(perm)]), ref)
            residuals.append(err)
            if err > tol:
                witnesses.append((None, x))
    return _report("permutation_symmetry", residuals, witnesses, tol)


def _parity(perm) -> int:
    perm = list(perm)
    parity = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length and length % 2 == 0:
            parity = -parity
    return parity


def check_cube_recursion(Z: ValuationHandle, n: int, p: int, q: int, tol: float) -> CheckReport:
    """The rational-axis recursion on the unit cube, both axis directions,
    plus the calibration constant Z C^n(e_1) / (1 - e^{-1})."""
    if p < 1 or q < 1:
        raise HarnessError("p, q must be >= 1")
    C = geom.cube(n)
    e1 = np.zeros(n)
    e1[0] = 1.0
    residuals, witnesses = [], []
    for sign in (1.0, -1.0):
        direction = sign * e1
        lhs = (q / p) * Z(C, (q / p) * direction)
        rhs = (1.0 / p) * sum(
            math.exp(-sign * j / p) * Z(C, direction / p) for j in range(q)
        )
        scale = max(abs(lhs), abs(rhs), REL_FLOOR)
        err = abs(lhs - rhs) / scale
        residuals.append(err)
        if err > tol:
            witnesses.append((C, (q / p) * direction))
    calibration = Z(C, e1) / (1.0 - math.exp(-1.0))
    return _report("cube_recursion", residuals, witnesses, tol, calibration=calibration)


def check_continuity(Z: ValuationHandle, K_seq, K: Polytope, x, tol: float = 1e-3) -> CheckReport:
    """|Z K_i(x) - Z K(x)| along K_i -> K: nonincreasing envelope from some
    index on, final error below tol.  No rate is asserted (the theoretical
    bound depends on a surface-area term we do not compute in general)."""
    x = geom.as_point(x)
    ref = Z(K, x)
    errors = [abs(Z(Ki, x) - ref) for Ki in K_seq]
    envelope = list(itertools.accumulate(reversed(errors), max))[::-1]
    half = len(errors) // 2
    ok = errors[-1] <= tol and envelope[half] <= max(envelope[0], tol)
    return CheckReport(
        name="continuity",
        trials=len(errors),
        max_rel_err=errors[-1],
        passed=bool(ok),
        witnesses=[] if ok else [(K, x)],
    )
