"""Named verification suites driving the property harness.

Each suite returns a list of CheckReports; the CLI serializes them and
maps overall pass/fail to the exit code.  All randomness flows from the
single seed argument.
"""
from __future__ import annotations

import math

import numpy as np

from . import dissect, functrans, geom, laplace, oracle, sampling, valuation
from .geom import PolyUnion
from .valuation import CheckReport, DegenerateCutError, merge_reports

LAMBDA_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def _axis(n: int, i: int = 0) -> np.ndarray:
    e = np.zeros(n)
    e[i] = 1.0
    return e


def _simplex_transform(n: int):
    T = geom.std_simplex(n)
    return lambda x: laplace.laplace_polytope(T, x)


def suite_split(n: int, seed: int, tol: float, trials: int = 200, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    Z = valuation.laplace_valuation()
    reports = []
    done = 0
    while done < trials:
        K = sampling.random_polytope(rng, n)
        H = sampling.random_interior_hyperplane(rng, K)
        x = sampling.random_point(rng, n)
        try:
            reports.append(valuation.check_split(Z, K, H, [x], tol))
        except DegenerateCutError:
            continue
        done += 1
    return [merge_reports("split", reports)]


def suite_gl(n: int, seed: int, tol: float, trials: int = 200, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    Z = valuation.laplace_valuation()
    reports = [
        valuation.check_gl_covariance(
            Z,
            sampling.random_polytope(rng, n),
            sampling.random_map(rng, n),
            [sampling.random_point(rng, n)],
            tol,
        )
        for _ in range(trials)
    ]
    return [merge_reports("gl_covariance", reports)]


def suite_translate(n: int, seed: int, tol: float, trials: int = 200, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    Z = valuation.laplace_valuation()
    reports = [
        valuation.check_translation_covariance(
            Z,
            sampling.random_polytope(rng, n),
            rng.uniform(-1.0, 1.0, size=n),
            [sampling.random_point(rng, n)],
            tol,
        )
        for _ in range(trials)
    ]
    return [merge_reports("translation_covariance", reports)]


def suite_cube_recursion(n: int, seed: int, tol: float, pq_max: int = 10, **_) -> list:
    Z = valuation.laplace_valuation()
    reports = []
    for p in range(1, pq_max + 1):
        for q in range(1, pq_max + 1):
            reports.append(valuation.check_cube_recursion(Z, n, p, q, tol))
    merged = merge_reports("cube_recursion", reports)
    merged.calibration = reports[0].calibration
    out = [merged]
    for c0 in (-2.0, 0.5, 3.0):
        rep = valuation.check_cube_recursion(valuation.scaled_laplace(c0), n, 3, 7, tol)
        err = abs(rep.calibration - c0) / abs(c0)
        out.append(
            CheckReport(
                name=f"calibration_c0={c0}",
                trials=1,
                max_rel_err=err,
                passed=rep.passed and err <= tol,
                calibration=rep.calibration,
            )
        )
    return out


def suite_eq30(n: int, seed: int, tol: float, points: int = 20, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    f = _simplex_transform(n)
    reports = []
    for lam in LAMBDA_GRID:
        xs = [sampling.random_point(rng, n) for _ in range(points)]
        reports.append(valuation.check_eq30(f, lam, xs, tol))
    return [merge_reports("eq30", reports)]


def suite_permutation(n: int, seed: int, tol: float, points: int = 50, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    f = _simplex_transform(n)
    xs = [sampling.random_point(rng, n) for _ in range(points)]
    return [valuation.check_permutation_symmetry(f, xs, tol, even_only=False)]


def order_simplex_residual(n: int, x) -> float:
    """Relative residual of sum over order simplices vs the cube value."""
    whole = laplace.laplace_polytope(geom.cube(n), x)
    parts = sum(laplace.laplace_simplex(s, x) for s in dissect.cube_order_simplices(n))
    return valuation.rel_err(parts, whole)


def lattice_residual(m: int, n: int, s: float) -> float:
    """Relative residual of the lattice-decomposition identity at s e_1."""
    e1 = _axis(n)
    whole = laplace.laplace_polytope(geom.std_simplex(n, scale=float(m)), s * e1)
    total = 0.0
    for k in range(m):
        total += laplace.laplace_polytope(dissect.m_piece(m - k, n), s * e1) * dissect.shift_weight(k, n, s)
    return valuation.rel_err(total, whole)


def suite_dissection(n: int, seed: int, tol: float, points: int = 20, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    res_order = [order_simplex_residual(n, sampling.random_point(rng, n)) for _ in range(points)]
    res_lattice = [
        lattice_residual(m, n, s)
        for m in range(n, 7)
        for s in (-2.0, -0.5, 0.5, 2.0)
    ]
    res_scaling = []
    for m in (2, 3):
        lhs, rhs = dissect.scaling_check(m, n, 1.0)
        res_scaling.append(valuation.rel_err(lhs, rhs))
    reports = [
        valuation._report("order_simplex_sum", res_order, [], tol),
        valuation._report("lattice_decomposition", res_lattice, [], tol),
        valuation._report("scaling_identity", res_scaling, [], max(tol, 1e-10)),
    ]
    return reports


def suite_continuity(n: int, seed: int, tol: float = 1e-3, **_) -> list:
    # the achievable error is bounded by the resolution of the finite
    # converging sequences, not by arithmetic precision
    tol = max(tol, 1e-3)
    Z = valuation.laplace_valuation()
    target = geom.cube(n)
    seq = [
        geom.box_polytope(np.zeros(n), np.ones(n) + (1.0 / i) * _axis(n))
        for i in (1, 3, 10, 30, 100, 300, 1000, 3000, 10000)
    ]
    rep_box = valuation.check_continuity(Z, seq, target, np.zeros(n), tol=tol)
    rep_box.name = "continuity_box"

    # shrinking pyramid over a hyperplane section: values must vanish
    center = geom.box_polytope(-0.5 * np.ones(n), 0.5 * np.ones(n))
    _, _, section = geom.clip(center, geom.Hyperplane(_axis(n, n - 1), 0.0))
    apex = _axis(n, n - 1)
    pyramids = [
        geom.convex_hull(np.vstack([section.vertices, s * apex, -s * apex]))
        for s in (0.5, 0.2, 0.1, 0.05, 0.01, 0.0005)
    ]
    rep_pyr = valuation.check_continuity(Z, pyramids, section, np.zeros(n), tol=tol)
    rep_pyr.name = "continuity_pyramid"
    return [rep_box, rep_pyr]


def random_step(rng: np.random.Generator, n: int) -> functrans.StepFunction:
    """Two random boxes with disjoint interiors and nonzero weights."""
    split = rng.uniform(-0.3, 0.3)
    pieces = []
    for side in (-1.0, 1.0):
        lo = rng.uniform(-1.0, -0.1, size=n)
        hi = rng.uniform(0.1, 1.0, size=n)
        if side < 0:
            lo[0] = split - rng.uniform(0.2, 1.0)
            hi[0] = split
        else:
            lo[0] = split
            hi[0] = split + rng.uniform(0.2, 1.0)
        w = float(rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0]))
        pieces.append((w, geom.box_polytope(lo, hi)))
    return functrans.StepFunction.build(pieces, n)


def suite_function_valuation(n: int, seed: int, tol: float, trials: int = 100, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    names = ("identity", "saturate", "scaled:-2")
    reports = []
    for i in range(trials):
        h = functrans.growth_by_name(names[i % len(names)])
        f = random_step(rng, n)
        g = random_step(rng, n)
        xs = [sampling.random_point(rng, n)]
        reports.append(functrans.check_function_valuation(f, g, h, xs, tol))
    return [merge_reports("function_valuation", reports)]


def suite_function_covariance(n: int, seed: int, tol: float, trials: int = 100, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    names = ("identity", "saturate", "scaled:-2")
    reports = []
    for i in range(trials):
        h = functrans.growth_by_name(names[i % len(names)])
        f = random_step(rng, n)
        phi = sampling.random_map(rng, n)
        t = rng.uniform(-1.0, 1.0, size=n)
        xs = [sampling.random_point(rng, n)]
        reports.append(functrans.check_function_covariance(f, h, phi, t, xs, tol))
    return [merge_reports("function_covariance", reports)]


def suite_growth_rejection(n: int, seed: int, tol: float, jmax: int = 20, **_) -> list:
    accepted = {"identity": True, "saturate": True, "sqrtsign": False, "affine1": False}
    ok = True
    for name, expect in accepted.items():
        try:
            functrans.growth_by_name(name)
            got = True
        except functrans.StepFunctionError:
            got = False
        ok &= got is expect
    rep_specimens = CheckReport(
        name="growth_specimens",
        trials=len(accepted),
        max_rel_err=0.0 if ok else 1.0,
        passed=ok,
    )

    # contradiction mechanism: L^1 norms halve while the transform at the
    # origin stays bounded away from 0
    sqrt_h = functrans.GrowthFunction(
        lambda a: math.copysign(math.sqrt(abs(a)), a), math.inf, "sqrtsign-raw"
    )
    mech_ok = True
    worst = math.inf
    for j in range(1, jmax + 1):
        alpha, g = functrans.growth_counterexample(j, n)
        norm = abs(alpha) * geom.volume(g.pieces[0][1])
        at_origin = abs(functrans.transform_step(g, sqrt_h, np.zeros(n)))
        mech_ok &= abs(norm - 2.0**-j) <= 1e-12 * 2.0**-j
        worst = min(worst, at_origin)
    mech_ok &= worst >= 0.5
    rep_mech = CheckReport(
        name="growth_counterexample_mechanism",
        trials=jmax,
        max_rel_err=0.0 if mech_ok else 1.0,
        passed=mech_ok,
    )
    return [rep_specimens, rep_mech]


def suite_oracle(n: int, seed: int, tol: float, trials: int = 100, oracle_n: int = 100_000, **_) -> list:
    rng = sampling.rng_from_seed(seed)
    hits = 0
    worst = 0.0
    witnesses = []
    for i in range(trials):
        P = sampling.random_polytope(rng, n)
        x = sampling.random_point(rng, n)
        exact = laplace.laplace_polytope(P, x)
        est = oracle.mc_body(P, x, oracle_n, seed + i + 1)
        dev = abs(est.mean - exact) / max(est.stderr, 1e-300)
        worst = max(worst, dev)
        if dev <= 4.0:
            hits += 1
        else:
            witnesses.append((P, x))
    passed = hits >= math.ceil(0.95 * trials)
    return [
        CheckReport(
            name="oracle_agreement",
            trials=trials,
            max_rel_err=worst,
            passed=passed,
            witnesses=witnesses if not passed else [],
        )
    ]


SUITES = {
    "split": suite_split,
    "gl": suite_gl,
    "translate": suite_translate,
    "cube-recursion": suite_cube_recursion,
    "eq30": suite_eq30,
    "permutation": suite_permutation,
    "dissection": suite_dissection,
    "continuity": suite_continuity,
    "function-valuation": suite_function_valuation,
    "function-covariance": suite_function_covariance,
    "growth-rejection": suite_growth_rejection,
    "oracle": suite_oracle,
}


def run_suite(name: str, n: int, seed: int, tol: float, **kwargs) -> list:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](n=n, seed=seed, tol=tol, **kwargs)
