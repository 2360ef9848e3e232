import math

import numpy as np
import pytest

from lapval import geom, laplace, valuation
from lapval.geom import Hyperplane, LinearMap
from lapval.sampling import (
    random_interior_hyperplane,
    random_map,
    random_point,
    random_polytope,
    rng_from_seed,
)
from lapval.valuation import (
    CheckReport,
    DegenerateCutError,
    HarnessError,
    merge_reports,
)


def test_rel_err_basics():
    assert valuation.rel_err(1.0, 1.0) == 0.0
    assert math.isclose(valuation.rel_err(1.1, 1.0), 0.1, rel_tol=1e-12)
    # reference 0 falls back to the floor instead of dividing by zero
    assert valuation.rel_err(0.0, 0.0) == 0.0
    assert valuation.rel_err(1e-10, 0.0) > 1.0


def test_merge_reports():
    a = CheckReport("a", trials=3, max_rel_err=1e-12, passed=True)
    b = CheckReport("b", trials=2, max_rel_err=1e-8, passed=False, witnesses=[(None, [1.0])])
    merged = merge_reports("ab", [a, b])
    assert merged.trials == 5
    assert merged.max_rel_err == 1e-8
    assert not merged.passed
    assert len(merged.witnesses) == 1


def test_report_serialization():
    rep = CheckReport("x", trials=1, max_rel_err=0.0, passed=True, calibration=2.5)
    d = rep.to_dict()
    assert d["name"] == "x" and d["passed"] is True and d["calibration"] == 2.5


def test_extend_simple_is_idempotent_and_vanishes_low_dim():
    raw = valuation.ValuationHandle(lambda P, x: 1.0, "const")
    Z = valuation.extend_simple(raw)
    assert valuation.extend_simple(Z) is Z
    seg = geom.convex_hull([(0, 0), (1, 1)])
    assert Z(seg, [0.0, 0.0]) == 0.0
    assert Z(geom.cube(2), [0.0, 0.0]) == 1.0


def test_check_split_passes_for_laplace():
    Z = valuation.laplace_valuation()
    rng = rng_from_seed(2)
    for _ in range(10):
        K = random_polytope(rng, 2)
        H = random_interior_hyperplane(rng, K)
        rep = valuation.check_split(Z, K, H, [random_point(rng, 2)], 1e-9)
        assert rep.passed


def test_check_split_degenerate_cut_raises():
    Z = valuation.laplace_valuation()
    with pytest.raises(DegenerateCutError):
        valuation.check_split(Z, geom.cube(2), Hyperplane([1, 0], 5.0), [[1.0, 0.0]], 1e-9)


def test_check_split_rejects_non_valuation():
    bad = valuation.volume_squared_valuation()
    rng = rng_from_seed(13)
    K = random_polytope(rng, 2)
    H = random_interior_hyperplane(rng, K)
    rep = valuation.check_split(bad, K, H, [random_point(rng, 2)], 1e-9)
    assert not rep.passed
    assert rep.witnesses


def test_check_gl_covariance():
    Z = valuation.laplace_valuation()
    rng = rng_from_seed(21)
    for _ in range(10):
        rep = valuation.check_gl_covariance(
            Z, random_polytope(rng, 3), random_map(rng, 3), [random_point(rng, 3)], 1e-9
        )
        assert rep.passed


def test_check_gl_requires_positive_det():
    Z = valuation.laplace_valuation()
    flip = LinearMap([[-1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(HarnessError):
        valuation.check_gl_covariance(Z, geom.cube(2), flip, [[1.0, 0.0]], 1e-9)


def test_check_translation_covariance():
    Z = valuation.laplace_valuation()
    rng = rng_from_seed(22)
    for _ in range(10):
        rep = valuation.check_translation_covariance(
            Z,
            random_polytope(rng, 2),
            rng.uniform(-1, 1, size=2),
            [random_point(rng, 2)],
            1e-9,
        )
        assert rep.passed


def test_translation_covariance_rejects_invariant_valuation():
    # plain volume is translation invariant, not covariant
    rep = valuation.check_translation_covariance(
        valuation.volume_valuation(), geom.cube(2), [1.0, 0.0], [[2.0, 0.0]], 1e-9
    )
    assert not rep.passed


def test_eq30_arguments():
    x1, x2 = valuation.eq30_arguments(np.array([2.0, 4.0, 7.0]), 0.25)
    np.testing.assert_allclose(x1, [0.25 * 2 + 0.75 * 4, 4.0, 7.0])
    np.testing.assert_allclose(x2, [2.0, 0.25 * 2 + 0.75 * 4, 7.0])


def test_check_eq30_for_simplex_transform():
    rng = rng_from_seed(30)
    for n in (2, 3):
        T = geom.std_simplex(n)
        f = lambda x: laplace.laplace_polytope(T, x)
        for lam in (0.2, 0.5, 0.85):
            rep = valuation.check_eq30(f, lam, [random_point(rng, n) for _ in range(5)], 1e-9)
            assert rep.passed


def test_check_eq30_rejects_cube_transform():
    # the functional equation characterizes the simplex, not the cube
    C = geom.cube(2)
    f = lambda x: laplace.laplace_polytope(C, x)
    rng = rng_from_seed(33)
    rep = valuation.check_eq30(f, 0.3, [random_point(rng, 2) for _ in range(10)], 1e-9)
    assert not rep.passed


def test_check_eq30_lambda_guard():
    with pytest.raises(HarnessError):
        valuation.check_eq30(lambda x: 1.0, 1.5, [[1.0, 1.0]], 1e-9)


def test_permutation_symmetry_simplex():
    rng = rng_from_seed(44)
    for n in (2, 3, 4):
        T = geom.std_simplex(n)
        f = lambda x: laplace.laplace_polytope(T, x)
        xs = [random_point(rng, n) for _ in range(5)]
        rep = valuation.check_permutation_symmetry(f, xs, 1e-12, even_only=False)
        assert rep.passed
        assert rep.trials == 5 * math.factorial(n)


def test_permutation_symmetry_detects_asymmetric():
    f = lambda x: float(np.exp(-x[0]))
    rng = rng_from_seed(45)
    rep = valuation.check_permutation_symmetry(f, [random_point(rng, 2)], 1e-12, even_only=False)
    assert not rep.passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cube_recursion_and_calibration(n):
    Z = valuation.laplace_valuation()
    for p, q in ((1, 1), (2, 3), (5, 7), (10, 9)):
        rep = valuation.check_cube_recursion(Z, n, p, q, 1e-10)
        assert rep.passed
        assert math.isclose(rep.calibration, 1.0, rel_tol=1e-10)


def test_cube_recursion_scaled_calibration():
    for c in (-2.0, 0.5, 3.0):
        rep = valuation.check_cube_recursion(valuation.scaled_laplace(c), 2, 3, 4, 1e-10)
        assert rep.passed
        assert math.isclose(rep.calibration, c, rel_tol=1e-10)


def test_cube_recursion_guards():
    with pytest.raises(HarnessError):
        valuation.check_cube_recursion(valuation.laplace_valuation(), 2, 0, 3, 1e-10)


def test_continuity_box_shrink():
    Z = valuation.laplace_valuation()
    n = 2
    target = geom.cube(n)
    seq = [
        geom.box_polytope(np.zeros(n), [1.0 + 1.0 / i, 1.0]) for i in (1, 10, 100, 1000, 10000)
    ]
    rep = valuation.check_continuity(Z, seq, target, np.zeros(n), tol=1e-3)
    assert rep.passed


def test_continuity_detects_jump():
    Z = valuation.laplace_valuation()
    n = 2
    target = geom.cube(n)
    seq = [geom.box_polytope(np.zeros(n), [2.0, 1.0])] * 5  # never converges
    rep = valuation.check_continuity(Z, seq, target, np.zeros(n), tol=1e-3)
    assert not rep.passed
