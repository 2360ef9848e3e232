import math

import numpy as np
import pytest

from lapval import functrans, geom, laplace, oracle
from lapval.functrans import (
    GrowthViolationError,
    StepFunction,
    StepFunctionError,
    ZeroViolationError,
)
from lapval.sampling import random_map, random_point, rng_from_seed
from lapval.suites import random_step


def two_box_step():
    A = geom.box_polytope([0.0, 0.0], [1.0, 1.0])
    B = geom.box_polytope([1.0, 0.0], [2.0, 1.0])
    return StepFunction.build([(2.0, A), (-0.5, B)], 2)


def test_build_drops_null_pieces():
    seg = geom.convex_hull([(0, 0), (1, 1)])
    f = StepFunction.build([(0.0, geom.cube(2)), (1.0, seg), (3.0, geom.cube(2))], 2)
    assert len(f.pieces) == 1
    assert f.pieces[0][0] == 3.0


def test_build_dimension_mismatch():
    with pytest.raises(StepFunctionError):
        StepFunction.build([(1.0, geom.cube(2)), (1.0, geom.cube(3))])
    with pytest.raises(StepFunctionError):
        StepFunction.build([])


def test_value_at_and_scale():
    f = two_box_step()
    vals = f.value_at([[0.5, 0.5], [1.5, 0.5], [5.0, 5.0]])
    np.testing.assert_allclose(vals, [2.0, -0.5, 0.0])
    g = f.scale(-2.0)
    np.testing.assert_allclose(g.value_at([[0.5, 0.5], [1.5, 0.5]]), [-4.0, 1.0])


def test_support_box():
    lo, hi = two_box_step().support_box()
    np.testing.assert_allclose(lo, [0.0, 0.0])
    np.testing.assert_allclose(hi, [2.0, 1.0])


def test_growth_registry_accepts_and_rejects():
    for name in ("identity", "saturate", "scaled:-2", "scaled:0.5"):
        h = functrans.growth_by_name(name)
        assert h(0.0) == 0.0
    with pytest.raises(GrowthViolationError):
        functrans.growth_by_name("sqrtsign")
    with pytest.raises(ZeroViolationError):
        functrans.growth_by_name("affine1")
    with pytest.raises(StepFunctionError):
        functrans.growth_by_name("no-such-h")


def test_validate_h_sample_requirements():
    with pytest.raises(StepFunctionError):
        functrans.validate_h(lambda a: a, 1.0, sample=[0.0, 1.0, -1.0])  # span too small
    with pytest.raises(StepFunctionError):
        functrans.validate_h(lambda a: a, 1.0, sample=[-10.0, 10.0, 1.0])  # no zero


def test_growth_counterexample_construction():
    for j in (1, 5, 12, 20):
        alpha, g = functrans.growth_counterexample(j, 2)
        assert alpha == 4.0 ** (-(j + 1))
        (w, E), = g.pieces
        assert w == alpha
        # the L^1 norm of the piece is 2^{-j}
        assert math.isclose(alpha * geom.volume(E), 2.0**-j, rel_tol=1e-12)
        # while sqrt reshaping keeps the transform at 0 bounded below
        sqrt_h = functrans.GrowthFunction(
            lambda a: math.copysign(math.sqrt(abs(a)), a), math.inf, "sqrtsign-raw"
        )
        value = functrans.transform_step(g, sqrt_h, np.zeros(2))
        assert value >= 0.5


def test_transform_step_is_weighted_sum():
    f = two_box_step()
    h = functrans.growth_by_name("identity")
    x = np.array([0.7, -0.3])
    expected = 2.0 * laplace.laplace_polytope(f.pieces[0][1], x) - 0.5 * laplace.laplace_polytope(
        f.pieces[1][1], x
    )
    assert math.isclose(functrans.transform_step(f, h, x), expected, rel_tol=1e-14)


def test_transform_step_saturate_reshapes_weights():
    f = two_box_step()
    h = functrans.growth_by_name("saturate")
    x = np.zeros(2)
    expected = (2.0 / 3.0) * 1.0 + (-0.5 / 1.5) * 1.0  # volumes are 1 each
    assert math.isclose(functrans.transform_step(f, h, x), expected, rel_tol=1e-13)


def test_transform_step_overlap_detection():
    A = geom.box_polytope([0.0, 0.0], [1.0, 1.0])
    B = geom.box_polytope([0.5, 0.0], [1.5, 1.0])
    f = StepFunction(((1.0, A), (1.0, B)), 2)
    h = functrans.growth_by_name("identity")
    with pytest.raises(StepFunctionError):
        functrans.transform_step(f, h, np.zeros(2), check_overlap=True)
    # disjoint pieces pass the same check
    functrans.transform_step(two_box_step(), h, np.zeros(2), check_overlap=True)


def test_transform_step_vs_monte_carlo():
    rng = rng_from_seed(71)
    f = random_step(rng, 2)
    h = functrans.growth_by_name("saturate")
    x = np.array([0.4, -0.8])
    exact = functrans.transform_step(f, h, x)
    est = oracle.mc_step(f, h, x, 1_000_000, seed=77)
    assert abs(est.mean - exact) <= 4 * est.stderr + 1e-12


def test_transform_step_map_moves_regions():
    f = two_box_step()
    shifted = functrans.transform_step_map(f, None, [1.0, 0.0])
    np.testing.assert_allclose(shifted.value_at([[1.5, 0.5]]), [2.0])
    np.testing.assert_allclose(shifted.value_at([[0.5, 0.5]]), [0.0])


def test_join_meet_pointwise():
    rng = rng_from_seed(55)
    f = random_step(rng, 2)
    g = random_step(rng, 2)
    fmax, fmin = functrans.join_meet(f, g)
    pts = rng.uniform(-1.5, 1.5, size=(400, 2))
    fv, gv = f.value_at(pts), g.value_at(pts)
    np.testing.assert_allclose(fmax.value_at(pts), np.maximum(fv, gv), atol=1e-12)
    np.testing.assert_allclose(fmin.value_at(pts), np.minimum(fv, gv), atol=1e-12)


def test_join_meet_dimension_guard():
    f2 = StepFunction.build([(1.0, geom.cube(2))], 2)
    f3 = StepFunction.build([(1.0, geom.cube(3))], 3)
    with pytest.raises(StepFunctionError):
        functrans.join_meet(f2, f3)


def test_check_function_valuation():
    rng = rng_from_seed(60)
    for name in ("identity", "saturate", "scaled:-2"):
        h = functrans.growth_by_name(name)
        f, g = random_step(rng, 2), random_step(rng, 2)
        rep = functrans.check_function_valuation(f, g, h, [random_point(rng, 2)], 1e-9)
        assert rep.passed


def test_check_function_covariance():
    rng = rng_from_seed(61)
    h = functrans.growth_by_name("saturate")
    for _ in range(5):
        f = random_step(rng, 2)
        phi = random_map(rng, 2)
        t = rng.uniform(-1, 1, size=2)
        rep = functrans.check_function_covariance(f, h, phi, t, [random_point(rng, 2)], 1e-9)
        assert rep.passed


def test_scaled_h_is_homogeneous():
    rng = rng_from_seed(62)
    f = random_step(rng, 2)
    x = random_point(rng, 2)
    base = functrans.transform_step(f, functrans.growth_by_name("identity"), x)
    for c in (-2.0, 0.5, 3.0):
        scaled = functrans.transform_step(f, functrans.growth_by_name(f"scaled:{c}"), x)
        assert math.isclose(scaled, c * base, rel_tol=1e-12)
