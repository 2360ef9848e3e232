import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapval import geom
from lapval.geom import (
    DegenerateBodyError,
    DimensionMismatchError,
    Hyperplane,
    LinearMap,
)
from lapval.sampling import random_interior_hyperplane, random_map, random_polytope, rng_from_seed


def test_hull_removes_interior_points():
    P = geom.convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (0.5, 0.5)])
    assert P.vertices.shape == (4, 2)
    assert P.dim == 2


def test_hull_collinear_gives_segment():
    P = geom.convex_hull([(0, 0), (1, 1), (2, 2)])
    assert P.dim == 1
    assert P.vertices.shape == (2, 2)
    np.testing.assert_allclose(P.vertices, [[0, 0], [2, 2]], atol=1e-12)


def test_hull_simplex_already_extreme():
    T = geom.std_simplex(2)
    P = geom.convex_hull(T.vertices)
    np.testing.assert_allclose(P.vertices, T.vertices)


def test_hull_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        geom.convex_hull([[0, 0], [1, 2, 3]])


def test_clip_axis_cut():
    minus, plus, section = geom.clip(geom.cube(2), Hyperplane([1, 0], 0.5))
    assert math.isclose(geom.volume(minus), 0.5)
    assert math.isclose(geom.volume(plus), 0.5)
    assert section.dim == 1


def test_clip_missing_plane():
    C = geom.cube(2)
    minus, plus, section = geom.clip(C, Hyperplane([1, 0], 5.0))
    assert math.isclose(geom.volume(minus), 1.0)
    assert plus.is_empty or not plus.is_full_dim
    assert section.is_empty


def test_clip_simplex_matches_split_maps():
    # the standard simplex cut by the plane with normal (1-l)e1 - l e2
    lam = 0.5
    T = geom.std_simplex(2)
    H = Hyperplane([1 - lam, -lam], 0.0)
    minus, plus, _ = geom.clip(T, H)
    phi1 = LinearMap([[lam, 0], [1 - lam, 1]])
    phi2 = LinearMap([[1, lam], [0, 1 - lam]])
    for piece, phi in ((minus, phi1), (plus, phi2)):
        expected = geom.transform_body(T, phi)
        assert geom.hausdorff(piece, expected) < 1e-12


def test_triangulate_cube():
    tris = geom.triangulate(geom.convex_hull(geom.cube(2).vertices))
    assert len(tris) == 2
    assert math.isclose(sum(s.volume for s in tris), 1.0)
    tris3 = geom.triangulate(geom.convex_hull(geom.cube(3).vertices))
    assert math.isclose(sum(s.volume for s in tris3), 1.0, rel_tol=1e-12)


def test_triangulate_simplex_is_itself():
    tris = geom.triangulate(geom.std_simplex(3))
    assert len(tris) == 1
    assert math.isclose(tris[0].volume, 1 / 6)


def test_triangulate_rejects_lower_dim():
    seg = geom.convex_hull([(0, 0), (1, 1)])
    with pytest.raises(DegenerateBodyError):
        geom.triangulate(seg)


def test_triangulate_interior_point_partition():
    rng = rng_from_seed(5)
    P = random_polytope(rng, 3)
    tris = geom.triangulate(P)
    assert math.isclose(sum(s.volume for s in tris), geom.volume(P), rel_tol=1e-10)
    pts = rng.uniform(*P.bounding_box(), size=(1000, 3))
    inside = P.contains(pts, tol=-1e-9)  # strictly interior
    for p in pts[inside][:200]:
        owners = 0
        for s in tris:
            E = (s.vertices[1:] - s.vertices[0]).T
            lam = np.linalg.solve(E, p - s.vertices[0])
            coords = np.concatenate([[1 - lam.sum()], lam])
            if np.all(coords > 1e-9):
                owners += 1
        assert owners <= 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_volume_standard_bodies(n):
    assert math.isclose(geom.volume(geom.std_simplex(n)), 1 / math.factorial(n))
    assert math.isclose(geom.volume(geom.cube(n)), 1.0)


def test_volume_scaling():
    P = geom.box_polytope([0, 0], [2, 2])
    assert math.isclose(geom.volume(P), 4.0)


def test_surface_area():
    assert math.isclose(geom.surface_area(geom.cube(2)), 4.0)
    assert math.isclose(geom.surface_area(geom.convex_hull(geom.cube(3).vertices)), 6.0)
    assert math.isclose(geom.surface_area(geom.std_simplex(2)), 2 + math.sqrt(2))


def test_hausdorff_basics():
    C = geom.cube(2)
    assert geom.hausdorff(C, C) == 0.0
    t = geom.transform_body(C, None, [0.25, 0.0])
    assert math.isclose(geom.hausdorff(C, t), 0.25, rel_tol=1e-10)
    eps = 0.1
    grown = geom.box_polytope([0, 0], [1 + eps, 1 + eps])
    assert math.isclose(geom.hausdorff(C, grown), eps * math.sqrt(2), rel_tol=1e-9)


def test_hausdorff_triangle_inequality():
    rng = rng_from_seed(11)
    for _ in range(10):
        P, Q, R = (random_polytope(rng, 2) for _ in range(3))
        assert geom.hausdorff(P, R) <= geom.hausdorff(P, Q) + geom.hausdorff(Q, R) + 1e-10


def test_transform_body_volume_and_box():
    C = geom.cube(3)
    doubled = geom.transform_body(C, LinearMap.scaling(3, 2.0))
    assert math.isclose(geom.volume(doubled), 8.0)
    stretched = geom.transform_body(C, LinearMap.scaling(3, [1.5, 1.0, 1.0]))
    assert stretched.box is not None
    np.testing.assert_allclose(stretched.box[1], [1.5, 1.0, 1.0])
    shifted = geom.transform_body(C, None, [0, 1, 2])
    assert math.isclose(geom.volume(shifted), 1.0)


def test_transform_composition():
    rng = rng_from_seed(3)
    P = random_polytope(rng, 3)
    phi, psi = random_map(rng, 3), random_map(rng, 3)
    once = geom.transform_body(geom.transform_body(P, phi), psi)
    composed = geom.transform_body(P, psi @ phi)
    np.testing.assert_allclose(once.vertices, composed.vertices, atol=1e-12)


def test_singular_map_rejected():
    with pytest.raises(geom.SingularMapError):
        LinearMap(np.zeros((2, 2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=3))
def test_hull_idempotent(seed, n):
    P = random_polytope(rng_from_seed(seed), n)
    Q = geom.convex_hull(P.vertices)
    np.testing.assert_allclose(P.vertices, Q.vertices)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=3))
def test_clip_conserves_volume(seed, n):
    rng = rng_from_seed(seed)
    P = random_polytope(rng, n)
    H = random_interior_hyperplane(rng, P)
    minus, plus, _ = geom.clip(P, H)
    total = geom.volume(minus) + geom.volume(plus)
    assert math.isclose(total, geom.volume(P), rel_tol=1e-10)
