"""Random instance generation shared by the verification suites and tests.

Bodies are hulls of 6-12 points uniform in [-1,1]^n, maps are upper
triangular with diagonal in [0.5, 2] (so determinants stay positive), and
evaluation points are uniform in [-3,3]^n -- a range that keeps exponents
well conditioned.
"""
from __future__ import annotations

import numpy as np

from . import geom
from .geom import Hyperplane, LinearMap, Polytope


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def random_polytope(rng: np.random.Generator, n: int) -> Polytope:
    while True:
        npts = int(rng.integers(6, 13))
        pts = rng.uniform(-1.0, 1.0, size=(npts, n))
        P = geom.convex_hull(pts)
        if P.is_full_dim and geom.volume(P) > 1e-4:
            return P


def random_point(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-3.0, 3.0, size=n)


def random_map(rng: np.random.Generator, n: int) -> LinearMap:
    m = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), k=1)
    np.fill_diagonal(m, rng.uniform(0.5, 2.0, size=n))
    return LinearMap(m)


def random_interior_hyperplane(rng: np.random.Generator, P: Polytope) -> Hyperplane:
    """A hyperplane through a random interior point of P."""
    weights = rng.dirichlet(np.ones(P.vertices.shape[0]))
    anchor = weights @ P.vertices
    while True:
        normal = rng.normal(size=P.n)
        if np.linalg.norm(normal) > 1e-6:
            break
    return Hyperplane(normal, float(normal @ anchor))
