"""Convex polytope primitives: hulls, clipping, triangulation, volumes.

All bodies are stored in vertex representation.  Facet inequalities are
derived lazily from qhull and cached.  Everything here is immutable after
construction and pure, so concurrent use needs no locking.
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.spatial import ConvexHull, QhullError

# Degeneracy threshold, relative to body diameter (configurable by callers
# that construct their own predicates).
DEGENERACY_TOL = 1e-12


class GeometryError(Exception):
    """Base class for geometric failures."""


class DimensionMismatchError(GeometryError):
    pass


class DegenerateBodyError(GeometryError):
    pass


class SingularMapError(GeometryError):
    pass


def as_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1 or not np.all(np.isfinite(x)):
        raise GeometryError(f"not a finite point: {x!r}")
    return x


class LinearMap:
    """Nonsingular linear map on R^n, determinant cached."""

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise GeometryError("linear map must be a square matrix")
        self.det = float(np.linalg.det(self.matrix))
        if self.det == 0.0 or not np.isfinite(self.det):
            raise SingularMapError("map is singular")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix @ other.matrix)

    def transpose(self) -> "LinearMap":
        return LinearMap(self.matrix.T)

    def apply(self, x) -> np.ndarray:
        return self.matrix @ as_point(x)

    @staticmethod
    def identity(n: int) -> "LinearMap":
        return LinearMap(np.eye(n))

    @staticmethod
    def scaling(n: int, factors) -> "LinearMap":
        return LinearMap(np.diag(np.broadcast_to(np.asarray(factors, float), (n,))))


class Hyperplane:
    """The set {y : <normal, y> = offset}; H^- is <=, H^+ is >=."""

    def __init__(self, normal, offset: float):
        self.normal = as_point(normal)
        norm = float(np.linalg.norm(self.normal))
        if norm == 0.0:
            raise GeometryError("hyperplane normal must be nonzero")
        self.offset = float(offset)
        self._unit = self.normal / norm
        self._unit_offset = self.offset / norm

    @property
    def n(self) -> int:
        return self.normal.size

    def signed(self, points: np.ndarray) -> np.ndarray:
        """Signed distance of points (rows) to the plane, unit normalization."""
        return np.atleast_2d(points) @ self._unit - self._unit_offset


class Simplex:
    """n+1 vertices in R^n; the atomic integration domain."""

    def __init__(self, vertices, allow_degenerate: bool = False):
        self.vertices = np.asarray(vertices, dtype=float)
        m, n = self.vertices.shape
        if m != n + 1:
            raise GeometryError(f"simplex in R^{n} needs {n + 1} vertices, got {m}")
        edges = self.vertices[1:] - self.vertices[0]
        self._det = float(np.linalg.det(edges))
        scale = max(1.0, float(np.abs(self.vertices).max()))
        self.degenerate = abs(self._det) <= DEGENERACY_TOL * scale**n
        if self.degenerate and not allow_degenerate:
            raise DegenerateBodyError("degenerate simplex")

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    @property
    def volume(self) -> float:
        import math

        return abs(self._det) / math.factorial(self.n)


class Polytope:
    """Convex polytope given by its extreme points.

    ``dim`` is the affine dimension; ``box`` is an optional ``(lo, hi)`` pair
    set only by the box constructors, enabling the separable product formula
    downstream.
    """

    def __init__(self, vertices, dim: int, box=None):
        self.vertices = np.asarray(vertices, dtype=float)
        if self.vertices.ndim != 2:
            self.vertices = self.vertices.reshape(-1, 1)
        self.dim = int(dim)
        self.box = None
        if box is not None:
            lo, hi = box
            self.box = (np.asarray(lo, float), np.asarray(hi, float))
        self._volume = None
        self._facets = None
        self._triangulation = None
        self._qhull = None

    # -- basic queries ---------------------------------------------------
    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.vertices.shape[0] == 0

    @property
    def is_full_dim(self) -> bool:
        return self.dim == self.n

    @property
    def diameter(self) -> float:
        if self.is_empty:
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(span))

    def bounding_box(self):
        if self.is_empty:
            raise DegenerateBodyError("empty body has no bounding box")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    @staticmethod
    def empty(n: int) -> "Polytope":
        return Polytope(np.zeros((0, n)), dim=-1)

    def _hull(self) -> ConvexHull:
        if self._qhull is None:
            if not self.is_full_dim or self.n < 2:
                raise DegenerateBodyError("qhull facets need a full-dimensional body, n >= 2")
            self._qhull = ConvexHull(self.vertices, qhull_options="Qt")
        return self._qhull

    def facet_inequalities(self):
        """Rows (a, b) with <a, y> <= b for all y in the body, deduplicated."""
        if self._facets is None:
            n = self.n
            if self.box is not None:
                lo, hi = self.box
                rows = []
                for i in range(n):
                    e = np.zeros(n)
                    e[i] = 1.0
                    rows.append((e, hi[i]))
                    rows.append((-e, -lo[i]))
                self._facets = rows
            elif n == 1:
                lo, hi = float(self.vertices.min()), float(self.vertices.max())
                self._facets = [(np.array([1.0]), hi), (np.array([-1.0]), -lo)]
            else:
                eqs = self._hull().equations  # a.y + c <= 0
                seen = {}
                for row in eqs:
                    a, c = row[:-1], row[-1]
                    key = tuple(np.round(np.concatenate([a, [c]]), 9))
                    if key not in seen:
                        seen[key] = (a.copy(), -float(c))
                self._facets = list(seen.values())
        return self._facets

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Vectorized membership test for full-dimensional bodies."""
        pts = np.atleast_2d(np.asarray(points, float))
        scale = max(1.0, self.diameter)
        if self.box is not None:
            lo, hi = self.box
            return np.all((pts >= lo - tol * scale) & (pts <= hi + tol * scale), axis=1)
        inside = np.ones(pts.shape[0], dtype=bool)
        for a, b in self.facet_inequalities():
            inside &= pts @ a <= b + tol * scale * max(1.0, np.linalg.norm(a))
        return inside

    def __repr__(self):
        return f"Polytope(n={self.n}, dim={self.dim}, nverts={self.vertices.shape[0]})"


class PolyUnion:
    """Finite union of convex polytopes; parts may overlap."""

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            raise GeometryError("union needs at least one part")
        n = parts[0].n
        if any(p.n != n for p in parts):
            raise DimensionMismatchError("union parts live in different dimensions")
        self.parts = parts
        self._ie_terms = None

    @property
    def n(self) -> int:
        return self.parts[0].n

    def bounding_box(self):
        los, his = zip(*(p.bounding_box() for p in self.parts))
        return np.min(los, axis=0), np.max(his, axis=0)

    def inclusion_exclusion(self):
        """Cached list of (sign, polytope) terms over nonempty part subsets."""
        if self._ie_terms is None:
            terms = []
            m = len(self.parts)
            for j in range(1, m + 1):
                sign = 1.0 if j % 2 == 1 else -1.0
                for combo in itertools.combinations(range(m), j):
                    body = self.parts[combo[0]]
                    for i in combo[1:]:
                        body = intersect(body, self.parts[i])
                        if body.is_empty or not body.is_full_dim:
                            break
                    if body.is_full_dim:
                        terms.append((sign, body))
            self._ie_terms = terms
        return self._ie_terms


# -- constructors --------------------------------------------------------

def box_polytope(lo, hi) -> Polytope:
    lo = np.atleast_1d(np.asarray(lo, float))
    hi = np.atleast_1d(np.asarray(hi, float))
    if lo.shape != hi.shape or np.any(lo >= hi):
        raise GeometryError("box needs lo < hi componentwise")
    n = lo.size
    corners = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
    corners = corners[np.lexsort(corners.T[::-1])]
    return Polytope(corners, dim=n, box=(lo, hi))


def cube(n: int) -> Polytope:
    return box_polytope(np.zeros(n), np.ones(n))


def std_simplex(n: int, scale: float = 1.0) -> Polytope:
    verts = np.vstack([np.zeros(n), scale * np.eye(n)])
    verts = verts[np.lexsort(verts.T[::-1])]
    return Polytope(verts, dim=n)


# -- operations ----------------------------------------------------------

def _dedup_rows(points: np.ndarray, tol: float) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    pts = points[order]
    keep = [0]
    for i in range(1, pts.shape[0]):
        if np.linalg.norm(pts[i] - pts[keep[-1]]) > tol:
            keep.append(i)
    return pts[keep]


def convex_hull(points) -> Polytope:
    """Hull with redundant points removed, lexicographic vertex order."""
    try:
        pts = np.atleast_2d(np.asarray(points, float))
    except ValueError as exc:
        raise DimensionMismatchError("points of differing dimension") from exc
    if pts.ndim != 2:
        raise DimensionMismatchError("points of differing dimension")
    if pts.shape[0] == 0:
        raise GeometryError("hull of no points")
    n = pts.shape[1]
    scale = max(1.0, float(np.abs(pts).max()))
    pts = _dedup_rows(pts, 1e-12 * scale)
    if pts.shape[0] == 1:
        return Polytope(pts, dim=0)

    center = pts.mean(axis=0)
    _, s, vt = np.linalg.svd(pts - center, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * max(s[0], 1e-30)))
    if rank == 0:
        return Polytope(pts[:1], dim=0)

    if rank == n and n >= 2:
        hull = ConvexHull(pts, qhull_options="Qt")
        verts = pts[sorted(hull.vertices)]
        verts = verts[np.lexsort(verts.T[::-1])]
        return Polytope(verts, dim=n)

    if rank == 1:
        axis = vt[0]
        t = (pts - center) @ axis
        verts = np.vstack([center + t.min() * axis, center + t.max() * axis])
        verts = verts[np.lexsort(verts.T[::-1])]
        return Polytope(verts, dim=1)

    # lower-dimensional but rank >= 2: hull inside the affine hull
    basis = vt[:rank]
    proj = (pts - center) @ basis.T
    hull = ConvexHull(proj, qhull_options="Qt")
    verts = pts[sorted(hull.vertices)]
    verts = verts[np.lexsort(verts.T[::-1])]
    return Polytope(verts, dim=rank)


def _hull_edges(P: Polytope):
    """Vertex-index pairs covering every edge (may include facet diagonals)."""
    n = P.n
    if n == 1:
        return [(0, P.vertices.shape[0] - 1)]
    edges = set()
    for simplex in P._hull().simplices:
        for i, j in itertools.combinations(simplex, 2):
            edges.add((min(i, j), max(i, j)))
    return sorted(edges)


def clip(P: Polytope, H: Hyperplane):
    """Split P by H into (minus, plus, section).

    Empty or lower-dimensional results are legal and flagged through ``dim``.
    """
    if not P.is_full_dim:
        raise DegenerateBodyError("clip needs a full-dimensional body")
    if P.n != H.n:
        raise DimensionMismatchError("hyperplane dimension mismatch")
    vals = H.signed(P.vertices)
    tol = DEGENERACY_TOL * max(1.0, P.diameter)

    if np.all(vals <= tol):
        section = _on_plane_hull(P, vals, tol, [])
        return P, section, section
    if np.all(vals >= -tol):
        section = _on_plane_hull(P, vals, tol, [])
        return section, P, section

    crossings = []
    for i, j in _hull_edges(P):
        vi, vj = vals[i], vals[j]
        if (vi < -tol and vj > tol) or (vj < -tol and vi > tol):
            t = vi / (vi - vj)
            crossings.append(P.vertices[i] + t * (P.vertices[j] - P.vertices[i]))
    minus_pts = [P.vertices[vals <= tol]] + ([np.array(crossings)] if crossings else [])
    plus_pts = [P.vertices[vals >= -tol]] + ([np.array(crossings)] if crossings else [])
    minus = _maybe_empty(P.n, np.vstack(minus_pts))
    plus = _maybe_empty(P.n, np.vstack(plus_pts))
    section = _on_plane_hull(P, vals, tol, crossings)
    return minus, plus, section


def _maybe_empty(n: int, pts: np.ndarray) -> Polytope:
    if pts.shape[0] == 0:
        return Polytope.empty(n)
    return convex_hull(pts)


def _on_plane_hull(P, vals, tol, crossings) -> Polytope:
    on = [P.vertices[np.abs(vals) <= tol]]
    if crossings:
        on.append(np.array(crossings))
    pts = np.vstack(on)
    return _maybe_empty(P.n, pts)


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    """P cap Q by clipping P with Q's facet half-spaces."""
    if P.n != Q.n:
        raise DimensionMismatchError("intersection dimension mismatch")
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.n)
    body = P
    for a, b in Q.facet_inequalities():
        if body.is_empty or not body.is_full_dim:
            break
        body, _, _ = clip(body, Hyperplane(a, b))
    return body


def difference(P: Polytope, Q: Polytope):
    """Convex cells with disjoint interiors whose union is cl(P \\ Q)."""
    if P.is_empty or not P.is_full_dim:
        return []
    pieces = []
    body = P
    for a, b in Q.facet_inequalities():
        if body.is_empty or not body.is_full_dim:
            break
        inside, outside, _ = clip(body, Hyperplane(a, b))
        if outside.is_full_dim:
            pieces.append(outside)
        body = inside
    return pieces


def triangulate(P: Polytope, apex=None):
    """Deterministic fan triangulation from the lexicographically smallest
    vertex (or a supplied apex vertex) over qhull's triangulated facets."""
    if not P.is_full_dim:
        raise DegenerateBodyError("triangulation needs a full-dimensional body")
    n = P.n
    if apex is None and P._triangulation is not None:
        return P._triangulation
    if n == 1:
        lo, hi = float(P.vertices.min()), float(P.vertices.max())
        tris = [Simplex(np.array([[lo], [hi]]))]
        if apex is None:
            P._triangulation = tris
        return tris
    V = P.vertices
    if apex is None:
        apex_pt = V[np.lexsort(V.T[::-1])][0]
    else:
        apex_pt = as_point(apex)
    hull = P._hull()
    tol = DEGENERACY_TOL * max(1.0, P.diameter)
    tris = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        if abs(eq[:-1] @ apex_pt + eq[-1]) <= tol:
            continue  # facet visible from inside only; apex lies on it
        verts = np.vstack([apex_pt, V[sorted(simplex)]])
        s = Simplex(verts, allow_degenerate=True)
        if not s.degenerate:
            tris.append(s)
    if apex is None:
        P._triangulation = tris
    return tris


def volume(P: Polytope) -> float:
    """n-volume; 0 for empty or lower-dimensional bodies."""
    if P._volume is None:
        if P.is_empty or not P.is_full_dim:
            P._volume = 0.0
        elif P.box is not None:
            lo, hi = P.box
            P._volume = float(np.prod(hi - lo))
        else:
            P._volume = float(sum(s.volume for s in triangulate(P)))
    return P._volume


def surface_area(P: Polytope) -> float:
    """Sum of (n-1)-volumes of the facets."""
    import math

    if not P.is_full_dim:
        raise DegenerateBodyError("surface area needs a full-dimensional body")
    n = P.n
    if n == 1:
        return 2.0
    if P.box is not None:
        lo, hi = P.box
        w = hi - lo
        total = 0.0
        for i in range(n):
            total += 2.0 * np.prod(np.delete(w, i))
        return float(total)
    total = 0.0
    for simplex in P._hull().simplices:
        verts = P.vertices[simplex]
        E = verts[1:] - verts[0]
        gram = E @ E.T
        total += np.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(n - 1)
    return float(total)


def transform_body(P: Polytope, phi: LinearMap | None = None, t=None) -> Polytope:
    """phi P + t for nonsingular phi."""
    n = P.n
    if phi is None:
        phi = LinearMap.identity(n)
    if t is None:
        t = np.zeros(n)
    t = as_point(t)
    if P.is_empty:
        return Polytope.empty(n)
    verts = P.vertices @ phi.matrix.T + t
    verts = verts[np.lexsort(verts.T[::-1])]
    box = None
    diag = np.diagonal(phi.matrix)
    if (
        P.box is not None
        and np.allclose(phi.matrix, np.diag(diag))
        and np.all(diag > 0)
    ):
        lo, hi = P.box
        box = (diag * lo + t, diag * hi + t)
    return Polytope(verts, dim=P.dim, box=box)


# -- distances -----------------------------------------------------------

def _point_to_simplex(p: np.ndarray, verts: np.ndarray) -> float:
    """Exact distance via projection onto every face's affine hull."""
    best = np.inf
    m = verts.shape[0]
    for size in range(1, m + 1):
        for idx in itertools.combinations(range(m), size):
            W = verts[list(idx)]
            if size == 1:
                d = np.linalg.norm(p - W[0])
                best = min(best, d)
                continue
            E = (W[1:] - W[0]).T
            coef, *_ = np.linalg.lstsq(E, p - W[0], rcond=None)
            lam = np.concatenate([[1.0 - coef.sum()], coef])
            if np.all(lam >= -1e-12):
                proj = W[0] + E @ coef
                best = min(best, float(np.linalg.norm(p - proj)))
    return best


def _point_to_body(p: np.ndarray, Q: Polytope) -> float:
    if Q.is_empty:
        raise DegenerateBodyError("distance to empty body")
    if Q.vertices.shape[0] <= Q.n + 1:
        return _point_to_simplex(p, Q.vertices)
    if Q.is_full_dim:
        return min(_point_to_simplex(p, s.vertices) for s in triangulate(Q))
    return _point_to_simplex(p, Q.vertices)  # small lower-dim bodies


def hausdorff(P: Polytope, Q: Polytope) -> float:
    """Hausdorff distance, exact via vertex-to-body distances both ways."""
    if P.n != Q.n:
        raise DimensionMismatchError("Hausdorff dimension mismatch")
    d1 = max(_point_to_body(v, Q) for v in P.vertices)
    d2 = max(_point_to_body(v, P) for v in Q.vertices)
    return max(d1, d2)
