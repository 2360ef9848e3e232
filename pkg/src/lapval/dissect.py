"""Explicit dissections and coefficient machinery.

Covers the cube-into-order-simplices decomposition, the simplex split by
the hyperplane with normal (1-lambda) e_1 - lambda e_2, the interpolating
bodies k T^n cap C^n, the lattice decomposition of m T^n into translated
such bodies, and the binomial/geometric coefficient sums that tie the
decomposition to a one-parameter functional equation.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import geom, laplace
from .geom import LinearMap, Polytope, Simplex

MAX_ORDER_DIM = 8
MAX_LATTICE_PIECES = 100_000


class DissectError(Exception):
    pass


@dataclass(frozen=True)
class SplitResult:
    lam: float
    phi1: LinearMap
    phi2: LinearMap
    piece_minus: Polytope
    piece_plus: Polytope


@dataclass(frozen=True)
class LatticePiece:
    body: Polytope
    shift: np.ndarray
    j: int


def _perm_parity(perm) -> int:
    perm = list(perm)
    parity = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def cube_order_simplices(n: int):
    """The n! order simplices {0 <= x_{i_1} <= ... <= x_{i_n} <= 1}.

    Vertex orderings are canonicalized so the affine map sending the
    standard simplex to each piece has positive determinant (odd
    permutations get two equal-role vertices transposed).
    """
    if not 1 <= n <= MAX_ORDER_DIM:
        raise DissectError(f"order-simplex dissection limited to n <= {MAX_ORDER_DIM}")
    pieces = []
    # building vertices along the reversed permutation contributes the parity
    # of the full reversal to the edge determinant
    reversal_sign = (-1) ** (n * (n - 1) // 2)
    for perm in itertools.permutations(range(n)):
        verts = [np.zeros(n)]
        acc = np.zeros(n)
        for axis in reversed(perm):
            acc = acc.copy()
            acc[axis] = 1.0
            verts.append(acc)
        if n >= 2 and _perm_parity(perm) * reversal_sign < 0:
            verts[-1], verts[-2] = verts[-2], verts[-1]
        pieces.append(Simplex(np.array(verts)))
    return pieces


def split_maps(n: int, lam: float):
    """phi_1, phi_2 realizing the two halves of the standard simplex cut by
    the hyperplane through the origin with normal (1-lam) e_1 - lam e_2."""
    if not 0.0 < lam < 1.0:
        raise DissectError("lambda must lie in (0, 1)")
    if n < 2:
        raise DissectError("split needs n >= 2")
    m1 = np.eye(n)
    m1[:, 0] = 0.0
    m1[0, 0] = lam
    m1[1, 0] = 1.0 - lam
    m2 = np.eye(n)
    m2[:, 1] = 0.0
    m2[0, 1] = lam
    m2[1, 1] = 1.0 - lam
    return LinearMap(m1), LinearMap(m2)


def split_simplex(n: int, lam: float) -> SplitResult:
    phi1, phi2 = split_maps(n, lam)
    T = geom.std_simplex(n)
    piece_minus = geom.transform_body(T, phi1)
    piece_plus = geom.transform_body(T, phi2)
    return SplitResult(lam, phi1, phi2, piece_minus, piece_plus)


def m_piece(k: int, n: int) -> Polytope:
    """k T^n cap C^n; equals C^n once k >= n."""
    if k < 1:
        raise DissectError("k must be >= 1")
    if k >= n:
        return geom.cube(n)
    return geom.intersect(geom.std_simplex(n, scale=float(k)), geom.cube(n))


def lattice_decomposition(m: int, n: int):
    """m T^n as interior-disjoint translates of the bodies M_j^n, one per
    integer shift k with |k|_1 <= m-1."""
    if m < 1 or n < 1:
        raise DissectError("m and n must be >= 1")
    if math.comb(m - 1 + n, n) > MAX_LATTICE_PIECES:
        raise DissectError("lattice decomposition too large")
    cache = {}
    pieces = []
    for k in range(m):
        j = m - k
        if j not in cache:
            cache[j] = m_piece(j, n)
        for combo in itertools.combinations_with_replacement(range(n), k):
            shift = np.zeros(n)
            for axis in combo:
                shift[axis] += 1.0
            body = geom.transform_body(cache[j], None, shift)
            pieces.append(LatticePiece(body, shift, j))
    return pieces


def a_coeff(i: int, n: int, s: float) -> float:
    """a_0 = 1; a_i = C(n-1, i-1) e^{-s} + C(n-1, i) for 1 <= i <= n-1."""
    if not 0 <= i <= n - 1:
        raise DissectError(f"a_coeff index {i} outside [0, {n - 1}]")
    if i == 0:
        return 1.0
    return math.comb(n - 1, i - 1) * math.exp(-s) + math.comb(n - 1, i)


def shift_weight(k: int, n: int, s: float) -> float:
    """sum_{k_1=0}^{k} e^{-k_1 s} C(k-k_1+n-2, n-2); geometric closed form
    for n = 2, combinatorial count at s = 0."""
    if s == 0.0:
        return float(math.comb(k + n - 1, n - 1))
    if n == 2:
        return -math.expm1(-(k + 1) * s) / -math.expm1(-s)
    return float(sum(math.exp(-k1 * s) * math.comb(k - k1 + n - 2, n - 2) for k1 in range(k + 1)))


def b_coeff(j: int, m: int, n: int, s: float) -> float:
    """The double sum tying g(m, s) to the values g(j, s), 1 <= j <= n-1."""
    if not 1 <= j <= n - 1:
        raise DissectError(f"b_coeff index {j} outside [1, {n - 1}]")
    if m < n:
        raise DissectError("b_coeff needs m >= n")
    total = 0.0
    for k in range(m - n + 1, m - j + 1):
        total += (-1) ** (m - k - j) * a_coeff(m - k - j, n, s) * shift_weight(k, n, s)
    return total


def scaling_check(m: int, n: int, s: float):
    """Returns (L(m T^n)(s e_1), m^n L(T^n)(m s e_1)); the two agree."""
    if m < 1:
        raise DissectError("m must be >= 1")
    e1 = np.zeros(n)
    e1[0] = 1.0
    lhs = laplace.laplace_polytope(geom.std_simplex(n, scale=float(m)), s * e1)
    rhs = m**n * laplace.laplace_polytope(geom.std_simplex(n), m * s * e1)
    return lhs, rhs
