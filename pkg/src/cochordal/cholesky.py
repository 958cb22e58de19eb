"""Modified Cholesky factorization and the exact linear algebra around it.

``ldl_decompose`` factors a symmetric positive definite matrix as
``L diag(D) L^T`` with ``L`` unit lower triangular, without pivoting so that
positions keep their meaning. Two independent inverses of a unit lower
triangular matrix are provided: forward substitution, and the signed sum over
strictly decreasing index paths.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np

from .errors import (
    DimensionCap,
    EmptyIndexSet,
    IndexOutOfRange,
    MatrixError,
    NotPositiveDefinite,
    NotSymmetric,
    NotUnitLowerTriangular,
)
from .matrix import FLOAT, PIVOT_RTOL, RATIONAL, ZERO_TOL, Matrix, Scalar, to_scalar

PATHSUM_CAP = 12
CAUCHY_BINET_CAP = 12


@dataclass(frozen=True)
class LdlFactors:
    L: Matrix
    D: tuple[Scalar, ...]

    def reconstruct(self) -> Matrix:
        return self.L.scale_columns(self.D) @ self.L.T


def ldl_decompose(sigma: Matrix, tol: float = ZERO_TOL, pivot_rtol: float = PIVOT_RTOL) -> LdlFactors:
    """Unpivoted ``L D L^T`` factorization of a symmetric positive definite matrix.

    Raises
    ------
    NotSymmetric
        If ``sigma`` is not symmetric (exactly, or within ``tol`` for floats).
    NotPositiveDefinite
        If a pivot is ``<= 0`` (rational) or ``<= pivot_rtol * max|diag|`` (float).
    """
    if not sigma.is_symmetric(tol):
        raise NotSymmetric("matrix is not symmetric")
    a = sigma.rows()
    n = len(a)
    exact = sigma.kind == RATIONAL
    floor = 0 if exact else pivot_rtol * max((abs(a[i][i]) for i in range(n)), default=0.0)
    zero, one = to_scalar(0, sigma.kind), to_scalar(1, sigma.kind)
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    D: list[Scalar] = []
    for j in range(n):
        Lj = L[j]
        d = a[j][j] - sum((Lj[k] * Lj[k] * D[k] for k in range(j) if Lj[k]), zero)
        if d <= floor:
            raise NotPositiveDefinite(f"pivot {j + 1} is {d}")
        D.append(d)
        for i in range(j + 1, n):
            Li = L[i]
            s = a[i][j] - sum((Li[k] * Lj[k] * D[k] for k in range(j) if Li[k] and Lj[k]), zero)
            Li[j] = s / d
    return LdlFactors(Matrix._wrap(L, sigma.kind), tuple(D))


def _require_unit_lower(L: Matrix, tol: float) -> int:
    if not L.is_unit_lower_triangular(tol):
        raise NotUnitLowerTriangular("expected a unit lower triangular matrix")
    return L.n


def invert_unit_lower_substitution(L: Matrix, tol: float = ZERO_TOL) -> Matrix:
    """Inverse of a unit lower triangular matrix by forward substitution."""
    n = _require_unit_lower(L, tol)
    a = L.rows()
    zero, one = to_scalar(0, L.kind), to_scalar(1, L.kind)
    N = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j + 1, n):
            # row i of L times column j of N is zero below the diagonal
            N[i][j] = -sum((a[i][k] * N[k][j] for k in range(j, i) if a[i][k] and N[k][j]), zero)
    return Matrix._wrap(N, L.kind)


def invert_unit_lower_pathsum(L: Matrix, cap: int = PATHSUM_CAP, tol: float = ZERO_TOL) -> Matrix:
    """Inverse as a signed sum over strictly decreasing index tuples.

    ``N[i, j]`` for ``i > j`` sums ``(-1)**(len(t) - 1) * prod(L[t[k-1], t[k]])``
    over every tuple ``t`` running from ``i`` down to ``j``. The number of
    tuples grows as ``2**(i - j - 1)``, hence the cap.
    """
    n = _require_unit_lower(L, tol)
    if n > cap:
        raise DimensionCap(f"path-sum inverse capped at {cap}, got {n}")
    a = L.rows()
    zero, one = to_scalar(0, L.kind), to_scalar(1, L.kind)
    N = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            total = zero
            between = range(i - 1, j, -1)
            for r in range(len(between) + 1):
                for inner in itertools.combinations(between, r):
                    tau = (i, *inner, j)
                    term = prod((a[tau[k - 1]][tau[k]] for k in range(1, len(tau))), start=one)
                    total += term if (len(tau) - 1) % 2 == 0 else -term
            N[i][j] = total
    return Matrix._wrap(N, L.kind)


def _bareiss(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / prev
        prev = pivot
    return sign * m[n - 1][n - 1] if n else Fraction(1)


def determinant(a: Matrix) -> Scalar:
    """Fraction-free elimination for rationals, LU with partial pivoting for floats."""
    n = a.n
    if a.kind == RATIONAL:
        return _bareiss(a.rows())
    return float(np.linalg.det(np.array(a.rows(), dtype=float))) if n else 1.0


def submatrix_determinant(a: Matrix, index_set: Iterable[int]) -> Scalar:
    """Determinant of the principal submatrix on the 1-based ``index_set``."""
    idx = list(dict.fromkeys(index_set))
    if not idx:
        raise EmptyIndexSet("index set is empty")
    n = a.n
    bad = [i for i in idx if not 1 <= i <= n]
    if bad:
        raise IndexOutOfRange(f"indices {bad} outside 1..{n}")
    return determinant(a.submatrix(idx))


def inverse(a: Matrix) -> Matrix:
    """General inverse (Gauss-Jordan for rationals)."""
    n = a.n
    if a.kind == FLOAT:
        try:
            return Matrix(np.linalg.inv(np.array(a.rows(), dtype=float)).tolist(), FLOAT)
        except np.linalg.LinAlgError as exc:
            raise MatrixError("matrix is singular") from exc
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows())]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise MatrixError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            f = m[i][k]
            if i != k and f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return Matrix._wrap([r[n:] for r in m], RATIONAL)


def cauchy_binet_expand(b: Matrix, weights: Sequence, cap: int = CAUCHY_BINET_CAP) -> Scalar:
    """``det(B^T diag(W) B)`` as a sum over r-row minors of the n x r matrix ``B``.

    Each r-subset ``A`` of rows contributes ``det(B_A)**2 * prod(W[A])``.
    """
    n, r = b.shape
    if len(weights) != n:
        raise MatrixError(f"expected {n} weights, got {len(weights)}")
    if n > cap:
        raise DimensionCap(f"Cauchy-Binet expansion capped at {cap}, got {n}")
    if r > n:
        return to_scalar(0, b.kind)
    w = [to_scalar(x, b.kind) for x in weights]
    cols = list(range(1, r + 1))
    total = to_scalar(0, b.kind)
    for rows in itertools.combinations(range(1, n + 1), r):
        minor = determinant(b.submatrix(rows, cols))
        if minor:
            total += minor * minor * prod((w[i - 1] for i in rows), start=to_scalar(1, b.kind))
    return total
