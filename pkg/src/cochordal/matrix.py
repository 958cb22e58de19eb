"""Small dense matrices over exact rationals or binary64 floats.

All indices in the public interface are 1-based: ``m[1, 1]`` is the top-left
entry and index sets name rows/columns ``1..n``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Union

from .errors import DimensionMismatch, IndexOutOfRange, MatrixError

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"
KINDS = (RATIONAL, FLOAT)

ZERO_TOL = 1e-9
PIVOT_RTOL = 1e-12


def to_scalar(x, kind: str) -> Scalar:
    if kind == RATIONAL:
        if isinstance(x, float):
            return Fraction(x)
        return Fraction(x) if not isinstance(x, Fraction) else x
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def is_zero(x: Scalar, tol: float = ZERO_TOL) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def format_scalar(x: Scalar):
    """JSON form: ``"p/q"`` in lowest terms for rationals, a number for floats."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return float(x)


class Matrix:
    """Immutable rectangular matrix with homogeneous scalar kind."""

    __slots__ = ("_rows", "kind")

    def __init__(self, rows: Iterable[Iterable], kind: str | None = None):
        raw = [list(r) for r in rows]
        if raw and any(len(r) != len(raw[0]) for r in raw):
            raise DimensionMismatch("ragged rows")
        if kind is None:
            kind = FLOAT if any(isinstance(x, float) for r in raw for x in r) else RATIONAL
        if kind not in KINDS:
            raise MatrixError(f"unknown scalar kind {kind!r}")
        self.kind = kind
        self._rows = tuple(tuple(to_scalar(x, kind) for x in r) for r in raw)

    @classmethod
    def _wrap(cls, rows: list[list[Scalar]], kind: str) -> Matrix:
        m = cls.__new__(cls)
        m.kind = kind
        m._rows = tuple(tuple(r) for r in rows)
        return m

    @classmethod
    def identity(cls, n: int, kind: str = RATIONAL) -> Matrix:
        one, zero = to_scalar(1, kind), to_scalar(0, kind)
        return cls._wrap([[one if i == j else zero for j in range(n)] for i in range(n)], kind)

    @classmethod
    def diagonal(cls, values: Sequence, kind: str | None = None) -> Matrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], kind)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0]) if self._rows else 0

    @property
    def n(self) -> int:
        rows, cols = self.shape
        if rows != cols:
            raise DimensionMismatch(f"matrix is {rows}x{cols}, not square")
        return rows

    @property
    def is_square(self) -> bool:
        rows, cols = self.shape
        return rows == cols

    def rows(self) -> tuple[tuple[Scalar, ...], ...]:
        """0-based row tuples."""
        return self._rows

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self._rows]

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        rows, cols = self.shape
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise IndexOutOfRange(f"entry ({i}, {j}) outside {rows}x{cols}")
        return self._rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if isinstance(other, Matrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"Matrix([{body}], kind={self.kind!r})"

    @property
    def T(self) -> Matrix:
        return Matrix._wrap([list(c) for c in zip(*self._rows)], self.kind)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        kind = FLOAT if FLOAT in (self.kind, other.kind) else RATIONAL
        cols = list(zip(*other._rows))
        zero = to_scalar(0, kind)
        out = [[sum((a * b for a, b in zip(r, c) if a and b), zero) for c in cols] for r in self._rows]
        return Matrix._wrap(out, kind) if kind == self.kind == other.kind else Matrix(out, kind)

    def scale_columns(self, w: Sequence[Scalar]) -> Matrix:
        return Matrix._wrap([[x * w[j] for j, x in enumerate(r)] for r in self._rows], self.kind)

    def astype(self, kind: str) -> Matrix:
        return self if kind == self.kind else Matrix(self._rows, kind)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> Matrix:
        """Entries with row in ``rows`` and column in ``cols`` (1-based, in the given order)."""
        cols = rows if cols is None else cols
        nr, nc = self.shape
        for i in rows:
            if not 1 <= i <= nr:
                raise IndexOutOfRange(f"row index {i} outside 1..{nr}")
        for j in cols:
            if not 1 <= j <= nc:
                raise IndexOutOfRange(f"column index {j} outside 1..{nc}")
        return Matrix._wrap([[self._rows[i - 1][j - 1] for j in cols] for i in rows], self.kind)

    def is_symmetric(self, tol: float = ZERO_TOL) -> bool:
        if not self.is_square:
            return False
        r = self._rows
        return all(is_zero(r[i][j] - r[j][i], tol) for i in range(len(r)) for j in range(i))

    def is_unit_lower_triangular(self, tol: float = ZERO_TOL) -> bool:
        if not self.is_square:
            return False
        r = self._rows
        n = len(r)
        return all(is_zero(r[i][i] - 1, tol) for i in range(n)) and all(
            is_zero(r[i][j], tol) for i in range(n) for j in range(i + 1, n)
        )

    def max_abs_diff(self, other: Matrix) -> float:
        return max(
            (abs(float(a) - float(b)) for ra, rb in zip(self._rows, other._rows) for a, b in zip(ra, rb)),
            default=0.0,
        )
