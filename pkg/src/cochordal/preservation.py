"""Zero-pattern preservation under the modified Cholesky decomposition.

For a graph ``g`` and ordering ``sigma`` the pattern permits a nonzero at
``(i, j)`` exactly when the vertices at positions ``i`` and ``j`` are adjacent.
``in_P`` tests positive definite matrices against it, ``in_L`` unit lower
triangular ones. For homogeneous graphs under an ancestor-respecting ordering,
the pattern survives ``L -> L D L^T``, ``Sigma -> L`` and ``L -> L^{-1}``, and
clique minors of ``Sigma^{-1}`` factor through ``D``. When those hypotheses
fail, the witness constructors build explicit counterexamples.
"""

from __future__ import annotations

import random
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .cholesky import inverse, invert_unit_lower_substitution, ldl_decompose, submatrix_determinant
from .errors import NotInPattern, NotPositiveDefinite, NotSymmetric
from .graph import Graph, Label, maximal_cliques
from .matrix import FLOAT, RATIONAL, ZERO_TOL, Matrix, Scalar, format_scalar, is_zero
from .structure import ConflictTriple, VertexOrdering, find_conflict_triple

L_TO_SIGMA = "L->Sigma"
SIGMA_TO_L = "Sigma->L"
L_TO_LINV = "L->Linv"
CLIQUE_DET = "clique-determinant"
STATEMENTS = (L_TO_SIGMA, SIGMA_TO_L, L_TO_LINV, CLIQUE_DET)

DECOMPOSITION_VIOLATION = "decomposition-violation"
INVERSE_VIOLATION = "inverse-violation"
DETERMINANT_VIOLATION = "determinant-violation"

DET_RTOL = 1e-9


@dataclass(frozen=True)
class SparsityPattern:
    """Off-diagonal positions (1-based, both orders) where nonzeros are permitted."""

    n: int
    allowed: frozenset[tuple[int, int]]

    def allows(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.allowed


def pattern_of(g: Graph, sigma: VertexOrdering) -> SparsityPattern:
    sigma.check_domain(g)
    allowed = set()
    for a, b in g.edges():
        i, j = sigma[a], sigma[b]
        allowed.update({(i, j), (j, i)})
    return SparsityPattern(len(g), frozenset(allowed))


@dataclass(frozen=True)
class Membership:
    """Outcome of a pattern membership test; truthy iff ``ok``."""

    ok: bool
    entry: tuple[int, int] | None = None
    value: Scalar | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _first_offense(m: Matrix, pat: SparsityPattern, tol: float) -> Membership | None:
    rows = m.rows()
    for i in range(pat.n):
        for j in range(i):
            if not pat.allows(i + 1, j + 1) and not is_zero(rows[i][j], tol):
                return Membership(False, (i + 1, j + 1), rows[i][j], "pattern")
    return None


def in_P(sigma: Matrix, pat: SparsityPattern, tol: float = ZERO_TOL) -> Membership:
    """Positive definite, and zero wherever the pattern forbids a nonzero.

    The first offending entry is the first disallowed nonzero of the lower
    triangle in row-major order.
    """
    if not sigma.is_symmetric(tol):
        raise NotSymmetric("matrix is not symmetric")
    if sigma.n != pat.n:
        return Membership(False, reason="dimension")
    bad = _first_offense(sigma, pat, tol)
    if bad is not None:
        return bad
    try:
        ldl_decompose(sigma, tol)
    except NotPositiveDefinite:
        return Membership(False, reason="not-positive-definite")
    return Membership(True)


def in_L(L: Matrix, pat: SparsityPattern, tol: float = ZERO_TOL) -> Membership:
    if not L.is_square or L.n != pat.n:
        return Membership(False, reason="dimension")
    if not L.is_unit_lower_triangular(tol):
        return Membership(False, reason="not-unit-lower-triangular")
    bad = _first_offense(L, pat, tol)
    return Membership(True) if bad is None else bad


def _nonzero_rational(rng: random.Random, bound: int) -> Fraction:
    while True:
        q = rng.randint(1, 4)
        x = Fraction(rng.randint(-bound * q, bound * q), q)
        if x:
            return x


def sample_L(pat: SparsityPattern, seed: int) -> Matrix:
    """Unit lower triangular matrix with nonzero rationals in [-2, 2] on allowed slots."""
    rng = random.Random(seed)
    rows = [[Fraction(int(i == j)) for j in range(pat.n)] for i in range(pat.n)]
    for i in range(pat.n):
        for j in range(i):
            if (i + 1, j + 1) in pat.allowed:
                rows[i][j] = _nonzero_rational(rng, 2)
    return Matrix._wrap(rows, RATIONAL)


def sample_sigma(pat: SparsityPattern, seed: int) -> Matrix:
    """Strictly diagonally dominant symmetric matrix with the pattern's zeros."""
    rng = random.Random(seed)
    n = pat.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            if (i + 1, j + 1) in pat.allowed:
                rows[i][j] = rows[j][i] = _nonzero_rational(rng, 1)
    for i in range(n):
        rows[i][i] = 1 + sum(abs(x) for x in rows[i])
    return Matrix._wrap(rows, RATIONAL)


def sample_diagonal(n: int, seed: int) -> tuple[Fraction, ...]:
    rng = random.Random(f"{seed}:diagonal")
    return tuple(Fraction(rng.randint(1, 16), rng.randint(1, 4)) for _ in range(n))


# ---------------------------------------------------------------- clique determinants


@dataclass(frozen=True)
class CliqueCheck:
    clique: tuple[Label, ...]
    positions: tuple[int, ...]
    lhs: Scalar
    rhs: Scalar
    equal: bool


def _close(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= DET_RTOL * max(abs(a), abs(b))


def clique_determinant_check(
    sigma: Matrix, g: Graph, ordering: VertexOrdering, tol: float = ZERO_TOL,
    cliques: Iterable[Iterable[Label]] | None = None,
) -> list[CliqueCheck]:
    """Compare ``det((Sigma^{-1})_C)`` against ``prod(1 / D_i for i in C)`` per maximal clique."""
    pat = pattern_of(g, ordering)
    member = in_P(sigma, pat, tol)
    if not member:
        raise NotInPattern(f"matrix is not in the pattern: {member.reason} at {member.entry}")
    D = ldl_decompose(sigma, tol).D
    inv = inverse(sigma)
    out = []
    for clique in cliques if cliques is not None else maximal_cliques(g):
        clique = tuple(sorted(clique))
        pos = tuple(sorted(ordering[v] for v in clique))
        lhs = submatrix_determinant(inv, pos)
        rhs = 1 / prod(D[i - 1] for i in pos)
        out.append(CliqueCheck(clique, pos, lhs, rhs, _close(lhs, rhs)))
    return out


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class Failure:
    seed: int | None
    statement: str
    entry: object
    detail: str = ""

    def to_dict(self) -> dict:
        return {"seed": self.seed, "statement": self.statement, "entry": _jsonable(self.entry), "detail": self.detail}


@dataclass
class VerificationReport:
    graph: Graph
    ordering: VertexOrdering
    trials: int
    seed: int | None = None
    failures: list[Failure] = field(default_factory=list)
    statements: tuple[str, ...] = STATEMENTS

    @property
    def verdict(self) -> str:
        return "fail" if self.failures else "pass"

    @property
    def passed(self) -> bool:
        return not self.failures

    def failed(self, statement: str) -> list[Failure]:
        return [f for f in self.failures if f.statement == statement]

    def to_dict(self) -> dict:
        return {
            "graph": {"vertices": sorted(self.graph.vertices), "edges": [list(e) for e in self.graph.edges()]},
            "ordering": dict(self.ordering.position),
            "trials": self.trials,
            "seed": self.seed,
            "statements": list(self.statements),
            "failures": [f.to_dict() for f in self.failures],
            "verdict": self.verdict,
        }


def _jsonable(x):
    if isinstance(x, (Fraction, float)):
        return format_scalar(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _clique_failures(checks: list[CliqueCheck], seed: int | None) -> list[Failure]:
    return [
        Failure(seed, CLIQUE_DET, {"clique": list(c.clique), "lhs": c.lhs, "rhs": c.rhs},
                f"det of inverse on {list(c.clique)} is {c.lhs}, product of 1/D is {c.rhs}")
        for c in checks if not c.equal
    ]


def check_factor(L: Matrix, g: Graph, ordering: VertexOrdering, D=None, seed: int | None = None,
                 tol: float = ZERO_TOL) -> list[Failure]:
    """Statements that start from a factor ``L`` in the pattern."""
    pat = pattern_of(g, ordering)
    member = in_L(L, pat, tol)
    if not member:
        return [Failure(seed, "L-in-pattern", member.entry, f"input factor is outside the pattern ({member.reason})")]
    D = D if D is not None else (1,) * pat.n
    D = [Fraction(d) if L.kind == RATIONAL else float(d) for d in D]
    failures = []
    linv = in_L(invert_unit_lower_substitution(L, tol), pat, tol)
    if not linv:
        failures.append(Failure(seed, L_TO_LINV, linv.entry, f"L^-1 has {linv.value} at a disallowed slot"))
    sigma = L.scale_columns(D) @ L.T
    sig = in_P(sigma, pat, tol)
    if not sig:
        failures.append(Failure(seed, L_TO_SIGMA, sig.entry, f"L D L^T has {sig.value} at a disallowed slot"))
    else:
        failures.extend(_clique_failures(clique_determinant_check(sigma, g, ordering, tol), seed))
    return failures


def check_sigma(sigma: Matrix, g: Graph, ordering: VertexOrdering, seed: int | None = None,
                tol: float = ZERO_TOL) -> list[Failure]:
    """Statements that start from a positive definite ``Sigma`` in the pattern."""
    pat = pattern_of(g, ordering)
    member = in_P(sigma, pat, tol)
    if not member:
        return [Failure(seed, "Sigma-in-pattern", member.entry, f"input matrix is outside the pattern ({member.reason})")]
    failures = []
    L = ldl_decompose(sigma, tol).L
    lm = in_L(L, pat, tol)
    if not lm:
        failures.append(Failure(seed, SIGMA_TO_L, lm.entry, f"Cholesky L has {lm.value} at a disallowed slot"))
    linv = in_L(invert_unit_lower_substitution(L, tol), pat, tol)
    if not linv:
        failures.append(Failure(seed, L_TO_LINV, linv.entry, f"Cholesky L^-1 has {linv.value} at a disallowed slot"))
    failures.extend(_clique_failures(clique_determinant_check(sigma, g, ordering, tol), seed))
    return failures


def verify_theorem1(g: Graph, ordering: VertexOrdering, trials: int, seed: int = 0,
                    kind: str = RATIONAL, tol: float = ZERO_TOL) -> VerificationReport:
    """Randomized campaign over the pattern's factor and matrix spaces.

    Trial ``t`` uses seed ``seed + t`` and checks both directions: a sampled
    factor ``L`` with random positive ``D``, and a sampled ``Sigma`` with its
    own decomposition and clique determinants.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pat = pattern_of(g, ordering)
    report = VerificationReport(g, ordering, trials, seed)
    for t in range(trials):
        s = seed + t
        L = sample_L(pat, s).astype(kind)
        report.failures.extend(check_factor(L, g, ordering, sample_diagonal(pat.n, s), s, tol))
        sigma = sample_sigma(pat, s).astype(kind)
        report.failures.extend(check_sigma(sigma, g, ordering, s, tol))
    return report


# ---------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class Witness:
    """A counterexample built from a conflict triple, replayable with :meth:`replay`."""

    kind: str
    triple: ConflictTriple
    matrix: Matrix
    evidence: dict

    def replay(self, g: Graph, ordering: VertexOrdering) -> bool:
        """Recompute the claimed violation from ``matrix`` alone."""
        pat = pattern_of(g, ordering)
        if self.kind in (DECOMPOSITION_VIOLATION, INVERSE_VIOLATION):
            if not in_L(self.matrix, pat):
                return False
            if self.kind == DECOMPOSITION_VIOLATION:
                derived = self.matrix @ self.matrix.T
            else:
                derived = invert_unit_lower_substitution(self.matrix)
            i, j = self.evidence["entry"]
            return (not pat.allows(i, j)) and derived[i, j] == self.evidence["value"] != 0
        checks = clique_determinant_check(self.matrix, g, ordering, cliques=[self.evidence["clique"]])
        (c,) = checks
        return not c.equal and (c.lhs, c.rhs) == (self.evidence["lhs"], self.evidence["rhs"])

    def to_dict(self) -> dict:
        from .formats import matrix_to_dict

        return {
            "kind": self.kind,
            "triple": {"u": self.triple.u, "v": self.triple.v, "w": self.triple.w},
            "matrix": matrix_to_dict(self.matrix),
            "evidence": _jsonable(self.evidence),
        }


def construct_L_witness(g: Graph, ordering: VertexOrdering) -> Witness | None:
    """Factor in the pattern whose product or inverse leaves the pattern.

    With ``sigma(v) < sigma(u) < sigma(w)`` the factor has ones at
    ``(u, v)`` and ``(w, v)`` and ``L L^T`` gains ``(w, u)``; with
    ``sigma(u) < sigma(v) < sigma(w)`` it has ones at ``(v, u)`` and
    ``(w, v)`` and the inverse gains ``(w, u)``.
    """
    triple = find_conflict_triple(g, ordering)
    if triple is None:
        return None
    pu, pv, pw = ordering[triple.u], ordering[triple.v], ordering[triple.w]
    n = len(g)
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if triple.case(ordering) == "vuw":
        rows[pu - 1][pv - 1] = rows[pw - 1][pv - 1] = Fraction(1)
        L = Matrix._wrap(rows, RATIONAL)
        kind, value = DECOMPOSITION_VIOLATION, (L @ L.T)[pw, pu]
    else:
        rows[pv - 1][pu - 1] = rows[pw - 1][pv - 1] = Fraction(1)
        L = Matrix._wrap(rows, RATIONAL)
        kind, value = INVERSE_VIOLATION, invert_unit_lower_substitution(L)[pw, pu]
    return Witness(kind, triple, L, {"entry": (pw, pu), "value": value})


def construct_sigma_witness(g: Graph, ordering: VertexOrdering) -> Witness | None:
    """Patterned ``Sigma`` whose clique minor of the inverse misses ``prod(1/D)``.

    ``Sigma`` is the identity except for 5 at ``(v, v)`` and ones linking
    ``v`` to ``u`` and ``w``. Any maximal clique through ``u`` and ``v``
    excludes ``w`` and gives ``1/3`` against ``1/4``.
    """
    triple = find_conflict_triple(g, ordering)
    if triple is None:
        return None
    pu, pv, pw = ordering[triple.u], ordering[triple.v], ordering[triple.w]
    n = len(g)
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows[pv - 1][pv - 1] = Fraction(5)
    for p in (pu, pw):
        rows[pv - 1][p - 1] = rows[p - 1][pv - 1] = Fraction(1)
    sigma = Matrix._wrap(rows, RATIONAL)
    qualifying = [c for c in maximal_cliques(g) if triple.u in c and triple.v in c]
    clique = qualifying[0]
    (check,) = clique_determinant_check(sigma, g, ordering, cliques=[clique])
    D = ldl_decompose(sigma).D
    evidence = {
        "clique": list(clique),
        "cliques": [list(c) for c in qualifying],
        "positions": list(check.positions),
        "lhs": check.lhs,
        "rhs": check.rhs,
        "D": {"u": D[pu - 1], "v": D[pv - 1], "w": D[pw - 1]},
    }
    return Witness(DETERMINANT_VIOLATION, triple, sigma, evidence)
