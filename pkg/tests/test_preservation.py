import itertools
import random
from fractions import Fraction

import pytest

from cochordal.cholesky import inverse, invert_unit_lower_substitution, ldl_decompose
from cochordal.errors import NotInPattern, NotSymmetric
from cochordal.graph import build_graph, complete_graph, maximal_cliques
from cochordal.matrix import FLOAT, Matrix
from cochordal.preservation import (
    CLIQUE_DET,
    DECOMPOSITION_VIOLATION,
    DETERMINANT_VIOLATION,
    INVERSE_VIOLATION,
    L_TO_LINV,
    L_TO_SIGMA,
    SIGMA_TO_L,
    check_factor,
    check_sigma,
    clique_determinant_check,
    construct_L_witness,
    construct_sigma_witness,
    in_L,
    in_P,
    pattern_of,
    sample_L,
    sample_sigma,
    verify_theorem1,
)
from cochordal.structure import (
    VertexOrdering,
    find_hasse_elimination_ordering,
    find_perfect_elimination_ordering,
    is_homogeneous,
    random_chordal_graph,
    random_homogeneous_graph,
)

from test_cholesky import HASSE_L, HASSE_LINV, HASSE_SIGMA, FIVES_SIGMA

PVES_L = Matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 1, 0, 0], [1, 1, 1, 1, 0], [0, 1, 1, 1, 1]])
PVES_LINV = Matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, -1, 1, 0, 0], [-1, 0, -1, 1, 0], [1, 0, 0, -1, 1]])
NON_PVES_L = Matrix([[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 1, 1, 0, 0], [1, 1, 1, 1, 0], [0, 1, 0, 0, 1]])
NON_PVES_SIGMA = Matrix([[1, 1, 1, 1, 0], [1, 2, 2, 2, 1], [1, 2, 3, 3, 1], [1, 2, 3, 4, 1], [0, 1, 1, 1, 2]])
PVES_SIGMA = Matrix([[1, 0, 0, 1, 0], [0, 1, 1, 1, 1], [0, 1, 2, 2, 2], [1, 1, 2, 4, 3], [0, 1, 2, 3, 4]])
FIXB_L = Matrix([[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
FIXB_LINV = Matrix([[1, 0, 0, 0], [-1, 1, 0, 0], [1, -1, 1, 0], [-1, 1, -1, 1]])


@pytest.fixture
def htbes_a_alt():
    return VertexOrdering.from_positions({"w": 5, "v": 4, "u'": 3, "u": 2, "v'": 1})


class TestPattern:
    def test_fix_b(self, fix_b, pves_b):
        pat = pattern_of(fix_b, pves_b)
        assert pat.allowed == {(2, 1), (3, 2), (4, 3), (1, 2), (2, 3), (3, 4)}

    def test_complete(self):
        g = complete_graph("abcd")
        pat = pattern_of(g, VertexOrdering(tuple("abcd")))
        assert pat.allowed == {(i, j) for i in range(1, 5) for j in range(1, 5) if i != j}

    def test_edgeless(self):
        g = build_graph("abc")
        pat = pattern_of(g, VertexOrdering(tuple("abc")))
        assert pat.allowed == frozenset()
        assert pat.allows(2, 2)


class TestMembership:
    def test_hasse_sigma_in_P(self, fix_a, htbes_a):
        assert in_P(HASSE_SIGMA, pattern_of(fix_a, htbes_a))

    def test_non_pves_sigma(self, fix_a, not_pves_a):
        pat = pattern_of(fix_a, not_pves_a)
        assert in_L(NON_PVES_L, pat)
        assert NON_PVES_L @ NON_PVES_L.T == NON_PVES_SIGMA
        m = in_P(NON_PVES_SIGMA, pat)
        # v (5) and v' (3) are not adjacent; (5, 2) pairs v with w, which is an edge
        assert not m and m.entry == (5, 3) and m.value == 1
        assert pat.allows(5, 2)

    def test_identity_in_every_P(self, fix_a, htbes_a, fix_b, pves_b):
        assert in_P(Matrix.identity(5), pattern_of(fix_a, htbes_a))
        assert in_P(Matrix.identity(4), pattern_of(fix_b, pves_b))

    def test_not_positive_definite(self, fix_a, htbes_a):
        m = in_P(Matrix.diagonal([1, 1, -1, 1, 1]), pattern_of(fix_a, htbes_a))
        assert not m and m.reason == "not-positive-definite"

    def test_not_symmetric(self, fix_a, htbes_a):
        with pytest.raises(NotSymmetric):
            in_P(HASSE_L, pattern_of(fix_a, htbes_a))

    def test_hasse_factor_in_L(self, fix_a, htbes_a):
        pat = pattern_of(fix_a, htbes_a)
        assert in_L(HASSE_L, pat) and in_L(HASSE_LINV, pat)

    def test_pves_inverse_not_in_L(self, fix_a, pves_not_htbes_a):
        pat = pattern_of(fix_a, pves_not_htbes_a)
        assert in_L(PVES_L, pat)
        assert invert_unit_lower_substitution(PVES_L) == PVES_LINV
        m = in_L(PVES_LINV, pat)
        assert not m and m.entry == (5, 1) and m.value == 1
        assert in_P(PVES_L @ PVES_L.T, pat)

    def test_fix_b_inverse_not_in_L(self, fix_b, pves_b):
        pat = pattern_of(fix_b, pves_b)
        assert in_L(FIXB_L, pat)
        assert invert_unit_lower_substitution(FIXB_L) == FIXB_LINV
        assert in_L(FIXB_LINV, pat).entry == (3, 1)

    def test_identity_in_every_L(self, fix_a, htbes_a):
        assert in_L(Matrix.identity(5), pattern_of(fix_a, htbes_a))

    def test_not_unit_lower(self, fix_a, htbes_a):
        assert in_L(HASSE_SIGMA, pattern_of(fix_a, htbes_a)).reason == "not-unit-lower-triangular"

    def test_float_tolerance(self, fix_b, pves_b):
        pat = pattern_of(fix_b, pves_b)
        noisy = Matrix([[1.0, 0, 0, 0], [0.5, 1.0, 0, 0], [1e-12, 0.5, 1.0, 0], [0, 0, 0.5, 1.0]])
        assert in_L(noisy, pat)
        assert not in_L(noisy, pat, tol=1e-13)


class TestSampling:
    def test_empty_pattern_gives_identity(self):
        g = build_graph("abc")
        pat = pattern_of(g, VertexOrdering(tuple("abc")))
        assert sample_L(pat, 4) == Matrix.identity(3)

    def test_full_pattern(self):
        g = complete_graph("abcde")
        pat = pattern_of(g, VertexOrdering(tuple("abcde")))
        L = sample_L(pat, 1)
        assert in_L(L, pat)
        assert all(L[i, j] != 0 for i in range(1, 6) for j in range(1, i))

    def test_fix_a_zeros_exactly_on_disallowed(self, fix_a, htbes_a):
        pat = pattern_of(fix_a, htbes_a)
        for seed in range(10):
            L = sample_L(pat, seed)
            for i in range(1, 6):
                for j in range(1, i):
                    assert (L[i, j] != 0) == pat.allows(i, j)
                    assert -2 <= L[i, j] <= 2

    def test_diagonal_pattern(self):
        g = build_graph("abcd")
        sigma = sample_sigma(pattern_of(g, VertexOrdering(tuple("abcd"))), 0)
        assert sigma == Matrix.diagonal([1, 1, 1, 1])

    @pytest.mark.parametrize("seed", range(10))
    def test_sigma_fix_b(self, fix_b, pves_b, seed):
        pat = pattern_of(fix_b, pves_b)
        s = sample_sigma(pat, seed)
        assert in_P(s, pat)
        assert all(d > 0 for d in ldl_decompose(s).D)

    def test_deterministic(self, fix_a, htbes_a):
        pat = pattern_of(fix_a, htbes_a)
        assert sample_L(pat, 3) == sample_L(pat, 3) and sample_sigma(pat, 3) == sample_sigma(pat, 3)


class TestCliqueDeterminants:
    def test_clique_dets_htbes(self, fix_a, htbes_a_alt):
        checks = clique_determinant_check(HASSE_SIGMA, fix_a, htbes_a_alt)
        assert [(c.lhs, c.rhs, c.equal) for c in checks] == [(1, 1, True), (1, 1, True)]

    def test_clique_dets_pves(self, fix_a, pves_not_htbes_a):
        c1, c2 = clique_determinant_check(PVES_SIGMA, fix_a, pves_not_htbes_a)
        assert c1.equal
        assert c2.clique == ("v", "w") and (c2.lhs, c2.rhs, c2.equal) == (2, 1, False)

    def test_clique_dets_non_pves(self, fix_a, not_pves_a):
        c1 = clique_determinant_check(FIVES_SIGMA, fix_a, not_pves_a)[0]
        assert c1.clique == ("u", "u'", "v'", "w") and not c1.equal
        assert (c1.lhs, c1.rhs) == (Fraction(5, 2448), Fraction(1, 512))
        assert abs(float(c1.lhs) - 0.002042484) <= 1e-6
        assert abs(float(c1.rhs) - 0.001953125) <= 1e-6

    def test_fix_b_tridiagonal(self, fix_b, pves_b, tridiagonal):
        checks = {c.clique: c for c in clique_determinant_check(tridiagonal, fix_b, pves_b)}
        c3 = checks[("u", "v")]
        assert (c3.lhs, c3.rhs, c3.equal) == (Fraction(3, 5), Fraction(1, 3), False)

    def test_float_mode(self, fix_a, pves_not_htbes_a):
        c1, c2 = clique_determinant_check(PVES_SIGMA.astype(FLOAT), fix_a, pves_not_htbes_a)
        assert c1.equal and not c2.equal
        assert c2.lhs == pytest.approx(2.0)

    def test_requires_pattern(self, fix_a, htbes_a):
        with pytest.raises(NotInPattern):
            clique_determinant_check(FIVES_SIGMA, fix_a, htbes_a)


class TestVerify:
    def test_fix_a_htbes(self, fix_a, htbes_a):
        report = verify_theorem1(fix_a, htbes_a, trials=100, seed=0)
        assert report.verdict == "pass" and report.failures == []

    def test_fix_a_pves_not_htbes(self, fix_a, pves_not_htbes_a):
        report = verify_theorem1(fix_a, pves_not_htbes_a, trials=20, seed=0)
        assert report.verdict == "fail"
        assert report.failed(L_TO_LINV)
        # still a perfect elimination ordering, so Sigma <-> L preservation holds
        assert not report.failed(L_TO_SIGMA) and not report.failed(SIGMA_TO_L)

    def test_fix_b_pves(self, fix_b, pves_b):
        report = verify_theorem1(fix_b, pves_b, trials=20, seed=0)
        det = report.failed(CLIQUE_DET)
        assert any(f.entry["clique"] == ["u", "v"] for f in det)

    def test_failures_carry_reproducing_seeds(self, fix_b, pves_b):
        report = verify_theorem1(fix_b, pves_b, trials=5, seed=40)
        assert {f.seed for f in report.failures} <= set(range(40, 45))
        for f in report.failures:
            replay = verify_theorem1(fix_b, pves_b, trials=1, seed=f.seed)
            assert f in replay.failures

    def test_float_mode(self, fix_a, htbes_a):
        assert verify_theorem1(fix_a, htbes_a, trials=20, seed=0, kind=FLOAT).passed

    def test_one_shot_hasse(self, fix_a, htbes_a):
        assert check_sigma(HASSE_SIGMA, fix_a, htbes_a) == []
        assert check_factor(HASSE_L, fix_a, htbes_a) == []

    def test_one_shot_tridiagonal(self, fix_b, pves_b, tridiagonal):
        failures = check_sigma(tridiagonal, fix_b, pves_b)
        det = [f for f in failures if f.statement == CLIQUE_DET]
        assert [(f.entry["lhs"], f.entry["rhs"]) for f in det if f.entry["clique"] == ["u", "v"]] == [
            (Fraction(3, 5), Fraction(1, 3))
        ]

    def test_rejects_zero_trials(self, fix_a, htbes_a):
        with pytest.raises(ValueError):
            verify_theorem1(fix_a, htbes_a, trials=0)

    def test_report_json_shape(self, fix_b, pves_b):
        d = verify_theorem1(fix_b, pves_b, trials=2, seed=1).to_dict()
        assert set(d) >= {"graph", "ordering", "trials", "failures", "verdict"}
        assert all(set(f) >= {"seed", "statement", "entry"} for f in d["failures"])
        assert d["ordering"] == {"u'": 4, "w": 3, "u": 2, "v": 1}


class TestWitnesses:
    def three_path(self, positions):
        g = build_graph("uvw", [("u", "v"), ("v", "w")])
        return g, VertexOrdering.from_positions(positions)

    def test_three_path_v_first(self):
        g, sigma = self.three_path({"v": 1, "u": 2, "w": 3})
        w = construct_L_witness(g, sigma)
        assert w.kind == DECOMPOSITION_VIOLATION
        assert w.matrix == Matrix([[1, 0, 0], [1, 1, 0], [1, 0, 1]])
        assert w.evidence == {"entry": (3, 2), "value": 1}
        for d in ([1, 1, 1], [3, 2, 7]):
            assert (w.matrix.scale_columns(d) @ w.matrix.T)[3, 2] == d[0]
        assert w.replay(g, sigma)

    def test_three_path_v_second(self):
        g, sigma = self.three_path({"u": 1, "v": 2, "w": 3})
        w = construct_L_witness(g, sigma)
        assert w.kind == INVERSE_VIOLATION
        assert w.matrix == Matrix([[1, 0, 0], [1, 1, 0], [0, 1, 1]])
        assert invert_unit_lower_substitution(w.matrix)[3, 1] == 1
        assert w.replay(g, sigma)

    def test_hypotheses_hold(self, fix_a, htbes_a):
        assert construct_L_witness(fix_a, htbes_a) is None
        assert construct_sigma_witness(fix_a, htbes_a) is None

    @pytest.mark.parametrize(
        "positions, D",
        [
            ({"v": 1, "u": 2, "w": 3}, (5, Fraction(4, 5), Fraction(3, 4))),
            ({"u": 1, "v": 2, "w": 3}, (4, 1, Fraction(3, 4))),
        ],
    )
    def test_sigma_witness_numbers(self, positions, D):
        g, sigma = self.three_path(positions)
        w = construct_sigma_witness(g, sigma)
        assert w.kind == DETERMINANT_VIOLATION
        assert (w.evidence["D"]["v"], w.evidence["D"]["u"], w.evidence["D"]["w"]) == D
        assert (w.evidence["lhs"], w.evidence["rhs"]) == (Fraction(1, 3), Fraction(1, 4))
        inv = inverse(w.matrix)
        pu, pv, pw = sigma["u"], sigma["v"], sigma["w"]
        assert inv[pv, pv] == Fraction(1, 3)
        assert inv[pu, pu] == inv[pw, pw] == Fraction(4, 3)
        assert inv[pu, pw] == Fraction(1, 3) and inv[pv, pu] == Fraction(-1, 3)
        assert w.replay(g, sigma)

    def test_fix_b_any_ordering(self, fix_b):
        for perm in itertools.permutations(fix_b.vertices):
            sigma = VertexOrdering(perm)
            w = construct_sigma_witness(fix_b, sigma)
            assert (w.evidence["lhs"], w.evidence["rhs"]) == (Fraction(1, 3), Fraction(1, 4))
            assert w.replay(fix_b, sigma)

    def test_fix_a_pves_not_htbes(self, fix_a, pves_not_htbes_a):
        w = construct_L_witness(fix_a, pves_not_htbes_a)
        assert w.kind == INVERSE_VIOLATION and w.replay(fix_a, pves_not_htbes_a)
        s = construct_sigma_witness(fix_a, pves_not_htbes_a)
        assert s.evidence["clique"] == ["v", "w"] and s.replay(fix_a, pves_not_htbes_a)

    def test_tampered_witness_does_not_replay(self, fix_b, pves_b):
        w = construct_sigma_witness(fix_b, pves_b)
        tampered = type(w)(w.kind, w.triple, Matrix.identity(4), w.evidence)
        assert not tampered.replay(fix_b, pves_b)

    def test_to_dict(self, fix_b, pves_b):
        d = construct_sigma_witness(fix_b, pves_b).to_dict()
        assert d["kind"] == DETERMINANT_VIOLATION
        assert d["evidence"]["lhs"] == "1/3" and d["evidence"]["rhs"] == "1/4"
        assert d["matrix"]["kind"] == "rational" and d["matrix"]["n"] == 4


class TestProperties:
    @pytest.mark.parametrize("seed", range(40))
    def test_forward_soundness(self, seed):
        g, _ = random_homogeneous_graph(seed, 10, max_trees=2)
        sigma = find_hasse_elimination_ordering(g)
        assert verify_theorem1(g, sigma, trials=2, seed=seed).passed

    @pytest.mark.parametrize("seed", range(30))
    def test_inverse_vanishes_off_clique(self, seed):
        g, _ = random_homogeneous_graph(seed, 10)
        sigma = find_hasse_elimination_ordering(g)
        s = sample_sigma(pattern_of(g, sigma), seed)
        linv = invert_unit_lower_substitution(ldl_decompose(s).L)
        for clique in maximal_cliques(g):
            for w in set(g.vertices) - set(clique):
                for u in clique:
                    assert linv[sigma[w], sigma[u]] == 0

    @pytest.mark.parametrize("seed", range(30))
    def test_decomposable_baseline(self, seed):
        g = random_chordal_graph(seed, 8)
        sigma = find_perfect_elimination_ordering(g)
        report = verify_theorem1(g, sigma, trials=2, seed=seed)
        assert not report.failed(L_TO_SIGMA) and not report.failed(SIGMA_TO_L)

    @pytest.mark.parametrize("seed", range(30))
    def test_converse_witnesses_replay(self, seed):
        rng = random.Random(seed)
        g, _ = random_homogeneous_graph(seed, 9)
        labels = list(g.vertices)
        rng.shuffle(labels)
        sigma = VertexOrdering(tuple(labels))
        lw, sw = construct_L_witness(g, sigma), construct_sigma_witness(g, sigma)
        assert (lw is None) == (sw is None)
        if lw is not None:
            assert lw.replay(g, sigma) and sw.replay(g, sigma)
            assert not verify_theorem1(g, sigma, trials=3, seed=seed).passed or is_homogeneous(g)[0]
