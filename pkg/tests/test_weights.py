import pytest

from gkzsums.lattice import (
    ExponentMatrix,
    cone_from_generators,
    cone_of_face,
    hull,
    quotient_cone,
)
from gkzsums.resonance import CharacterSpec
from gkzsums.weights import (
    E_polynomial,
    GkzInstance,
    WeightPolynomial,
    alpha,
    beta,
    e_value,
    expected_spectrum,
    t_set,
)

P = WeightPolynomial

KLOOSTERMAN = GkzInstance(ExponentMatrix(((1, -1),)))
MINIMAL = GkzInstance(ExponentMatrix(((1,),)))
QUADRATIC = GkzInstance(ExponentMatrix(((1, 2),)))
SQUARE = GkzInstance(ExponentMatrix(((1, 0, 1), (0, 1, 1))))


def trivial(inst, q=5):
    return CharacterSpec((0,) * inst.n, q)


class TestWeightPolynomial:
    def test_basic_ops(self):
        a = P((1, 0, 2))
        b = P((0, 1))
        assert (a + b).coeffs == (1, 1, 2)
        assert (a * b).coeffs == (0, 1, 0, 2)
        assert a.truncate(1).coeffs == (1,)
        assert a.shift(2).coeffs == (0, 0, 1, 0, 2)
        assert a.eval(1) == 3 and a.eval(-1) == 3
        assert P(()).degree == -1
        assert a.even_powers_only() and not b.even_powers_only()

    def test_json(self):
        assert P((0, 0, 0, 2)).to_json() == {"coeffs": {"3": 2}}


class TestAlphaBetaGoldens:
    def test_beta_point(self):
        assert beta(hull([(9,)]).lattice.poset()) == P.one()

    def test_beta_segment(self):
        assert beta(hull([(0,), (1,)]).lattice.poset()) == P((1, 0, 1))

    def test_beta_square(self):
        sq = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert beta(sq.lattice.poset()) == P((1, 0, 2, 0, 1))

    @pytest.mark.parametrize("dim", [1, 2, 3, 4])
    def test_alpha_simplicial(self, dim):
        gens = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        assert alpha(cone_from_generators(gens, dim)) == P.one()

    def test_alpha_cone_over_square(self):
        C = cone_from_generators([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)], 3)
        assert alpha(C) == P((1, 0, 1))

    def test_alpha_requires_pointed(self):
        with pytest.raises(ValueError, match="pointed"):
            alpha(cone_from_generators([(1,), (-1,)], 1))

    def test_even_powers_always(self):
        for pts in [
            [(0, 0), (1, 0), (0, 1)],
            [(0, 0), (2, 0), (0, 2), (1, 1)],
            [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
        ]:
            assert beta(hull(pts).lattice.poset()).even_powers_only()

    def test_combinatorial_invariance(self):
        # affinely inequivalent realizations of a combinatorial square
        sq1 = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        sq2 = hull([(0, 0), (3, 0), (4, 2), (0, 2)])
        assert beta(sq1.lattice.poset()) == beta(sq2.lattice.poset())
        c1 = cone_from_generators([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)], 3)
        c2 = cone_from_generators([(0, 0, 1), (3, 0, 1), (4, 2, 1), (0, 2, 1)], 3)
        assert alpha(c1) == alpha(c2)

    def test_interval_matches_geometric_quotient(self):
        # alpha of the interval poset == alpha of quotient_cone(cone_of_face)
        sq = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        poset = sq.lattice.poset()
        for i, face in enumerate(sq.lattice.faces):
            if i == sq.lattice.top:
                continue
            geometric = quotient_cone(cone_of_face(sq, face), _span_face(sq, face))
            assert alpha(geometric) == alpha(poset.interval_above(i)), face


def _span_face(sq, face):
    """The face of cone_of_face(sq, face) spanned by the face's directions."""
    C = cone_of_face(sq, face)
    fverts = sq.face_vertices(face)
    u0 = min(fverts)
    dirs = {tuple(a - b for a, b in zip(v, u0)) for v in fverts}
    dirs |= {tuple(b - a for a, b in zip(v, u0)) for v in fverts}
    dirs.discard((0,) * sq.ambient)
    members = frozenset(j for j, g in enumerate(C.generators) if g in dirs)
    got = C.lattice.face_by_members(members)
    assert got is not None
    return got


class TestTSet:
    def test_kloosterman_empty(self):
        for c in range(4):
            assert t_set(KLOOSTERMAN, CharacterSpec((c,), 5)) == []

    def test_minimal_instance(self):
        entries = t_set(MINIMAL, trivial(MINIMAL))
        assert len(entries) == 1
        (entry,) = entries
        assert entry.face.dim == 0 and entry.n_tau == 0
        assert entry.chi_tau.exponents == ()

    def test_nonresonant_empty(self):
        assert t_set(SQUARE, CharacterSpec((1, 1), 5)) == []

    def test_zero_column_membership(self):
        # a zero column lies in the {0} face and counts toward N_tau
        inst = GkzInstance(ExponentMatrix(((1, 0),)))
        entries = t_set(inst, trivial(inst))
        (entry,) = entries
        assert entry.face.dim == 0 and entry.n_tau == 1


class TestEValues:
    def test_kloosterman(self):
        assert e_value(KLOOSTERMAN, CharacterSpec((0,), 3)) == 2
        assert E_polynomial(KLOOSTERMAN, CharacterSpec((0,), 3)) == P((0, 0, 0, 2))

    def test_minimal(self):
        assert e_value(MINIMAL, trivial(MINIMAL)) == 0
        assert E_polynomial(MINIMAL, trivial(MINIMAL)) == P((0, -1))

    def test_quadratic(self):
        assert e_value(QUADRATIC, trivial(QUADRATIC)) == 1
        assert E_polynomial(QUADRATIC, trivial(QUADRATIC)) == P((0, 0, 1, 1))

    def test_nonresonant_square(self):
        chi = CharacterSpec((1, 1), 5)
        assert e_value(SQUARE, chi) == -2  # (-1)^N n! vol with N = 3
        assert E_polynomial(SQUARE, chi) == P((0, 0, 0, 0, 0, -2))

    def test_invariants_across_corpus(self):
        corpus = [
            (KLOOSTERMAN, CharacterSpec((0,), 3)),
            (KLOOSTERMAN, CharacterSpec((1,), 3)),
            (MINIMAL, trivial(MINIMAL)),
            (MINIMAL, CharacterSpec((2,), 5)),
            (QUADRATIC, trivial(QUADRATIC)),
            (QUADRATIC, CharacterSpec((1,), 5)),
            (SQUARE, CharacterSpec((0, 0), 5)),
            (SQUARE, CharacterSpec((1, 1), 5)),
            (SQUARE, CharacterSpec((2, 0), 5)),
            (GkzInstance(ExponentMatrix(((2, 1, 0), (0, 1, 2)))), CharacterSpec((0, 0), 5)),
            (GkzInstance(ExponentMatrix(((1, 0, -1), (0, 1, -1)))), CharacterSpec((0, 0), 7)),
            (GkzInstance(ExponentMatrix(((1, 0, 1), (0, 1, 0)))), CharacterSpec((1, 2), 5)),
        ]
        for inst, chi in corpus:
            E = E_polynomial(inst, chi)
            nvol = inst.rank_prediction()
            sign = -1 if inst.N % 2 else 1
            # E(1) = (-1)^N n! vol
            assert E.eval(1) == sign * nvol, (inst, chi)
            # deg E <= n + N and the top coefficient is e(Delta, chi)
            assert E.degree <= inst.n + inst.N
            assert E.coefficient(inst.n + inst.N) == e_value(inst, chi)
            spec = expected_spectrum(E, inst.n, inst.N, nvol)
            assert spec.sign_consistent
            assert sum(m for _, m in spec.weights) == nvol
            assert all(0 <= v <= inst.n for v, _ in spec.weights)

    def test_alpha_degree_bound(self):
        # deg alpha(cone_delta^o(tau)) <= n - dim tau - 1
        for inst in (MINIMAL, QUADRATIC, SQUARE):
            for face in inst.cone.proper_faces():
                a = alpha(quotient_cone(inst.cone, face))
                assert a.degree <= inst.n - face.dim - 1


class TestExpectedSpectrum:
    def test_examples(self):
        assert expected_spectrum(P((0, 0, 0, 2)), 1, 2, 2).as_dict() == {1: 2}
        sp = expected_spectrum(P((0, -1)), 1, 1, 1)
        assert sp.as_dict() == {0: 1} and sp.sign == -1
        assert expected_spectrum(P((0, 0, 1, 1)), 1, 2, 2).as_dict() == {0: 1, 1: 1}

    def test_coefficient_sum_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            expected_spectrum(P((0, 0, 1, 1)), 1, 2, 3)

    def test_json(self):
        sp = expected_spectrum(P((0, 0, 0, 2)), 1, 2, 2)
        assert sp.to_json() == {
            "degree": 2,
            "weights": {"1": 2},
            "sign": 1,
            "sign_consistent": True,
        }
