"""End-to-end checks: the combinatorial spectrum prediction must match the
spectrum actually reconstructed from power sums, across randomized instances
and base fields, whenever the point passes the nondegeneracy search."""

import random

import pytest

from gkzsums.arith import make_field
from gkzsums.frobenius import nondegenerate_check, verify_point
from gkzsums.lattice import ExponentMatrix, matrix_rank
from gkzsums.resonance import CharacterSpec
from gkzsums.weights import GkzInstance


def random_instances(seed, count):
    """Small full-rank matrices with a tractable predicted degree."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice((1, 1, 2))
        N = rng.randint(n, 3)
        rows = tuple(
            tuple(rng.randint(-2, 2) for _ in range(N)) for _ in range(n)
        )
        if matrix_rank(rows) != n:
            continue
        try:
            A = ExponentMatrix(rows)
        except ValueError:
            continue
        out.append(A)
    return out


@pytest.mark.parametrize("p", [3, 5])
def test_randomized_instances_verify(p):
    field = make_field(p, 1)
    rng = random.Random(100 + p)
    checked = 0
    for A in random_instances(p, 40):
        inst = GkzInstance(A)
        degree = inst.rank_prediction()
        # keep the tower depth tractable: D + 2 power sums over F_{p^m}
        if degree + 2 > {3: 7, 5: 5}[p]:
            continue
        chi = CharacterSpec.from_field(
            field, tuple(rng.randrange(p - 1) for _ in range(A.n))
        )
        x = tuple(field.exp_table[rng.randrange(p - 1)] for _ in range(A.N))
        ok, _ = nondegenerate_check(field, A, x)
        if not ok:
            continue
        report = verify_point(field, A, chi, x, digits=40)
        assert report.hypotheses_verified, (A.rows, chi.exponents, x, report.notes)
        assert report.all_pass(), (A.rows, chi.exponents, x, report.checks, report.notes)
        checked += 1
    assert checked >= 10  # the filters must leave real work


def test_nontrivial_character_descent():
    # chi = (c, 0) factors through the x-axis face of the quadrant with a
    # nontrivial descended character, so the weight recursion goes through a
    # genuinely twisted sub-instance; the spectrum must still match.
    field = make_field(5, 1)
    A = ExponentMatrix(((1, 0, 1), (0, 1, 0)))
    for c in (1, 2, 3):
        chi = CharacterSpec.from_field(field, (c, 0))
        report = verify_point(field, A, chi, (1, 2, 3))
        assert report.all_pass(), (c, report.checks, report.notes)
    # and the resonant-but-trivial direction for contrast
    report = verify_point(field, A, CharacterSpec.from_field(field, (0, 0)), (1, 2, 3))
    assert report.all_pass()


def test_characteristic_divides_exponent_is_caught():
    # over F_4 the monomial t^2 is the Frobenius, so every coefficient of
    # A = (1 2) is degenerate (the log-partial of x2 t^2 vanishes) and
    # psi(u^2) = psi(u) collapses the sum to rank 1; the Newton series stays
    # self-consistent at degree 2 but produces an exact zero eigenvalue,
    # which must surface as "hypotheses unverified", not as a spectrum
    field = make_field(2, 2)
    A = ExponentMatrix(((1, 2),))
    chi = CharacterSpec.from_field(field, (0,))
    x = (1, field.generator)
    ok, _ = nondegenerate_check(field, A, x)
    assert not ok
    report = verify_point(field, A, chi, x)
    assert not report.hypotheses_verified
    assert report.weights == {}
    assert any("zero root" in note for note in report.notes)


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2)])
def test_non_prime_base_field(p, e):
    # towers over F_4 and F_9: the embedding is found by root search and the
    # characters lift through norms of composite-degree extensions
    field = make_field(p, e)
    A = ExponentMatrix(((1, -1),))
    for cexp in range(field.q - 1):
        chi = CharacterSpec.from_field(field, (cexp,))
        report = verify_point(field, A, chi, (1, 1), m_max=2)
        assert report.degree == 2
        assert report.all_pass(), (p, e, cexp, report.checks, report.notes)
        # Kloosterman sums over any base are pure of weight 1
        assert report.weights == {1: 2}


def test_square_instance_trivial_character():
    # A = (e1, e2, e1+e2) with trivial chi: T contains {0} and both rays, so
    # the weight recursion mixes ranks; the closed form of the sum gives
    # eigenvalues {q * psi(-x1 x2 / x3), 1}, i.e. weights {2, 0}
    field = make_field(5, 1)
    A = ExponentMatrix(((1, 0, 1), (0, 1, 1)))
    report = verify_point(field, A, CharacterSpec.from_field(field, (0, 0)), (1, 2, 3))
    assert report.all_pass(), (report.checks, report.notes)
    assert report.weights == {0: 1, 2: 1}


def test_two_variable_kloosterman_purity():
    # Kl_3: degree 3 = 2! vol, no proper faces of delta = R^2, so every
    # character is nonresonant and the spectrum is pure of weight n = 2
    field = make_field(3, 1)
    A = ExponentMatrix(((1, 0, -1), (0, 1, -1)))
    for x in (1, 2):
        report = verify_point(field, A, CharacterSpec.from_field(field, (0, 0)), (1, 1, x))
        assert report.degree == 3
        assert report.checks["purity"] == "pass" and report.all_pass(), report.checks
        assert report.weights == {2: 3}


def test_all_characters_of_one_instance():
    # sweep the full character group of F_5 on the quadratic instance
    field = make_field(5, 1)
    A = ExponentMatrix(((1, 2),))
    expected_by_chi = {
        (0,): {0: 1, 1: 1},  # resonant: mixed weights
        (1,): {1: 2},
        (2,): {1: 2},
        (3,): {1: 2},
    }
    for exps, want in expected_by_chi.items():
        chi = CharacterSpec.from_field(field, exps)
        report = verify_point(field, A, chi, (1, 2))
        assert report.all_pass(), (exps, report.checks)
        assert report.weights == want, (exps, report.weights)


def test_full_character_sweep_two_instances():
    # every character of F_3^* x F_3^* against two structurally different
    # instances: one with a column inside a ray of the cone, and one whose
    # columns generate an index-2 sublattice (purity check not applicable)
    import itertools

    field = make_field(3, 1)
    for rows in (((1, 0, 1), (0, 1, 0)), ((2, 1), (0, 1))):
        A = ExponentMatrix(rows)
        for exps in itertools.product(range(2), repeat=2):
            chi = CharacterSpec.from_field(field, exps)
            report = verify_point(field, A, chi, tuple([1] * A.N))
            assert report.hypotheses_verified, (rows, exps, report.notes)
            assert report.all_pass(), (rows, exps, report.checks, report.notes)
    assert not ExponentMatrix(((2, 1), (0, 1))).columns_generate_lattice()


def test_three_dimensional_nested_descent():
    # n = 3 octant: chi = (2,0,0) factors through the e1-ray and through two
    # facets containing it, so the E recursion nests through sub-instances
    # that carry their own nonempty descent sets
    field = make_field(5, 1)
    A = ExponentMatrix(
        ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    )
    from gkzsums.weights import t_set

    inst = GkzInstance(A)
    assert len(t_set(inst, CharacterSpec.from_field(field, (2, 0, 0)))) == 3
    for exps in ((0, 0, 0), (1, 1, 1), (1, 1, 0), (2, 0, 0)):
        chi = CharacterSpec.from_field(field, exps)
        report = verify_point(field, A, chi, (1, 2, 3))
        assert report.all_pass(), (exps, report.checks, report.notes)
        if exps == (1, 1, 1):
            assert report.checks["purity"] == "pass"
            assert report.weights == {3: 1}
