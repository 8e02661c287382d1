import pytest

from gkzsums.arith import CycloNumber, make_field
from gkzsums.frobenius import (
    InconsistentPowerSumsError,
    PowerSumSeries,
    charpoly_from_power_sums,
    estimate_degree_hankel,
    nondegenerate_check,
    power_sums,
    verify_point,
    weight_spectrum,
)
from gkzsums.lattice import ExponentMatrix
from gkzsums.resonance import CharacterSpec
from gkzsums.sums import gauss_sum, get_tower

F3 = make_field(3, 1)
F5 = make_field(5, 1)
KLOOSTERMAN = ExponentMatrix(((1, -1),))


def one():
    return CycloNumber.one()


def rat(x):
    return CycloNumber.rational(x)


class TestPowerSums:
    def test_minimal_instance_constant(self):
        A = ExponentMatrix(((1,),))
        for F in (F3, F5):
            series = power_sums(F, A, CharacterSpec.from_field(F, (0,)), (2 % F.q,), 4)
            assert all(s == rat(-1) for s in series.s_values)

    def test_kloosterman_f3(self):
        series = power_sums(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1), 2)
        assert series.s_values[0] == rat(-1)
        assert series.s_values[1] == rat(5)  # direct F_9 enumeration
        # sign adjustment: P_m = (-1)^n S_m
        assert series.p_values[0] == rat(1) and series.p_values[1] == rat(-5)

    def test_nontrivial_chi_at_zero(self):
        series = power_sums(F5, KLOOSTERMAN, CharacterSpec.from_field(F5, (1,)), (0, 0), 3)
        assert all(s == CycloNumber.zero() for s in series.s_values)


class TestCharpoly:
    def test_all_ones(self):
        series = PowerSumSeries((one(), one(), one()), 0)
        assert charpoly_from_power_sums(series, 1) == (rat(-1), one())

    def test_kloosterman_newton_by_hand(self):
        # P_1 = 1, P_2 = -5  =>  T^2 - T + 3
        series = power_sums(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1), 2)
        cp = charpoly_from_power_sums(series, 2)
        assert cp == (rat(3), rat(-1), one())

    def test_zero_degree(self):
        series = PowerSumSeries((CycloNumber.zero(),) * 3, 0)
        assert charpoly_from_power_sums(series, 0) == (one(),)

    def test_overdetermined_consistency_accepts(self):
        # depth D + 2 must reproduce the extra sums exactly on good points
        series = power_sums(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1), 4)
        cp = charpoly_from_power_sums(series, 2)
        assert cp == (rat(3), rat(-1), one())

    def test_inconsistent_rejected(self):
        series = PowerSumSeries((one(), one(), rat(7)), 0)
        with pytest.raises(InconsistentPowerSumsError):
            charpoly_from_power_sums(series, 1)

    def test_needs_enough_sums(self):
        with pytest.raises(ValueError, match="at least"):
            charpoly_from_power_sums(PowerSumSeries((one(),), 0), 2)


class TestNondegenerate:
    def test_kloosterman_always_fine(self):
        for x in (1, 2):
            ok, verdicts = nondegenerate_check(F3, KLOOSTERMAN, (1, x))
            assert ok
            assert all(v.status == "nondegenerate" for v in verdicts)

    def test_spec_degenerate_example(self):
        A = ExponentMatrix(((2, 1, 0), (0, 1, 2)))
        ok, verdicts = nondegenerate_check(F5, A, (1, 2, 1))
        assert not ok
        bad = [v for v in verdicts if v.status == "degenerate"]
        # the edge conv{(2,0),(0,2)} carries the witness, found over F_5 itself
        edge = [v for v in bad if set(v.face_points) == {(2, 0), (1, 1), (0, 2)}]
        assert edge and edge[0].witness[0] == 1
        m, t = edge[0].witness
        # the witness kills both logarithmic partials of (t1 + t2)^2
        t1, t2 = t
        assert F5.add(t1, t2) == 0

    def test_vacuous_face(self):
        # zero coefficient wipes out a face polynomial: vacuously fine
        A = ExponentMatrix(((1, 2),))
        ok, verdicts = nondegenerate_check(F5, A, (1, 0))
        statuses = {tuple(v.face_points): v.status for v in verdicts}
        assert statuses[((2,),)] == "vacuous"
        assert ok

    def test_degenerate_everywhere_family(self):
        # column divisible by p: the log-partial vanishes identically
        A = ExponentMatrix(((3,),))
        ok, verdicts = nondegenerate_check(F3, A, (1,))
        assert not ok


class TestWeightSpectrum:
    def test_kloosterman(self):
        w, roots, res = weight_spectrum((rat(3), rat(-1), one()), 3, 2)
        assert w == {1: 2}
        assert res < 1e-30
        for (re, im, mag) in roots:
            assert abs(mag**2 - 3) < 1e-9

    def test_unit_root(self):
        w, _, _ = weight_spectrum((rat(-1), one()), 3, 1)
        assert w == {0: 1}

    def test_quadratic_instance(self):
        # charpoly (T - 1)(T + g(eta, psi)) for A = (1 2) at x = (0, 1)
        series = power_sums(F5, ExponentMatrix(((1, 2),)), CharacterSpec.from_field(F5, (0,)), (0, 1), 4)
        cp = charpoly_from_power_sums(series, 2)
        g = gauss_sum(get_tower(F5, 1), 2)
        assert cp[0] == -g and cp[1] == g - one() and cp[2] == one()
        w, _, _ = weight_spectrum(cp, 5, 2)
        assert w == {0: 1, 1: 1}

    def test_zero_root_rejected(self):
        # T^2 - T has the eigenvalue 0, which has no weight
        from gkzsums.frobenius import PrecisionError

        with pytest.raises(PrecisionError, match="zero root"):
            weight_spectrum((CycloNumber.zero(), rat(-1), one()), 3, 2)

    def test_degree_zero(self):
        assert weight_spectrum((one(),), 3, 0) == ({}, [], 0.0)

    def test_precision_doubling_stable(self):
        series = power_sums(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1), 2)
        cp = charpoly_from_power_sums(series, 2)
        w1, _, _ = weight_spectrum(cp, 3, 2, digits=30)
        w2, _, _ = weight_spectrum(cp, 3, 2, digits=60)
        assert w1 == w2


class TestHankelHeuristic:
    def test_kloosterman_degree(self):
        series = power_sums(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1), 4)
        assert estimate_degree_hankel(series) == 2

    def test_rank_one(self):
        series = PowerSumSeries((one(), one(), one(), one()), 0)
        assert estimate_degree_hankel(series) == 1


class TestVerifyPoint:
    def test_kloosterman(self):
        rep = verify_point(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1))
        assert rep.degree == 2
        assert rep.weights == {1: 2} == rep.expected
        assert rep.all_pass()
        assert rep.checks == {
            "rank": "pass",
            "spectrum": "pass",
            "purity": "pass",
            "top_count": "pass",
        }

    def test_minimal_instance(self):
        rep = verify_point(F5, ExponentMatrix(((1,),)), CharacterSpec.from_field(F5, (0,)), (3,))
        assert rep.degree == 1 and rep.weights == {0: 1} and rep.all_pass()
        # chi trivial is resonant for the ray, so purity is not applicable
        assert rep.checks["purity"] == "n/a"

    def test_purity_square_instance(self):
        A = ExponentMatrix(((1, 0, 1), (0, 1, 1)))
        rep = verify_point(F5, A, CharacterSpec.from_field(F5, (1, 1)), (1, 2, 3))
        assert rep.degree == 2 and rep.checks["purity"] == "pass" and rep.all_pass()
        assert rep.weights == {2: 2}

    def test_degenerate_point_reports_unverified(self):
        # one extra power sum already exposes the inconsistency; the
        # acceptance suite runs the full D + 2 overdetermination
        A = ExponentMatrix(((2, 1, 0), (0, 1, 2)))
        rep = verify_point(
            F5, A, CharacterSpec.from_field(F5, (0, 0)), (1, 2, 1), extra_depth=1
        )
        assert not rep.hypotheses_verified
        assert rep.nondegenerate is False
        assert rep.charpoly is None and rep.weights == {}
        assert all(v == "unverified" for v in rep.checks.values())

    def test_weight_bounds(self):
        # 0 <= v <= n across a small corpus
        cases = [
            (F3, KLOOSTERMAN, (0,), (1, 1)),
            (F5, ExponentMatrix(((1, 2),)), (0,), (0, 1)),
            (F5, ExponentMatrix(((1, 2),)), (1,), (2, 1)),
            (F5, ExponentMatrix(((1, 0, 1), (0, 1, 1))), (1, 1), (1, 2, 3)),
        ]
        for field, A, exps, x in cases:
            rep = verify_point(field, A, CharacterSpec.from_field(field, exps), x)
            assert rep.hypotheses_verified
            assert all(0 <= v <= A.n for v in rep.weights)

    def test_spectrum_invariant_on_sampled_points(self):
        # two distinct nondegenerate points give the same weight multiset
        A = ExponentMatrix(((1, 2),))
        chi = CharacterSpec.from_field(F5, (0,))
        reports = []
        for x in ((1, 1), (2, 3)):
            ok, _ = nondegenerate_check(F5, A, x)
            assert ok
            reports.append(verify_point(F5, A, chi, x))
        assert reports[0].weights == reports[1].weights

    def test_homogeneity_consistency(self):
        # x and t.x give identical weight multisets
        A = ExponentMatrix(((1, 0, 1), (0, 1, 1)))
        chi = CharacterSpec.from_field(F5, (1, 1))
        x = (1, 2, 3)
        t = (2, 3)
        tx = []
        for j, col in enumerate(A.columns):
            scale = 1
            for ti, wij in zip(t, col):
                scale = F5.mul(scale, F5.pow(ti, wij))
            tx.append(F5.mul(scale, x[j]))
        r1 = verify_point(F5, A, chi, x)
        r2 = verify_point(F5, A, chi, tuple(tx))
        assert r1.weights == r2.weights

    def test_report_serializes(self):
        import json

        rep = verify_point(F3, KLOOSTERMAN, CharacterSpec.from_field(F3, (0,)), (1, 1))
        blob = json.dumps(rep.to_json(), sort_keys=True)
        assert '"degree": 2' in blob
        assert rep.generator == "F3:g=2"
