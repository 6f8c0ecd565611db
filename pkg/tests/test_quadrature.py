import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from cubegap import quadrature as q
from cubegap.records import (VERDICT_DIAGNOSTIC, VERDICT_FAILS,
                             VERDICT_HOLDS)

# Frozen moment values, computed from series expansions of the
# integrand before the quadrature existed.
J_THIRD_LOG1 = 1.219058
J_FOURTHIRD_LOG1 = 1.880161


class TestIntegrate:
    def test_polynomial_exact(self):
        val, est = q.integrate(lambda x: x ** 2, 0.0, 1.0)
        assert val == pytest.approx(1.0 / 3.0, abs=1e-14)
        assert abs(val - 1.0 / 3.0) <= est + 1e-14

    def test_sine_arch(self):
        val, est = q.integrate(np.sin, 0.0, math.pi)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_oscillatory(self):
        val, est = q.integrate(lambda x: np.cos(10.0 * x), 0.0, 20.0,
                               tol=1e-11)
        want = math.sin(200.0) / 10.0
        assert abs(val - want) <= est + 1e-12

    def test_empty_interval(self):
        assert q.integrate(np.sin, 1.0, 1.0) == (0.0, 0.0)

    def test_deterministic(self):
        a = q.integrate(lambda x: np.exp(-x) * np.sin(3 * x), 0.0, 15.0)
        b = q.integrate(lambda x: np.exp(-x) * np.sin(3 * x), 0.0, 15.0)
        assert a == b


class TestPrefixIntegrator:
    def test_matches_antiderivative(self):
        p = q.PrefixIntegrator(np.cos, tol_per_unit=1e-11)
        for t in (0.7, 2.0, 1.3, 5.0, 4.999, 0.7):
            val, est = p.value_at(t)
            assert abs(val - math.sin(t)) <= est + 1e-12

    def test_cache_reuse_is_consistent(self):
        p = q.PrefixIntegrator(np.cos, tol_per_unit=1e-11)
        v1, _ = p.value_at(3.0)
        v2, _ = p.value_at(3.0)
        assert v1 == v2

    def test_rejects_negative(self):
        p = q.PrefixIntegrator(np.cos)
        with pytest.raises(ValueError):
            p.value_at(-1.0)


class TestMoments:
    def test_unit_values(self):
        for a in (0.0, 1.0):
            val, est = q.j_moment(a, 0)
            assert val == pytest.approx(1.0, abs=1e-12)

    def test_gamma_identities(self):
        for rec in q.j_gamma_identity_checks():
            assert rec.verdict == VERDICT_HOLDS
        val, _ = q.j_moment(1.0 / 3.0, 0)
        assert val == pytest.approx(float(gamma_fn(4.0 / 3.0)), abs=1e-12)

    def test_log_moments_frozen(self):
        assert q.j_moment(1 / 3, 1)[0] == pytest.approx(
            J_THIRD_LOG1, abs=2e-6)
        assert q.j_moment(4 / 3, 1)[0] == pytest.approx(
            J_FOURTHIRD_LOG1, abs=2e-6)

    def test_ceiling_verdicts(self):
        recs = {(r.notes.split()[0], r.notes.split()[1]): r
                for r in q.j_ceiling_checks()}
        by_b0 = [r for r in recs.values() if "b=0" in r.notes]
        by_b2 = [r for r in recs.values() if "b=2" in r.notes]
        assert len(by_b0) == 2 and len(by_b2) == 2
        assert all(r.verdict == VERDICT_HOLDS for r in by_b0)
        # The stated b=2 ceilings belong to the b=1 column; honest
        # evaluation exceeds them.
        assert all(r.verdict == VERDICT_FAILS for r in by_b2)
        assert all("b=1 moment" in r.notes for r in by_b2)

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            q.j_moment(-0.5, 0)


class TestMollifierMeanSquare:
    def test_two_term_closed_form(self, tables):
        t = 7.3
        want = 1.5 * t - math.sqrt(2.0) * math.sin(t * math.log(2.0)) \
            / math.log(2.0)
        assert q.mollifier_mean_square(2, t, tables) == pytest.approx(
            want, rel=1e-13)

    def test_trivial_mollifier(self, tables):
        assert q.mollifier_mean_square(1, 4.0, tables) == pytest.approx(4.0)

    def test_against_quadrature(self, tables):
        closed = q.mollifier_mean_square(16, 10.0, tables)
        val, est = q.integrate(q._mollifier_sq_integrand(16, tables),
                               0.0, 10.0, tol=1e-10)
        assert abs(closed - val) <= est + 1e-9

    def test_monotone_growth(self, tables):
        # The integrand is nonnegative.
        a = q.mollifier_mean_square(64, 10.0, tables)
        b = q.mollifier_mean_square(64, 20.0, tables)
        assert b > a

    def test_random_draw_records(self, tables):
        recs = q.mollifier_mean_square_checks(tables, n_pairs=5)
        assert all(r.verdict == VERDICT_HOLDS for r in recs)

    def test_draws_deterministic(self, tables):
        a = q.mollifier_mean_square_checks(tables, n_pairs=3)
        b = q.mollifier_mean_square_checks(tables, n_pairs=3)
        assert [r.as_dict() for r in a] == [r.as_dict() for r in b]


class TestDefectMeanSquare:
    def test_d_constants(self):
        d1, d2, d3, d4 = q.d_constants_half(16)
        assert d1 == pytest.approx(36.0 * (math.log(16.0) + 1.0), rel=1e-12)
        assert d1 == pytest.approx(135.813, abs=1e-3)
        assert d3 == pytest.approx(106.533, abs=1e-3)
        assert d2 == pytest.approx(16 * 9 * 16 * (math.log(16) + 4),
                                   rel=1e-12)

    def test_half_line_ceiling(self, tables):
        rec = q.defect_half_ceiling_check(16, 12.0, tables)
        assert rec.verdict == VERDICT_HOLDS

    def test_one_plus_ceiling_diagnostic(self, tables):
        rec = q.defect_one_plus_ceiling_check(16, 0.5, 10.0, tables)
        assert rec.verdict == VERDICT_DIAGNOSTIC
        assert "would hold" in rec.notes


class TestTransfer:
    def test_cos_sandwich(self):
        assert q.cos_sandwich_check(12.0).verdict == VERDICT_HOLDS
        assert q.cos_sandwich_check(3.0).verdict == VERDICT_HOLDS

    def test_ratio_floor_tight_corner(self):
        rec = q.ratio_floor_check()
        assert rec.verdict == VERDICT_HOLDS
        # The corner at sigma=2, t=14.01 sits just above the floor.
        assert rec.rhs - rec.lhs < 1e-4

    def test_envelopes(self, tables):
        rec = q.transfer_envelope_check(16, 12.0, tables)
        assert rec.verdict == VERDICT_HOLDS
        assert rec.lhs < 1.0

    def test_envelope_domain_guard(self, tables):
        with pytest.raises(ValueError):
            q.transfer_envelope_check(16, 12.0, tables,
                                      points=[complex(1.0, 5.0)])


class TestDampedMeanSquare:
    def test_route_dominates_direct(self, tables):
        rec = q.route_check(0.75, 16, 8.0, tables)
        assert rec.verdict == VERDICT_HOLDS

    def test_convexity(self, tables):
        rec = q.convexity_check(16, 6.0, tables,
                                sigmas=(0.55, 0.75, 0.95))
        assert rec.verdict == VERDICT_HOLDS
