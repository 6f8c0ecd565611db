import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubegap import divisors as dv
from cubegap.records import VERDICT_DIAGNOSTIC, VERDICT_HOLDS

# Frozen oracle values for the tail helper, computed from the upper
# incomplete gamma function at 30 digits before the helper existed.
LTAIL_ORACLE = {
    (100, 0.5, 2): 9.5256546371731915,
    (50, 0.1, 3): 59957.092401323235,
    (1000, 1.3, 0): 9.6840416291858983e-5,
    (21, 2.0, 1): 0.004018732922588915,
    (300, 0.25, 1): 9.3265437161538847,
}


class TestExactSums:
    def test_tiny_values(self, tables):
        assert dv.sum_d(4, tables) == 8
        assert dv.sum_d_squared(4, tables) == 18
        assert dv.sum_d_over_sqrt(1, tables) == 1.0

    @given(st.integers(min_value=1, max_value=12000))
    @settings(max_examples=50, deadline=None)
    def test_hyperbola_oracle(self, tables, x):
        assert dv.sum_d(x, tables) == dv.sum_d_hyperbola(x)

    def test_sqrt_sum_against_direct(self, tables):
        x = 200
        want = math.fsum(
            sum(1 for k in range(1, n + 1) if n % k == 0) / math.sqrt(n)
            for n in range(1, x + 1))
        assert dv.sum_d_over_sqrt(x, tables) == pytest.approx(want, rel=1e-13)


class TestLtail:
    def test_frozen_oracle_values(self):
        for (M, c, j), want in LTAIL_ORACLE.items():
            assert dv.ltail(M, c, j) == pytest.approx(want, rel=1e-13)

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            dv.ltail(100, 0.0, 1)
        with pytest.raises(ValueError):
            dv.ltail(0.5, 1.0, 1)

    @given(st.floats(min_value=0.05, max_value=3.0),
           st.integers(min_value=0, max_value=4),
           st.integers(min_value=30, max_value=5000))
    @settings(max_examples=60, deadline=None)
    def test_dominates_directly_summed_tail(self, c, j, M):
        # Terms decrease once log t > j/(1+c); M >= 30 covers j <= 4.
        direct = sum(math.log(n) ** j / n ** (1 + c)
                     for n in range(M + 1, M + 4000))
        assert dv.ltail(M, c, j) >= direct

    def test_monotone_in_M_and_c(self):
        assert dv.ltail(100, 0.5, 2) > dv.ltail(200, 0.5, 2)
        assert dv.ltail(100, 0.5, 2) > dv.ltail(100, 0.8, 2)


class TestCountingTail:
    @pytest.mark.parametrize("family,power", [
        (dv.D_COUNT, 0), (dv.D2_COUNT, 2), (dv.D_SQRT_COUNT, 1)])
    def test_majorizes_true_tail(self, tables, family, power, ):
        y, c = 150, 0.6
        hi = tables.limit
        n = np.arange(y + 1, hi + 1, dtype=float)
        d = tables.divisor_count[y + 1:hi + 1].astype(float)
        if power == 0:
            a = d
        elif power == 1:
            a = d / np.sqrt(n)
        else:
            a = d * d
        direct = float(np.sum(a * n ** (-1.0 - c)))
        assert dv.counting_tail(y, c, family) >= direct

    def test_log_weighted_family(self, tables):
        y, c = 150, 0.6
        hi = tables.limit
        n = np.arange(y + 1, hi + 1, dtype=float)
        d = tables.divisor_count[y + 1:hi + 1].astype(float)
        direct = float(np.sum(d * np.log(n) * n ** (-1.0 - c)))
        assert dv.counting_tail(y, c, dv.D_LOG_COUNT) >= direct


class TestCountingBounds:
    def test_sampled_records_hold(self, tables):
        for rec in dv.count_bound_checks(tables):
            assert rec.verdict == VERDICT_HOLDS

    def test_crossover_thresholds(self):
        rec = dv.crossover_report()
        assert rec.verdict == VERDICT_DIAGNOSTIC
        assert "would hold" in rec.notes
        # The one-term d form needs log x near 155, the d^2 form near
        # 1681, the d/sqrt form only a small threshold.
        t_d = dv.one_term_crossover(dv.D_COUNT_FULL, dv.D_ONE_TERM, 1)
        assert 150 < t_d < 160
        t_d2 = dv.one_term_crossover(dv.D2_COUNT_FULL, dv.D2_ONE_TERM, 3)
        assert 1600 < t_d2 < 1800
        t_r = dv.one_term_crossover(dv.D_SQRT_COUNT_FULL,
                                    dv.D_SQRT_ONE_TERM, 1, alpha_lead=0.5)
        assert t_r < 10


class TestKernels:
    def test_log_ratio_smallest_case(self, tables):
        want = math.sqrt(2.0) / math.log(2.0)
        assert dv.log_ratio_double_sum(2, tables) == pytest.approx(
            want, rel=1e-14)

    def test_log_ratio_three_terms(self, tables):
        # Pairs (2,1), (3,1), (3,2) by hand.
        w = {1: 1.0, 2: 2 / math.sqrt(2), 3: 2 / math.sqrt(3)}
        want = (w[2] * w[1] / math.log(2)
                + w[3] * (w[1] / math.log(3)
                          + w[2] / math.log(1.5)))
        assert dv.log_ratio_double_sum(3, tables) == pytest.approx(
            want, rel=1e-14)

    def test_difference_smallest_case(self, tables):
        # x=3: d(2)d(1)/1 + d(3)d(1)/2 + d(3)d(2)/1 = 2 + 1 + 4.
        assert dv.difference_double_sum(3, tables) == pytest.approx(7.0)

    def test_kernel_cap(self, tables):
        with pytest.raises(ValueError):
            dv.log_ratio_double_sum(dv.KERNEL_CAP + 1, tables)

    def test_pointwise_inequality_record(self):
        rec = dv.log_ratio_pointwise_check(400)
        assert rec.verdict == VERDICT_HOLDS
        assert rec.lhs < 1.0

    @given(st.integers(min_value=1, max_value=5000),
           st.integers(min_value=1, max_value=5000))
    @settings(max_examples=100, deadline=None)
    def test_pointwise_inequality_property(self, a, b):
        n, m = min(a, b), max(a, b)
        if n == m:
            m += 1
        lhs = 1.0 / math.log(m / n)
        assert lhs < 1.0 + n / (m - n) + 1e-12
        assert lhs < 1.0 + math.sqrt(m * n) / (m - n) + 1e-12


class TestTailEstimates:
    def test_d2_would_hold_preset(self, tables):
        rec = dv.tail_d2_check(100, 0.5, tables)
        assert rec.verdict == VERDICT_DIAGNOSTIC
        assert "would hold" in rec.notes

    def test_d2_desk_scale_excess(self, tables):
        rec = dv.tail_d2_check(500, 0.05, tables)
        assert "finite part exceeds bound" in rec.notes

    def test_product_desk_scale_excess(self, tables):
        rec = dv.tail_product_check(100, 1.0, tables)
        assert rec.verdict == VERDICT_DIAGNOSTIC
        assert "finite part exceeds bound" in rec.notes

    def test_log_ratio_would_hold_preset(self, tables):
        rec = dv.weighted_log_ratio_check(100, 1.5, tables, 4000)
        assert rec.verdict == VERDICT_DIAGNOSTIC
        assert "would hold" in rec.notes

    def test_bracket_ordering(self, tables):
        for rec in (dv.tail_d2_check(200, 0.3, tables),
                    dv.tail_product_check(200, 0.7, tables),
                    dv.weighted_log_ratio_check(150, 1.0, tables, 3000)):
            assert rec.lhs_low <= rec.lhs

    def test_head_checks_are_diagnostic(self, tables):
        assert dv.log_ratio_head_check(2000, tables).verdict \
            == VERDICT_DIAGNOSTIC
        assert dv.difference_kernel_check(2000, tables).verdict \
            == VERDICT_DIAGNOSTIC

    def test_domain_guards(self, tables):
        with pytest.raises(ValueError):
            dv.tail_d2_check(100, 0.0, tables)
        with pytest.raises(ValueError):
            dv.tail_product_check(100, -0.5, tables)
