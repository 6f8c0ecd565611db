import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubegap import mollifier as mo
from cubegap.records import VERDICT_FAILS, VERDICT_HOLDS

# Hand-written oracles.  Everything below is computable by pencil or by
# a method structurally unrelated to the code under test.

# d(n) for n = 1..16, counted by listing divisors.
D_SMALL = [1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6, 2, 4, 4, 5]
# mu(n) for n = 1..16 from squarefree factor counts.
MU_SMALL = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0]


def brute_mu(n):
    if n == 1:
        return 1
    count = 0
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            count += 1
        else:
            p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def brute_d(n):
    return sum(1 for k in range(1, n + 1) if n % k == 0)


def brute_nu(n, A):
    return sum(brute_mu(m) for m in range(1, min(n, A) + 1) if n % m == 0)


# Exact rational head of sum d(n)/n^2, n <= 16, so the tail oracle is
# pi^4/36 minus this, independent of any sieve.
HEAD_16 = sum(Fraction(d, n * n) for n, d in enumerate(D_SMALL, start=1))
TAIL_16 = math.pi ** 4 / 36 - float(HEAD_16)


class TestTables:
    def test_small_mobius(self, tables):
        assert list(tables.mobius[1:17]) == MU_SMALL

    def test_small_divisor_counts(self, tables):
        assert list(tables.divisor_count[1:17]) == D_SMALL

    def test_von_mangoldt_support(self, tables):
        assert tables.von_mangoldt[1] == 0.0
        assert tables.von_mangoldt[6] == 0.0
        assert tables.von_mangoldt[27] == pytest.approx(math.log(3), abs=1e-15)
        assert tables.von_mangoldt[1024] == pytest.approx(math.log(2), abs=1e-15)

    def test_primes_list(self, tables):
        assert list(tables.primes[:8]) == [2, 3, 5, 7, 11, 13, 17, 19]

    @given(st.integers(min_value=1, max_value=2000))
    @settings(max_examples=60, deadline=None)
    def test_mobius_matches_brute(self, tables, n):
        assert tables.mobius[n] == brute_mu(n)

    @given(st.integers(min_value=1, max_value=400))
    @settings(max_examples=40, deadline=None)
    def test_divisor_count_matches_brute(self, tables, n):
        assert tables.divisor_count[n] == brute_d(n)

    @given(st.integers(min_value=2, max_value=1500))
    @settings(max_examples=50, deadline=None)
    def test_mobius_divisor_sum_vanishes(self, tables, n):
        assert sum(int(tables.mobius[m])
                   for m in range(1, n + 1) if n % m == 0) == 0

    def test_capacity_guard(self):
        with pytest.raises(mo.CapacityError):
            mo.build_tables(mo.TABLE_CAP + 1)


class TestMollifier:
    def test_trivial_truncations(self, tables):
        assert mo.mollifier(0.0, 1, tables) == 1.0
        assert mo.mollifier(0.0, 3, tables) == -1.0

    def test_defect_at_A1_is_zeta_minus_one(self, tables):
        v = mo.mollifier_defect(2.0, 1, tables)
        assert v.value.real == pytest.approx(math.pi ** 2 / 6 - 1, abs=1e-12)
        assert abs(v.value.imag) < 1e-15

    def test_grid_matches_pointwise(self, tables):
        ts = np.array([0.0, 1.5, 7.25, 33.0])
        vals, err = mo.defect_on_grid(64, ts, tables, 2.0, 1e-12)
        for t, v in zip(ts, vals):
            single = mo.mollifier_defect(complex(2.0, t), 64, tables, 1e-12)
            assert abs(v - single.value) < 1e-10 + err + single.abs_error

    def test_table_too_small(self, tables):
        with pytest.raises(mo.CapacityError):
            mo.mollifier(2.0, tables.limit + 1, tables)


class TestNuCoefficients:
    def test_cancellation_below_A(self, tables):
        co = mo.nu_coefficients(30, 500, tables)
        assert min(co.nu) == 31

    @given(st.integers(min_value=2, max_value=40),
           st.integers(min_value=41, max_value=300))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, tables, A, n):
        co = mo.nu_coefficients(A, 300, tables)
        assert co.nu[n] == brute_nu(n, A)

    @given(st.integers(min_value=2, max_value=40),
           st.integers(min_value=41, max_value=300))
    @settings(max_examples=40, deadline=None)
    def test_bounded_by_divisor_count(self, tables, A, n):
        co = mo.nu_coefficients(A, 300, tables)
        assert abs(co.nu[n]) <= tables.divisor_count[n]


class TestDivisorTail:
    def test_exact_matches_rational_head(self, tables):
        assert mo.exact_divisor_tail(16, tables) == pytest.approx(
            TAIL_16, abs=1e-13)

    def test_direct_kernel_tiny(self):
        # A=1, X=3: terms n=2,3 with d(n)=2 each.
        want = 2 / 4 + 2 / 9
        assert mo.direct_divisor_tail(1, 3) == pytest.approx(want, abs=1e-15)

    def test_direct_approaches_exact(self, tables):
        exact = mo.exact_divisor_tail(16, tables)
        d6 = mo.direct_divisor_tail(16, 10 ** 6)
        assert abs(exact - d6) < 2e-5
        assert d6 < exact

    def test_oracle_check_record(self, tables):
        rec = mo.tail_oracle_check(16, tables, X=10 ** 7, tol=1e-5)
        assert rec.verdict == VERDICT_HOLDS

    def test_chain_ceiling_fails_honestly(self, tables):
        for A in (16, 100, 1000):
            rec = mo.proof_chain_tail_check(A, tables)
            assert rec.verdict == VERDICT_FAILS
            assert rec.lhs > rec.rhs


class TestSeriesIdentity:
    def test_matches_at_interior_point(self, tables):
        rec = mo.defect_series_check(16, 2.5 + 3j, 5000, tables)
        assert rec.verdict == VERDICT_HOLDS

    def test_rejects_small_sigma(self, tables):
        with pytest.raises(ValueError):
            mo.defect_series_check(16, 1.2, 5000, tables)


class TestGridChecks:
    def test_defect_sq_grid_holds(self, tables):
        rec = mo.defect_sq_grid_check(16, tables, t_max=25.0, step=0.5)
        assert rec.verdict == VERDICT_HOLDS
        assert rec.margin > 10 * rec.err

    def test_complement_floor_holds(self, tables):
        rec = mo.complement_floor_check(16, tables, t_max=25.0, step=0.5)
        assert rec.verdict == VERDICT_HOLDS

    def test_floor_needs_large_A(self, tables):
        with pytest.raises(ValueError):
            mo.complement_floor_check(8, tables)


class TestGrowthCeilings:
    def test_mollifier_growth_sampled(self, tables):
        pts = [complex(0.5, t) for t in (4.0, 10.0, 50.0)] \
            + [complex(2.0, 100.0), complex(0.25, 5.0)]
        rec = mo.mollifier_growth_check(64, tables, pts)
        assert rec.verdict == VERDICT_HOLDS

    def test_complement_growth_sampled(self, tables):
        pts = [complex(0.5, 4.0), complex(1.0, 20.0), complex(2.0, 60.0)]
        rec = mo.complement_growth_check(16, tables, pts)
        assert rec.verdict == VERDICT_HOLDS

    def test_strip_domain_guard(self, tables):
        with pytest.raises(ValueError):
            mo.complement_growth_check(16, tables, [complex(0.5, 1.0)])
