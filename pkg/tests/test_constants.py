import json
import math

import pytest
from hypothesis import given, strategies as st

from cubegap import constants as C

# Frozen from a 40-digit evaluation of the same closed forms.
A1_ORACLE = 3537.6218623785233
A2_ORACLE = 12.880616454025938
EPS_LN_E45 = -3348.7573246638744
WINDOW_RATIO_E15 = 0.33333340507724214
CA_LN50 = 1471.5723325032946
CA_LN20 = 595.80584137555115
ABSORB_15 = 0.0013427195209807343
CD_MAIN = 745200.11085054561


def direct_ca(ln_T, a_ratio=1.0):
    # Same formula in plain floats, valid while T itself is.
    T = math.exp(ln_T)
    A = a_ratio * T
    S = T + 1.75
    x = (16.0 / 9.0) * A ** 0.75 * S ** 1.5 + 5.134 * A ** 0.75 * S ** 0.5
    return (math.log(x) + math.log(x + 2.0) + math.log(2.0)) \
        / math.log(7.0 / 6.0)


class TestClosedForms:
    def test_a1_oracle(self):
        assert math.isclose(C.a1_of_kappa(1.501), A1_ORACLE, rel_tol=1e-13)

    def test_a2_oracle(self):
        assert math.isclose(C.a2_of_omega(1.598), A2_ORACLE, rel_tol=1e-13)

    def test_density_constant_oracle(self):
        # Correction terms at the stated threshold sit near 1e-22.
        assert math.isclose(C.density_constant(), CD_MAIN, rel_tol=1e-12)

    def test_density_constant_scales_with_a2(self):
        r = C.density_constant(a2=2.0 * A2_ORACLE) / C.density_constant()
        assert math.isclose(r, 2.0, rel_tol=1e-9)

    def test_kappa_objective_tracks_a1(self):
        # Same shape as the first coefficient up to one scalar.
        r1 = C.kappa_objective(1.3) / math.exp(1.0 / 1.3)
        r2 = C.kappa_objective(2.1) / math.exp(1.0 / 2.1)
        p1 = 685.026 * 1.3 ** (4 / 3) + 2061.486 * 1.3 ** (1 / 3)
        p2 = 685.026 * 2.1 ** (4 / 3) + 2061.486 * 2.1 ** (1 / 3)
        assert math.isclose(r1 / r2, p1 / p2, rel_tol=1e-6)


class TestGolden:
    def test_parabola(self):
        x = C.golden_minimize(lambda t: (t - 2.0) ** 2, 0.0, 5.0)
        assert abs(x - 2.0) < 1e-9

    @given(st.floats(min_value=-3.0, max_value=3.0))
    def test_shifted_parabola(self, c):
        # The +1 floor flattens the last ~1e-8 around the minimum.
        x = C.golden_minimize(lambda t: (t - c) ** 2 + 1.0, -4.0, 4.0)
        assert abs(x - c) < 5e-8

    def test_deterministic(self):
        assert C.suboptimize_all() == C.suboptimize_all()


class TestSuboptimization:
    def test_nu_star_exact(self):
        # d/dnu of exp(8 nu/3)/nu vanishes exactly at 3/8.
        opt = C.suboptimize_all()
        assert abs(opt["nu"] - 0.375) < 1e-8

    def test_nu_star_record_holds(self):
        rec = C.nu_star_check()
        assert rec.verdict == "holds"
        assert rec.margin > 10.0 * rec.err

    def test_kappa_star(self):
        opt = C.suboptimize_all()
        assert abs(opt["kappa"] - 1.5011682803) < 1e-6

    def test_omega_star_readings(self):
        opt = C.suboptimize_all()
        assert 1.55 < opt["omega"] < 1.63
        assert 2.9 < opt["omega_alt"] < 3.15

    def test_stated_omega_near_optimal(self):
        best = C.omega_objective(C.suboptimize_all()["omega"])
        assert C.omega_objective(1.598) < best * 1.0001

    def test_a1_record_holds(self):
        rec = C.a1_value_check()
        assert rec.verdict == "holds"
        assert rec.lhs < 0.01


class TestCountingCost:
    def test_matches_direct_floats(self):
        for ln_T in (10.0, 20.0, 50.0, 100.0):
            assert math.isclose(C.ca_value(ln_T), direct_ca(ln_T),
                                rel_tol=1e-11)

    def test_frozen_oracles(self):
        assert math.isclose(C.ca_value(50.0), CA_LN50, rel_tol=1e-12)
        assert math.isclose(C.ca_value(20.0), CA_LN20, rel_tol=1e-12)

    def test_wide_window_increases_cost(self):
        assert C.ca_value(C.LN_T0, 595.0 / 594.0) > C.ca_value(C.LN_T0)

    def test_ratio_guard(self):
        with pytest.raises(ValueError):
            C.ca_value(50.0, a_ratio=1.01)
        with pytest.raises(ValueError):
            C.ca_value(50.0, a_ratio=0.99)

    def test_counting_cost_records_hold(self):
        recs = C.counting_cost_checks()
        assert [r.verdict for r in recs] == ["holds", "holds"]
        ratio = recs[0]
        assert ratio.rhs == 29.193
        assert 0.0 < ratio.margin < 0.001


class TestRegimeFunctions:
    def test_epsilon_frozen(self):
        assert math.isclose(C.epsilon_ln(C.LN_X_PI), EPS_LN_E45,
                            rel_tol=1e-13)

    def test_epsilon_decreasing(self):
        grid = [math.exp(u) for u in (10.0, 15.0, 18.0, 45.0)]
        vals = [C.epsilon_ln(x) for x in grid]
        assert vals == sorted(vals, reverse=True)

    def test_epsilon_guard(self):
        with pytest.raises(ValueError):
            C.epsilon_ln(0.5)

    def test_window_ratio_frozen(self):
        assert math.isclose(C.window_ln_T(C.LN_X0) / C.LN_X0,
                            WINDOW_RATIO_E15, rel_tol=1e-13)

    def test_window_record_holds(self):
        rec = C.window_ratio_check()
        assert rec.verdict == "holds"
        assert rec.lhs < 0.34

    def test_decay_floors_decreasing(self):
        grid = [math.exp(u) for u in (10.0, 15.0, 18.0, 45.0)]
        for f in (C.zero_density_z, C.combined_Z):
            vals = [f(x) for x in grid]
            assert all(v > 0.0 for v in vals)
            assert vals == sorted(vals, reverse=True)

    def test_divisor_identity(self):
        assert abs(9.0 * C.COMBINED_SCALE - C.WINDOW_DIVISOR) < 1e-12

    def test_z_chain_records_hold(self):
        recs = C.z_chain_checks()
        assert all(r.verdict == "holds" for r in recs)


class TestAbsorption:
    def test_frozen_excess(self):
        assert math.isclose(C.absorption_excess(math.exp(15.0)),
                            ABSORB_15, rel_tol=1e-10)

    def test_excess_shrinks(self):
        a = C.absorption_excess(math.exp(15.0))
        b = C.absorption_excess(math.exp(18.0))
        c = C.absorption_excess(C.LN_X_PI)
        assert a > b > c > 0.0

    def test_record_verdicts(self):
        recs = C.absorption_checks()
        assert recs[0].verdict == "indeterminate"
        assert all(r.verdict == "diagnostic" for r in recs[1:])
        assert all("finite part exceeds" in r.notes for r in recs[1:])


class TestGapThreshold:
    def test_margin_bracket(self):
        assert C.gap_chain_margin(25.0) < 0.0 < C.gap_chain_margin(26.0)
        assert C.gap_chain_margin(25.38) < 0.0 < C.gap_chain_margin(25.39)

    def test_vacuous_region_is_minus_inf(self):
        assert C.gap_chain_margin(3.0) == -math.inf

    def test_record(self):
        rec = C.gap_threshold_check()
        assert rec.verdict == "diagnostic"
        assert "finite part exceeds" in rec.notes
        assert 25.0 < rec.lhs < 26.0
        assert rec.rhs == 15.0


class TestLedger:
    def test_statuses(self):
        led = C.build_constant_ledger()
        status = {e.name: e.status for e in led.entries}
        assert status["nu_star"] == "match"
        assert status["window_divisor"] == "match"
        assert status["first_coefficient"] == "close"
        assert status["counting_affine"] == "close"
        assert status["second_coefficient"] == "discrepancy"
        assert status["density_constant"] == "discrepancy"
        assert status["gap_threshold_loglog"] == "discrepancy"
        assert status["count_bound_form"] == "editorially_resolved"
        assert status["psi_error_coefficients"] == "unresolved_placeholder"

    def test_names_unique(self):
        led = C.build_constant_ledger()
        names = [e.name for e in led.entries]
        assert len(names) == len(set(names))

    def test_json_round_trip(self):
        led = C.build_constant_ledger()
        dicts = led.as_dicts()
        assert json.loads(json.dumps(dicts)) == dicts

    def test_rel_deviation_none_for_notes(self):
        led = C.build_constant_ledger()
        for e in led.entries:
            if e.computed is None:
                assert e.rel_deviation is None
                assert e.notes

    def test_affine_is_sharp(self):
        led = C.build_constant_ledger()
        entry = next(e for e in led.entries if e.name == "counting_affine")
        assert entry.computed < entry.stated
        assert entry.stated - entry.computed < 2e-4
