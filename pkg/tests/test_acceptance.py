"""The eleven headline checks, at their stated scales and tolerances.

One test per criterion, so a verbose run prints one pass/fail line
each.  Timed criteria measure their own wall clock and assert the
budget.  These scales are larger than the unit suites; the whole file
stays under the summed budgets by a wide margin.
"""

import json
import subprocess
import sys
import time

import pytest

from cubegap import constants as co
from cubegap import mollifier as mo
from cubegap import quadrature as qu
from cubegap import report as rp
from cubegap import sieve as sv
from cubegap import zeros as zr
from cubegap import zeta as ze
from cubegap.records import VERDICT_FAILS, VERDICT_HOLDS


@pytest.fixture(scope="module")
def cache502():
    return zr.ordinates_upto(502.0)


def detail(num, ok, text):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] criterion {num:02d}: {text}"
    print(line)
    return line


def test_criterion_01_mollifier_grid_bound(tables):
    t0 = time.perf_counter()
    recs = [mo.defect_sq_grid_check(A, tables, t_max=100.0, step=0.5)
            for A in (16, 32, 64, 128, 256, 512, 1024, 2048, 4096)]
    dt = time.perf_counter() - t0
    worst = min(r.margin / (10.0 * r.err) for r in recs)
    ok = all(r.verdict == VERDICT_HOLDS for r in recs) and dt < 60.0
    line = detail(1, ok, f"|V_A|^2 <= 7.9/A on 9 sizes x 201 nodes, "
                  f"min margin/(10 err) = {worst:.3g}, {dt:.1f}s")
    assert ok, line


def test_criterion_02_exact_tail_oracle(tables):
    recs = [mo.tail_oracle_check(A, tables, X=10 ** 8, tol=1e-6)
            for A in (16, 100, 1000)]
    chain = mo.proof_chain_tail_check(16, tables)
    worst = max(r.lhs for r in recs)
    ok = (all(r.verdict == VERDICT_HOLDS for r in recs)
          and chain.verdict == VERDICT_FAILS)
    line = detail(2, ok, f"closed form vs direct sum to 1e8 within 1e-6 "
                  f"(worst {worst:.3g}); 2.8/A recorded {chain.verdict} "
                  f"at A=16")
    assert ok, line


def test_criterion_03_critical_line_grid():
    t0 = time.perf_counter()
    rec = ze.critical_line_grid_check(t_max=1000.0, step=0.01,
                                      target_abs_error=1e-9)
    dt = time.perf_counter() - t0
    ok = (rec.verdict == VERDICT_HOLDS and "violations=0" in rec.notes
          and dt < 600.0)
    line = detail(3, ok, f"zeta line bound on 100000 nodes, "
                  f"{rec.notes}, {dt:.1f}s")
    assert ok, line


def test_criterion_04_moment_integrals():
    idents = qu.j_gamma_identity_checks(tol=1e-8)
    ceilings = qu.j_ceiling_checks()
    with_ceiling = [r for r in ceilings if "b=2" in r.notes]
    ok = (all(r.verdict == VERDICT_HOLDS for r in idents)
          and len(with_ceiling) == 2
          and all(r.verdict in (VERDICT_HOLDS, VERDICT_FAILS)
                  for r in with_ceiling))
    verdicts = ", ".join(f"{r.notes.split(';')[0]}: {r.verdict}"
                         for r in with_ceiling)
    line = detail(4, ok, f"gamma identities within 1e-8; "
                  f"ceiling verdicts recorded ({verdicts})")
    assert ok, line


def test_criterion_05_mean_square_oracle(tables):
    oracle, ceiling = qu.mollifier_mean_square_checks(
        tables, n_pairs=20, rel_tol=1e-6)
    ok = (oracle.verdict == VERDICT_HOLDS and oracle.rhs == 1e-6
          and ceiling.verdict == VERDICT_HOLDS)
    line = detail(5, ok, f"closed form vs quadrature rel err "
                  f"{oracle.lhs:.3g} over 20 draws; ceiling holds")
    assert ok, line


def test_criterion_06_constants_pipeline():
    nu = co.nu_star_check(tol=1e-6)
    a1 = co.a1_value_check(tol=0.5)
    ratio, affine = co.counting_cost_checks()
    ledger = {e["name"]: e for e in co.build_constant_ledger().as_dicts()}
    documented = all(
        ledger[name]["rel_deviation"] is not None
        for name in ("second_coefficient", "density_constant"))
    ok = (all(r.verdict == VERDICT_HOLDS for r in (nu, a1, ratio, affine))
          and documented)
    line = detail(6, ok, f"nu*, A1, and both counting-cost ceilings hold; "
                  f"A2 rel dev {ledger['second_coefficient']['rel_deviation']:.3g} "
                  f"and C_D rel dev "
                  f"{ledger['density_constant']['rel_deviation']:.3g} documented")
    assert ok, line


def test_criterion_07_zero_inventory(cache502):
    t0 = time.perf_counter()
    recs = [zr.first_zero_check(cache502, tol=1e-6),
            zr.early_sign_check(),
            zr.count_vs_smooth_check(cache502)]
    recs += zr.count_bound_checks(cache502,
                                  heights=(20.0, 50.0, 100.0, 200.0, 500.0))
    dt = time.perf_counter() - t0
    smooth = next(r for r in recs
                  if r.check_id == "zeros.count_vs_smooth")
    ok = (all(r.verdict == VERDICT_HOLDS for r in recs)
          and smooth.lhs <= 2.0 and dt < 300.0)
    line = detail(7, ok, f"first ordinate, early signs, count ceilings, "
                  f"smooth deviation {smooth.lhs:.3f} <= 2, {dt:.1f}s")
    assert ok, line


def test_criterion_08_local_zero_sums(cache502):
    recs = zr.local_sum_checks(cache502,
                               ts=(0.0, 10.0, 14.1347, 50.0, 100.0),
                               u=1.155)
    fails = [r for r in recs if r.verdict == VERDICT_FAILS]
    ok = len(recs) == 15 and not fails
    line = detail(8, ok, f"local sum, count, and far-sum records at five "
                  f"heights: {len(recs) - len(fails)}/{len(recs)} clean")
    assert ok, line


def test_criterion_09_explicit_formula(cache502):
    decreasing, final = zr.residual_checks(
        cache502, cutoffs=(50.0, 100.0, 200.0, 500.0), n_points=20)
    ok = (decreasing.verdict == VERDICT_HOLDS
          and final.verdict == VERDICT_HOLDS and final.lhs <= 2.0)
    line = detail(9, ok, f"mean residual strictly decreasing "
                  f"({decreasing.notes.split(': ')[1]}); "
                  f"r(1000.5, T=500) = {final.lhs:.3f} <= 2")
    assert ok, line


def test_criterion_10_cube_gap_scan():
    t0 = time.perf_counter()
    rows, rec = sv.cube_gap_scan(2, 1000)
    dt = time.perf_counter() - t0
    sampled, rec2 = sv.cube_gap_scan(sample=[2000, 5000, 10000])
    ok = (rec.verdict == VERDICT_HOLDS and len(rows) == 999
          and rec2.verdict == VERDICT_HOLDS and dt < 120.0)
    line = detail(10, ok, f"999 exhaustive intervals in {dt:.1f}s, "
                  f"min count {min(r.count for r in rows)}; sampled "
                  f"{[r.count for r in sampled]} at x=2000,5000,10000")
    assert ok, line


def test_criterion_11_report_determinism():
    def run(threads):
        proc = subprocess.run(
            [sys.executable, "-m", "cubegap.cli", "all",
             "--threads", str(threads)],
            capture_output=True, text=True, timeout=600)
        assert proc.returncode == 0, proc.stderr[-2000:]
        return rp.strip_timings(json.loads(proc.stdout))

    one, eight = run(1), run(8)
    ok = one == eight
    line = detail(11, ok, f"all-checks report identical across thread "
                  f"counts (run_id {one['run_id']})")
    assert ok, line
