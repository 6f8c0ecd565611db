"""Deterministic report assembly shared by every CLI entry point.

One run produces one report dict: schema tag, a run id derived from the
effective configuration, the record list, optional constant and census
sections, and a timing block.  Timings are the only part allowed to
differ between repeat runs; everything else is normalized to 15
significant digits so byte-identical JSON is reproducible across
thread counts.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math

SCHEMA = "report_v1"
SIG_DIGITS = 15

# Records whose failure turns the process exit code to 1.
MUST_HOLD = frozenset({
    "mollifier.defect_sq_grid",
    "mollifier.tail_oracle",
    "quadrature.j_gamma_identity",
    "quadrature.mollifier_mean_square_oracle",
    "quadrature.mollifier_mean_square_ceiling",
    "zeros.count_bound",
    "zeros.local_sum",
    "zeros.local_count",
    "zeros.far_sum",
    "constants.nu_star",
    "constants.a1_value",
    "sieve.cube_gap_scan",
})

_RECORD_FIELDS = ("check_id", "claim", "lhs", "rhs", "margin", "verdict",
                  "err", "lhs_low", "notes")
_CENSUS_FIELDS = ("x", "lo", "hi", "count", "min_prime", "max_prime")
_ZERO_FIELDS = ("index", "ordinate", "bracket_width")


def round_float(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(f"{x:.{SIG_DIGITS}g}")


def canonical(obj):
    """Copy with every float cut to 15 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return round_float(obj)
    if isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): canonical(obj[k]) for k in sorted(obj)}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"unsupported report value of type {type(obj)!r}")


def run_id(command: str, config: dict) -> str:
    """Digest of the effective configuration.

    Thread count and output format never change results, so they stay
    out of the digest.
    """
    base = {k: v for k, v in config.items() if k not in ("threads", "out")}
    payload = json.dumps([command, canonical(base)], sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def summarize(records: list[dict]) -> dict:
    counts = {"holds": 0, "fails": 0, "indeterminate": 0, "diagnostic": 0}
    must_hold_failures = []
    for rec in records:
        counts[rec["verdict"]] += 1
        if rec["verdict"] == "fails" and rec["check_id"] in MUST_HOLD:
            must_hold_failures.append(rec["check_id"])
    return {**counts, "must_hold_failures": sorted(set(must_hold_failures))}


def build_report(command: str, config: dict, records: list,
                 constants: list | None = None,
                 census: list | None = None,
                 zero_cache=None,
                 timings: dict | None = None) -> dict:
    recs = [r if isinstance(r, dict) else r.as_dict() for r in records]
    recs.sort(key=lambda r: (r["check_id"], r["claim"], r.get("notes", "")))
    report = {
        "schema": SCHEMA,
        "command": command,
        "run_id": run_id(command, config),
        "config": canonical(config),
        "records": canonical(recs),
        "summary": summarize(recs),
    }
    if constants is not None:
        report["constants"] = canonical(constants)
    if census is not None:
        report["census"] = canonical([
            r if isinstance(r, dict) else vars(r) for r in census])
    if zero_cache is not None:
        report["zeros"] = canonical([
            {"index": i + 1, "ordinate": float(g),
             "bracket_width": zero_cache.scan_step}
            for i, g in enumerate(zero_cache.ordinates)])
    report["timings"] = canonical(timings or {})
    return report


def exit_code(report: dict) -> int:
    return 1 if report["summary"]["must_hold_failures"] else 0


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _table(stream, fields, rows):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow(["" if row.get(f) is None else row.get(f)
                         for f in fields])


def render_csv(report: dict) -> str:
    """Record table, then census and zero tables when present.

    Blocks are separated by one blank line and lead with their name.
    """
    out = io.StringIO()
    out.write("# records\n")
    _table(out, _RECORD_FIELDS, report["records"])
    if "constants" in report:
        out.write("\n# constants\n")
        _table(out, ("name", "computed", "stated", "rel_deviation",
                     "status", "notes"), report["constants"])
    if "census" in report:
        out.write("\n# census\n")
        _table(out, _CENSUS_FIELDS, report["census"])
    if "zeros" in report:
        out.write("\n# zeros\n")
        _table(out, _ZERO_FIELDS, report["zeros"])
    return out.getvalue()


def strip_timings(report: dict) -> dict:
    """Comparison view: everything that must match between repeat runs.

    Drops wall-clock timings and the config keys that cannot change
    results (the same two run_id ignores).
    """
    out = {k: v for k, v in report.items() if k != "timings"}
    out["config"] = {k: v for k, v in report["config"].items()
                     if k not in ("threads", "out")}
    return out
