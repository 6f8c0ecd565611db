"""Command line front end.

Each subcommand runs one family of checks and prints a report; ``all``
runs every family with shared arithmetic tables and zero inventory.
Exit status is 0 when no must-hold check fails, 1 otherwise, and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import constants as co
from . import divisors as dv
from . import mollifier as mo
from . import quadrature as qu
from . import report as rp
from . import sieve as sv
from . import zeros as zr
from . import zeta as ze

_COMMANDS = ("constants", "bounds", "zeta", "zeros", "gaps",
             "explicit-formula", "all")

# Per-mode scales.  "fast" keeps every section under a few seconds;
# "full" matches the scales the library is validated at.
_SCALES = {
    "fast": {
        "limit": 20000,
        "a_values": (16, 64, 256),
        "grid_t_max": 25.0,
        "grid_step": 0.5,
        "tail_x": 10 ** 7,
        "tail_tol": 1e-5,
        "zeta_t_max": 200.0,
        "zeta_step": 0.05,
        "zero_t_max": 210.0,
        "count_heights": (20.0, 50.0, 100.0),
        "cutoffs": (50.0, 100.0, 200.0),
        "ef_points": 20,
        "x_max": 200,
        "sample": None,
    },
    "full": {
        "limit": 20000,
        "a_values": (16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
        "grid_t_max": 100.0,
        "grid_step": 0.5,
        "tail_x": 10 ** 8,
        "tail_tol": 1e-6,
        "zeta_t_max": 1000.0,
        "zeta_step": 0.01,
        "zero_t_max": 502.0,
        "count_heights": (20.0, 50.0, 100.0, 200.0, 500.0),
        "cutoffs": (50.0, 100.0, 200.0, 500.0),
        "ef_points": 20,
        "x_max": 1000,
        "sample": (2000, 5000, 10000),
    },
}

_DEFAULTS = {"out": "json", "mode": "fast", "threads": 1,
             "limit": None, "grid_step": None, "tolerance": None,
             "x_max": None, "t_max": None}

_FLAG_KEYS = ("out", "mode", "threads", "limit", "grid_step",
              "tolerance", "x_max", "t_max")


def parse_config_file(path: str) -> dict:
    """Flat key=value lines; blank lines and # comments are skipped."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _FLAG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            cfg[key] = _coerce_value(value.strip())
    return cfg


def _coerce_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then config file entries, then explicit flags."""
    cfg = dict(_DEFAULTS)
    if args.config:
        cfg.update(parse_config_file(args.config))
    for key in _FLAG_KEYS:
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    if cfg["mode"] not in _SCALES:
        raise ValueError(f"unknown mode {cfg['mode']!r}")
    if cfg["out"] not in ("json", "csv"):
        raise ValueError(f"unknown output format {cfg['out']!r}")
    if int(cfg["threads"]) < 1:
        raise ValueError("threads must be positive")
    return cfg


def _set_threads(n: int) -> None:
    import numba

    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def _scaled(cfg: dict, flag_key: str, scale_key: str):
    value = cfg[flag_key]
    return _SCALES[cfg["mode"]][scale_key] if value is None else value


def _tables(cfg: dict, shared: dict) -> mo.ArithmeticTables:
    limit = int(_scaled(cfg, "limit", "limit"))
    key = ("tables", limit)
    if key not in shared:
        shared[key] = mo.build_tables(limit)
    return shared[key]


def _zero_cache(cfg: dict, shared: dict) -> zr.ZeroCache:
    t_max = float(_scaled(cfg, "t_max", "zero_t_max"))
    key = ("zeros", t_max)
    if key not in shared:
        shared[key] = zr.ordinates_upto(t_max)
    return shared[key]


def run_constants(cfg: dict, shared: dict) -> dict:
    tol = cfg["tolerance"]
    records = [
        co.nu_star_check(**({} if tol is None else {"tol": float(tol)})),
        co.a1_value_check(),
        co.window_ratio_check(),
        co.gap_threshold_check(),
    ]
    records.extend(co.counting_cost_checks())
    records.extend(co.z_chain_checks())
    records.extend(co.absorption_checks())
    return {"records": records,
            "constants": co.build_constant_ledger().as_dicts()}


def run_bounds(cfg: dict, shared: dict) -> dict:
    scales = _SCALES[cfg["mode"]]
    tables = _tables(cfg, shared)
    t_max = float(_scaled(cfg, "t_max", "grid_t_max"))
    step = float(_scaled(cfg, "grid_step", "grid_step"))
    # The direct-sum truncation error scales with 1/X, so the fast
    # preset loosens the comparison tolerance with it.
    tol = scales["tail_tol"] if cfg["tolerance"] is None \
        else float(cfg["tolerance"])
    records = []
    for a in scales["a_values"]:
        records.append(mo.defect_sq_grid_check(a, tables,
                                               t_max=t_max, step=step))
    a_small = scales["a_values"][0]
    records.append(mo.complement_floor_check(a_small, tables,
                                             t_max=t_max, step=step))
    pts = [complex(0.5, 4.0), complex(1.0, 20.0), complex(2.0, 60.0)]
    records.append(mo.mollifier_growth_check(a_small, tables, pts))
    records.append(mo.complement_growth_check(a_small, tables, pts))
    records.append(mo.tail_oracle_check(a_small, tables,
                                        X=scales["tail_x"], tol=tol))
    records.append(mo.proof_chain_tail_check(a_small, tables))
    records.extend(dv.count_bound_checks(tables))
    records.append(dv.crossover_report())
    records.append(dv.tail_d2_check(1000, 0.1, tables))
    records.append(dv.tail_product_check(1000, 0.1, tables))
    records.append(dv.weighted_log_ratio_check(1000, 0.1, tables))
    records.append(dv.log_ratio_head_check(2000, tables))
    records.append(dv.difference_kernel_check(2000, tables))
    records.append(dv.log_ratio_pointwise_check())
    records.extend(qu.j_gamma_identity_checks())
    records.extend(qu.j_ceiling_checks())
    records.extend(qu.mollifier_mean_square_checks(tables))
    records.append(qu.defect_half_ceiling_check(a_small, 10.0, tables))
    records.append(qu.defect_one_plus_ceiling_check(a_small, 0.25,
                                                    10.0, tables))
    records.append(qu.cos_sandwich_check(2.0))
    records.append(qu.ratio_floor_check())
    records.append(qu.transfer_envelope_check(a_small, 2.0, tables))
    records.append(qu.route_check(0.75, a_small, 2.0, tables))
    records.append(qu.convexity_check(a_small, 2.0, tables))
    return {"records": records}


def run_zeta(cfg: dict, shared: dict) -> dict:
    t_max = float(_scaled(cfg, "t_max", "zeta_t_max"))
    step = float(_scaled(cfg, "grid_step", "zeta_step"))
    target = 1e-9 if cfg["tolerance"] is None else float(cfg["tolerance"])
    records = [ze.critical_line_grid_check(t_max=t_max, step=step,
                                           target_abs_error=target)]
    for sigma in (0.6, 0.75, 0.9):
        records.append(ze.strip_bound_check(sigma, 50.0))
    return {"records": records}


def run_zeros(cfg: dict, shared: dict) -> dict:
    scales = _SCALES[cfg["mode"]]
    cache = _zero_cache(cfg, shared)
    tol = cfg["tolerance"]
    records = [
        zr.first_zero_check(cache,
                            **({} if tol is None else {"tol": float(tol)})),
        zr.early_sign_check(),
        zr.count_vs_smooth_check(cache),
        zr.line_residual_check(cache),
    ]
    records.extend(zr.count_bound_checks(cache,
                                         heights=scales["count_heights"]))
    records.extend(zr.local_sum_checks(cache))
    heights = tuple(h for h in (14.0, 20.0, 50.0, 100.0, 200.0, 500.0)
                    if h + zr.GAP_HALF_WIDTH <= cache.t_max)
    records.extend(zr.associate_gap_checks(cache, heights=heights))
    records.extend(zr.log_deriv_checks(cache))
    return {"records": records, "zero_cache": cache}


def run_explicit_formula(cfg: dict, shared: dict) -> dict:
    scales = _SCALES[cfg["mode"]]
    cache = _zero_cache(cfg, shared)
    cutoffs = tuple(c for c in scales["cutoffs"]
                    if c + zr.GAP_HALF_WIDTH <= cache.t_max)
    records = list(zr.residual_checks(cache, cutoffs=cutoffs,
                                      n_points=scales["ef_points"]))
    records.extend(zr.psi_envelope_checks(
        cache, heights=(cutoffs[-1],)))
    records.append(sv.psi_theta_identity_check(5000))
    return {"records": records}


def run_gaps(cfg: dict, shared: dict) -> dict:
    scales = _SCALES[cfg["mode"]]
    x_max = int(_scaled(cfg, "x_max", "x_max"))
    rows, record = sv.cube_gap_scan(2, x_max)
    records = [record]
    if scales["sample"]:
        extra, rec2 = sv.cube_gap_scan(sample=list(scales["sample"]))
        rows = rows + extra
        records.append(rec2)
    return {"records": records, "census": rows}


_RUNNERS = {
    "constants": run_constants,
    "bounds": run_bounds,
    "zeta": run_zeta,
    "zeros": run_zeros,
    "gaps": run_gaps,
    "explicit-formula": run_explicit_formula,
}


def _run_command(command: str, cfg: dict) -> dict:
    shared: dict = {}
    timings = {}
    if command == "all":
        parts = {}
        records = []
        for name in ("constants", "bounds", "zeta", "zeros", "gaps",
                     "explicit-formula"):
            t0 = time.perf_counter()
            out = _RUNNERS[name](cfg, shared)
            timings[name] = time.perf_counter() - t0
            records.extend(out["records"])
            for key in ("constants", "census", "zero_cache"):
                if key in out:
                    parts[key] = out[key]
        out = {"records": records, **parts}
    else:
        t0 = time.perf_counter()
        out = _RUNNERS[command](cfg, shared)
        timings[command] = time.perf_counter() - t0
    return rp.build_report(
        command, cfg, out["records"],
        constants=out.get("constants"),
        census=out.get("census"),
        zero_cache=out.get("zero_cache"),
        timings=timings)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubegap",
        description="Verification reports for the prime gap estimates.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} checks")
        p.add_argument("--out", choices=("json", "csv"), default=None,
                       help="output format (default json)")
        p.add_argument("--mode", choices=("fast", "full"), default=None,
                       help="scale preset (default fast)")
        p.add_argument("--threads", type=int, default=None,
                       help="compiled-kernel thread cap (default 1)")
        p.add_argument("--limit", type=int, default=None,
                       help="arithmetic table size")
        p.add_argument("--grid-step", type=float, default=None,
                       dest="grid_step", help="grid spacing override")
        p.add_argument("--tolerance", type=float, default=None,
                       help="tolerance override for the leading check")
        p.add_argument("--x-max", type=int, default=None, dest="x_max",
                       help="largest cube index scanned")
        p.add_argument("--t-max", type=float, default=None, dest="t_max",
                       help="height cutoff override")
        p.add_argument("--config", default=None,
                       help="key=value config file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        print(f"cubegap: {exc}", file=sys.stderr)
        return 2
    _set_threads(cfg["threads"])
    report = _run_command(args.command, cfg)
    text = rp.render_json(report) if cfg["out"] == "json" \
        else rp.render_csv(report)
    print(text)
    return rp.exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
