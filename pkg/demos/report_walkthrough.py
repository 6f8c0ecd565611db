# Build one verification report in process and pick it apart: summary,
# the records that fail on purpose, and the stable run digest.

from cubegap.cli import resolve_config, build_parser, _run_command
from cubegap.report import strip_timings

args = build_parser().parse_args(["all"])
report = _run_command("all", resolve_config(args))

print("summary:", report["summary"])
print("run id :", report["run_id"])

print()
print("records that fail by design:")
for rec in report["records"]:
    if rec["verdict"] == "fails":
        print(f"  {rec['check_id']:32s} lhs={rec['lhs']:.4g} "
              f"rhs={rec['rhs']:.4g}")
        print(f"      {rec.get('notes', '')}")

print()
print("diagnostic records (hypotheses out of reach at this scale):")
for rec in report["records"]:
    if rec["verdict"] == "diagnostic":
        print(f"  {rec['check_id']}")

bare = strip_timings(report)
print()
print(f"comparison view drops timings and thread count; "
      f"{len(bare['records'])} records remain the invariant payload.")
