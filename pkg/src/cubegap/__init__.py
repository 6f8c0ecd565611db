"""Checks for a prime between consecutive cubes, and the analytic
inputs behind that estimate: mollified Dirichlet polynomials, divisor
sums, critical-line evaluation, zero inventories, and the constant
pipeline that assembles the final bounds.
"""

# The zeta and mollifier evaluators stay on their submodules; binding
# them here would shadow those submodules on the package.
from .constants import build_constant_ledger, density_constant, suboptimize_all
from .mollifier import ArithmeticTables, build_tables
from .quadrature import j_moment, mollifier_mean_square
from .report import build_report, render_csv, render_json, strip_timings
from .sieve import cube_gap_scan, primes_upto, psi, theta
from .zeros import ZeroCache, associate, compute_zeros, ordinates_upto
from .zeta import critical_line_bound, zeta_values_on_line

__version__ = "0.1.0"

__all__ = [
    "ArithmeticTables",
    "ZeroCache",
    "associate",
    "build_constant_ledger",
    "build_report",
    "build_tables",
    "compute_zeros",
    "critical_line_bound",
    "cube_gap_scan",
    "density_constant",
    "j_moment",
    "mollifier_mean_square",
    "ordinates_upto",
    "primes_upto",
    "psi",
    "render_csv",
    "render_json",
    "strip_timings",
    "suboptimize_all",
    "theta",
    "zeta_values_on_line",
    "__version__",
]
