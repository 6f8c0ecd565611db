"""Riemann zeta on the half-plane sigma > -1 with certified truncation error.

Evaluation is Euler-Maclaurin: a direct sum to N, the integral and
half-term corrections, Bernoulli corrections through B8, and an explicit
remainder bound (first omitted Bernoulli term scaled by |s+9|/(sigma+9)).
N is chosen on a fixed geometric ladder so that tightening the error
target never loosens the reported bound.

Also provides the explicit growth bounds used downstream: the critical
line bound 3 t^{1/6} log(t+e) + 2.657 and the strip bound
(4/3) t^{3/2} + 5.134 t^{1/2} valid for sigma >= 1/4, t >= 3.297.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .records import BoundCheckRecord, bound_check, register_check

__all__ = [
    "ComplexPoint",
    "EvaluatedValue",
    "zeta",
    "zeta_values_on_line",
    "partial_sum_remainder",
    "critical_line_bound",
    "strip_zeta_bound",
    "critical_line_grid_check",
    "strip_bound_check",
]

# Bernoulli numbers B2..B8 for the correction terms, B10 for the remainder.
_BERNOULLI = {2: 1.0 / 6, 4: -1.0 / 30, 6: 1.0 / 42, 8: -1.0 / 30}
_B10_OVER_FACT = (5.0 / 66) / math.factorial(10)

_N_CAP = 10_000_000
_EPS = np.finfo(float).eps

# Constants of the two growth bounds.
CRITICAL_LINE_COEFF = 3.0
CRITICAL_LINE_ADD = 2.657
STRIP_COEFF_32 = 4.0 / 3.0
STRIP_COEFF_12 = 5.134
STRIP_T_MIN = 3.297
STRIP_SIGMA_MIN = 0.25


@dataclass(frozen=True)
class ComplexPoint:
    """A point sigma + i t of the complex plane."""

    sigma: float
    t: float

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    @staticmethod
    def from_complex(s: complex) -> "ComplexPoint":
        return ComplexPoint(s.real, s.imag)


@dataclass(frozen=True)
class EvaluatedValue:
    """A computed complex value with a bound on its absolute error."""

    value: complex
    abs_error: float


def _coerce(s) -> complex:
    if isinstance(s, ComplexPoint):
        return s.s
    return complex(s)


# Cache of log n, grown on demand; index n-1 holds log n.
_log_cache = np.log(np.arange(1, 1025, dtype=float))


def _logs(n: int) -> np.ndarray:
    global _log_cache
    if n > _log_cache.size:
        size = 1 << max(10, (n - 1).bit_length())
        _log_cache = np.log(np.arange(1, size + 1, dtype=float))
    return _log_cache[:n]


def _remainder_bound(s: complex, sigma: float, n: int) -> float:
    # First omitted term (B10) times |s+9|/(sigma+9).
    prod = 1.0
    for j in range(9):
        prod *= abs(s + j)
    return (_B10_OVER_FACT * prod * n ** (-(sigma + 9.0))
            * abs(s + 9.0) / (sigma + 9.0))


def _float_allowance(sigma: float, n: int) -> float:
    # Rounding allowance for the direct sum, from an integral estimate of
    # sum(n^-sigma); kept deterministic and monotone in n.
    if abs(sigma - 1.0) < 1e-12:
        size = 1.0 + math.log(n)
    else:
        size = 1.0 + abs((n ** (1.0 - sigma) - 1.0) / (1.0 - sigma))
    return 8.0 * _EPS * (size + 4.0)


def _pick_n(s: complex, sigma: float, t: float, target: float) -> tuple[int, float]:
    n = max(math.ceil(abs(t)) + 10, 32)
    while True:
        fl = _float_allowance(sigma, n)
        err = _remainder_bound(s, sigma, n) + fl
        if err <= target:
            return n, err
        # The allowance grows with n when sigma < 1, so a target below it
        # can never be met by adding terms.
        if fl > target or n >= _N_CAP:
            raise ValueError(
                f"error target {target:g} not reachable within "
                f"{_N_CAP} terms at s={s}")
        n = min(_N_CAP, math.ceil(1.5 * n))


def zeta(s, target_abs_error: float = 1e-10) -> EvaluatedValue:
    """Evaluate zeta(s) for sigma >= -1, s != 1.

    The returned abs_error covers the Euler-Maclaurin truncation
    remainder in full, plus a fixed rounding allowance for the direct
    sum.  Points with sigma < -1 are rejected rather than extended.
    """
    s = _coerce(s)
    sigma, t = s.real, s.imag
    if sigma < -1.0:
        raise ValueError("sigma < -1 is outside the supported half-plane")
    if abs(s - 1.0) < 1e-9:
        raise ValueError("s = 1 is the pole of zeta")
    if not 0.0 < target_abs_error <= 1e-2:
        raise ValueError("target_abs_error must be in (0, 1e-2]")

    n, err = _pick_n(s, sigma, t, target_abs_error)
    logs = _logs(n)
    direct = np.exp(-s * logs).sum()

    ln_n = logs[n - 1]
    n_pow_ms = np.exp(-s * ln_n)          # N^-s
    value = direct + n_pow_ms * n / (s - 1.0) - 0.5 * n_pow_ms

    rising = 1.0 + 0.0j                    # s (s+1) ... accumulated
    j = 0
    for k in (2, 4, 6, 8):
        while j < k - 1:
            rising *= s + j
            j += 1
        coeff = _BERNOULLI[k] / math.factorial(k)
        value += coeff * rising * np.exp(-(s + (k - 1.0)) * ln_n)

    return EvaluatedValue(complex(value), err)


def zeta_values_on_line(sigma: float, ts: np.ndarray,
                        target_abs_error: float = 1e-10):
    """zeta(sigma + i t) for every t in ts.

    Returns (values, abs_errors) as numpy arrays.  Just a loop over
    zeta(); grouping exists so grid scans have one obvious entry point.
    """
    vals = np.empty(len(ts), dtype=complex)
    errs = np.empty(len(ts), dtype=float)
    for i, t in enumerate(ts):
        ev = zeta(complex(sigma, float(t)), target_abs_error)
        vals[i] = ev.value
        errs[i] = ev.abs_error
    return vals, errs


# ----------------------------------------------------------------------
# growth bounds

def critical_line_bound(t: float) -> float:
    """Upper bound for |zeta(1/2 + i t)|, valid for all t >= 0."""
    return CRITICAL_LINE_COEFF * abs(t) ** (1.0 / 6) * math.log(abs(t) + math.e) \
        + CRITICAL_LINE_ADD


def strip_zeta_bound(sigma: float, t: float) -> float:
    """Upper bound (4/3) t^{3/2} + 5.134 t^{1/2} for sigma >= 1/4, t >= 3.297."""
    if sigma < STRIP_SIGMA_MIN:
        raise ValueError("strip bound needs sigma >= 1/4")
    if t < STRIP_T_MIN:
        raise ValueError("strip bound needs t >= 3.297")
    return STRIP_COEFF_32 * t ** 1.5 + STRIP_COEFF_12 * math.sqrt(t)


_CHK_GRID = register_check(
    "zeta.critical_line_grid",
    "max over the t grid of |zeta(1/2+it)| stays under 3 t^{1/6} log(t+e) + 2.657")
_CHK_PARTIAL = register_check(
    "zeta.partial_sum_remainder",
    "remainder of the length floor(t^2) partial sum stays under 5.134 t^{1/2}")
_CHK_STRIP = register_check(
    "zeta.strip_bound",
    "|zeta(sigma+it)| stays under (4/3) t^{3/2} + 5.134 t^{1/2} in the strip")


def partial_sum_remainder(sigma: float, t: float,
                          target_abs_error: float = 1e-10) -> BoundCheckRecord:
    """Check |zeta(s) - sum_{n <= floor(t^2)} n^-s| <= 5.134 t^{1/2}.

    Needs sigma >= 1/4 and t >= 3.297 so the claimed bound applies.
    """
    if sigma < STRIP_SIGMA_MIN or t < STRIP_T_MIN:
        raise ValueError("remainder bound needs sigma >= 1/4 and t >= 3.297")
    n = int(t * t)
    if n > _N_CAP:
        raise ValueError("partial sum longer than the term cap")
    s = complex(sigma, t)
    ev = zeta(s, target_abs_error)
    partial = complex(np.exp(-s * _logs(n)).sum())
    lhs = abs(ev.value - partial)
    err = ev.abs_error + _float_allowance(sigma, n)
    return bound_check(
        _CHK_PARTIAL,
        "|zeta(s) - partial sum to floor(t^2)| <= 5.134 t^{1/2}",
        lhs, STRIP_COEFF_12 * math.sqrt(t), err,
        notes=f"sigma={sigma:g} t={t:g} N={n}")


def strip_bound_check(sigma: float, t: float) -> BoundCheckRecord:
    ev = zeta(complex(sigma, t))
    return bound_check(
        _CHK_STRIP,
        "|zeta(sigma+it)| <= (4/3) t^{3/2} + 5.134 t^{1/2}",
        abs(ev.value), strip_zeta_bound(sigma, t), ev.abs_error,
        notes=f"sigma={sigma:g} t={t:g}")


def critical_line_grid_check(t_max: float = 1000.0, step: float = 0.01,
                             target_abs_error: float = 1e-9) -> BoundCheckRecord:
    """Scan t in (0, t_max] in the given step on the critical line.

    Emits one summary record whose lhs/rhs are taken at the grid point of
    smallest margin; err is the largest evaluation error seen.
    """
    count = int(round(t_max / step))
    worst_margin = math.inf
    worst = (0.0, 0.0, 0.0)               # t, |zeta|, bound
    max_err = 0.0
    fails = 0
    for i in range(1, count + 1):
        t = i * step
        ev = zeta(complex(0.5, t), target_abs_error)
        mod = abs(ev.value)
        bnd = critical_line_bound(t)
        margin = bnd - mod
        max_err = max(max_err, ev.abs_error)
        if margin <= 0:
            fails += 1
        if margin < worst_margin:
            worst_margin = margin
            worst = (t, mod, bnd)
    return bound_check(
        _CHK_GRID,
        "|zeta(1/2+it)| <= 3 t^{1/6} log(t+e) + 2.657 on the grid",
        worst[1], worst[2], max_err,
        notes=f"points={count} step={step:g} worst_t={worst[0]:.2f} "
              f"violations={fails}")
