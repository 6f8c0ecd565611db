"""Segmented prime sieve, Chebyshev sums, and the cube interval census.

Marking runs over odd slots only, block by block, inside a compiled
kernel.  Large ranges are streamed; nothing here materializes a bitmap
wider than MATERIALIZE_CAP entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .records import bound_check, register_check

__all__ = [
    "SieveSegment",
    "IntervalCensus",
    "CubeGapRow",
    "primes_upto",
    "sieve_range",
    "count_primes",
    "pi_count",
    "theta",
    "psi",
    "psi_theta_identity_check",
    "cube_gap_scan",
    "short_interval_check",
    "is_prime",
]

SEGMENT_ENTRIES = 1 << 22         # odd slots marked per kernel call
RANGE_TOP = 10 ** 13
MATERIALIZE_CAP = 1 << 28


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as int64, by a plain sieve.  Meant for n <= ~1e7."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.flatnonzero(flags).astype(np.int64)


_base: np.ndarray = primes_upto(1 << 16)


def _base_primes(limit: int) -> np.ndarray:
    """Odd base primes up to limit, cached and grown on demand."""
    global _base
    if _base[-1] < limit:
        n = 1 << max(17, int(limit).bit_length())
        _base = primes_upto(n)
    cut = np.searchsorted(_base, limit, side="right")
    return _base[1:cut]                  # skip 2, marking is odds-only


@njit(cache=True)
def _mark_odds(flags: np.ndarray, lo: int, primes: np.ndarray) -> None:
    # flags[i] stands for lo + 2*i with lo odd; primes are odd, ascending
    size = flags.size
    hi = lo + 2 * size
    for k in range(primes.size):
        p = primes[k]
        if p * p >= hi:
            break
        m = p * p
        if m < lo:
            m = ((lo + p - 1) // p) * p
            if m % 2 == 0:
                m += p
        i = (m - lo) // 2
        while i < size:
            flags[i] = False
            i += p


@njit(cache=True)
def _neumaier(values: np.ndarray) -> float:
    total = 0.0
    comp = 0.0
    for i in range(values.size):
        v = values[i]
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _odd_blocks(lo: int, hi: int):
    """Yield (start, flags) with start odd, flags over odds of [start, block_hi)."""
    if hi > RANGE_TOP:
        raise ValueError("range exceeds the 1e13 top")
    primes = _base_primes(math.isqrt(hi - 1) + 1)
    start = lo if lo % 2 == 1 else lo + 1
    while start < hi:
        size = min(SEGMENT_ENTRIES, (hi - start + 1) // 2)
        flags = np.ones(size, dtype=np.bool_)
        if start == 1:
            flags[0] = False
        _mark_odds(flags, start, primes)
        yield start, flags
        start += 2 * size


@dataclass
class SieveSegment:
    """Primality bitmap over [lo, hi) at full resolution."""

    lo: int
    hi: int
    bitmap: np.ndarray

    def count(self) -> int:
        return int(np.count_nonzero(self.bitmap))

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.bitmap).astype(np.int64) + self.lo

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise ValueError("n outside the segment")
        return bool(self.bitmap[n - self.lo])


def sieve_range(lo: int, hi: int) -> SieveSegment:
    """Materialized sieve of [lo, hi); width capped at MATERIALIZE_CAP."""
    if not 1 <= lo < hi <= RANGE_TOP:
        raise ValueError("need 1 <= lo < hi <= 1e13")
    if hi - lo > MATERIALIZE_CAP:
        raise ValueError("width above materialization cap, stream instead")
    bitmap = np.zeros(hi - lo, dtype=np.bool_)
    if lo <= 2 < hi:
        bitmap[2 - lo] = True
    for start, flags in _odd_blocks(lo, hi):
        idx = np.flatnonzero(flags)
        bitmap[start - lo + 2 * idx] = True
    return SieveSegment(lo, hi, bitmap)


def count_primes(lo: int, hi: int) -> tuple[int, int, int]:
    """(count, smallest, largest) over [lo, hi), streaming.  0 sentinels."""
    if not 1 <= lo < hi <= RANGE_TOP:
        raise ValueError("need 1 <= lo < hi <= 1e13")
    count, first, last = 0, 0, 0
    if lo <= 2 < hi:
        count, first, last = 1, 2, 2
    for start, flags in _odd_blocks(lo, hi):
        c = int(np.count_nonzero(flags))
        if c:
            count += c
            lo_idx = int(np.argmax(flags))
            hi_idx = flags.size - 1 - int(np.argmax(flags[::-1]))
            if first == 0:
                first = start + 2 * lo_idx
            last = start + 2 * hi_idx
    return count, first, last


def pi_count(x: int) -> int:
    if x < 2:
        return 0
    return count_primes(2, x + 1)[0]


def theta(x: int) -> float:
    """Chebyshev theta, sum of log p over p <= x, compensated."""
    if x < 2:
        return 0.0
    parts = [0.693147180559945309417]     # log 2
    for start, flags in _odd_blocks(3, x + 1):
        p = start + 2 * np.flatnonzero(flags).astype(np.int64)
        if p.size:
            parts.append(_neumaier(np.log(p.astype(np.float64))))
    return math.fsum(parts)


def psi(x: int) -> float:
    """Chebyshev psi by exact prime power enumeration, x <= 1e9."""
    if x > 10 ** 9:
        raise ValueError("psi capped at 1e9")
    if x < 2:
        return 0.0
    extra = []
    for p in primes_upto(math.isqrt(x)):
        p = int(p)
        q = p * p
        while q <= x:
            extra.append(math.log(p))
            q *= p
    return math.fsum([theta(x)] + extra)


_CHK_PSI_THETA = register_check(
    "sieve.psi_theta_identity",
    "psi(x) - theta(x) equals the sum of theta(x^(1/k)) for k >= 2")


def psi_theta_identity_check(x: int, tol: float = 1e-6):
    """Cross-check the prime power part of psi against root-wise theta."""
    lhs = psi(x) - theta(x)
    rhs_terms = []
    k = 2
    while True:
        r = _iroot(x, k)
        if r < 2:
            break
        rhs_terms.append(theta(r))
        k += 1
    rhs = math.fsum(rhs_terms)
    return bound_check(
        _CHK_PSI_THETA,
        "|(psi - theta)(x) - sum_k theta(x^(1/k))| <= tol",
        abs(lhs - rhs), tol, 1e-9, notes=f"x={x}")


def _iroot(n: int, k: int) -> int:
    """Largest r with r^k <= n."""
    if n < 1:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def is_prime(n: int) -> bool:
    """Trial division, for cross-checks and tiny windows."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ----------------------------------------------------------------------
# census operations

@dataclass
class CubeGapRow:
    x: int
    lo: int                # x^3
    hi: int                # (x+1)^3
    count: int
    min_prime: int
    max_prime: int


_CHK_CUBE = register_check(
    "sieve.cube_gap_scan",
    "every interval [x^3, (x+1)^3) in the scan contains a prime")


def cube_gap_scan(x_lo: int = 2, x_hi: int = 1000,
                  sample: list[int] | None = None):
    """Census of primes in [x^3, (x+1)^3).

    Exhaustive over [x_lo, x_hi] or, when sample is given, exactly those
    x values.  Returns (rows, record); the record reports the smallest
    count seen.
    """
    xs = list(sample) if sample is not None else list(range(x_lo, x_hi + 1))
    if not xs:
        raise ValueError("empty scan")
    rows = []
    for x in xs:
        if x < 1 or (x + 1) ** 3 > RANGE_TOP:
            raise ValueError(f"x={x} outside the supported range")
        count, first, last = count_primes(x ** 3, (x + 1) ** 3)
        rows.append(CubeGapRow(x, x ** 3, (x + 1) ** 3, count, first, last))
    worst = min(rows, key=lambda r: r.count)
    mode = "sampled" if sample is not None else "exhaustive"
    rec = bound_check(
        _CHK_CUBE,
        "min over scanned x of primes in [x^3, (x+1)^3) >= 1",
        1.0, float(worst.count), 0.0,
        notes=f"mode={mode} intervals={len(rows)} worst_x={worst.x} "
              f"worst_count={worst.count}")
    return rows, rec


@dataclass
class IntervalCensus:
    """Prime and Chebyshev increments over (x, x+h]."""

    x: int
    h: int
    prime_count: int
    theta_increment: float
    psi_increment: float

    def consistent(self) -> bool:
        return self.psi_increment >= self.theta_increment >= 0.0


def short_interval_check(x: int, h: int | None = None) -> IntervalCensus:
    """Census over (x, x+h], h defaulting to ceil(3 x^(2/3))."""
    if h is None:
        h = math.ceil(3.0 * x ** (2.0 / 3.0))
    if h <= 0 or x < 2 or x + h > RANGE_TOP:
        raise ValueError("bad interval")
    parts = []
    count = 0
    for start, flags in _odd_blocks(x + 1, x + h + 1):
        p = start + 2 * np.flatnonzero(flags).astype(np.int64)
        if p.size:
            count += p.size
            parts.append(_neumaier(np.log(p.astype(np.float64))))
    if x < 2 <= x + h:
        count += 1
        parts.append(math.log(2.0))
    th = math.fsum(parts)
    powers = []
    k = 2
    while 2 ** k <= x + h:
        r_hi = _iroot(x + h, k)
        r_lo = _iroot(x, k)
        for r in range(r_lo + 1, r_hi + 1):
            if is_prime(r):
                powers.append(math.log(r))
        k += 1
    return IntervalCensus(x, h, int(count), th, math.fsum(parts + powers))
