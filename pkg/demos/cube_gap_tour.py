"""Primes between consecutive cubes, the claim the whole chain serves.

Scans every interval [x^3, (x+1)^3) up to x=1000 and a few far larger
sampled ones.  The counts grow like the interval length over log x;
none of them is ever zero.
"""

import time

from cubegap.sieve import cube_gap_scan

t0 = time.perf_counter()
rows, rec = cube_gap_scan(2, 1000)
dt = time.perf_counter() - t0

worst = min(rows, key=lambda r: r.count)
print(f"exhaustive x in [2, 1000]: {len(rows)} intervals in {dt:.1f}s")
print(f"  smallest count {worst.count} at x={worst.x} "
      f"(interval [{worst.lo}, {worst.hi}))")
print(f"  verdict: {rec.verdict}")

print()
print("sampled far points:")
sampled, _ = cube_gap_scan(sample=[2000, 5000, 10000])
for r in sampled:
    width = r.hi - r.lo
    print(f"  x={r.x:6d}  width={width:,}  primes={r.count:,}  "
          f"first={r.min_prime:,}")
