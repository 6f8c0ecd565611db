# Critical-line zeros: inventory, counting ceilings, and the truncated
# reconstruction of the Chebyshev function they drive.

from cubegap.sieve import psi
from cubegap.zeros import (
    associate,
    count_bound_checks,
    explicit_formula,
    ordinates_upto,
    smooth_zero_count,
)

cache = ordinates_upto(502.0)
print(f"{cache.count} zeros below t={cache.t_max:g}, first five:")
for g in cache.ordinates[:5]:
    print(f"  {g:.9f}")

print()
print("count against T log T / 2 pi and the smooth estimate:")
for rec in count_bound_checks(cache, heights=(50.0, 100.0, 200.0, 500.0)):
    T = float(rec.notes.split("T=")[1].split()[0])
    n = cache.upto(T)
    print(f"  T={T:5.0f}  N(T)={n:4d}  ceiling={rec.rhs:8.1f}  "
          f"smooth={smooth_zero_count(T):7.2f}  {rec.verdict}")

print()
print("associate heights stay clear of every ordinate:")
for T in (14.0, 100.0, 500.0):
    a = associate(T, cache)
    print(f"  T={T:5.1f}  T_u={a.value:.6f}  "
          f"nearest zero at {a.min_distance:.4f}")

print()
x = 1000.5
for T in (50.0, 100.0, 200.0, 500.0):
    cut = associate(T, cache).value
    approx = explicit_formula(x, cut, cache)
    print(f"  psi({x}) via zeros below {T:3.0f}: {approx:10.4f}  "
          f"(exact {psi(int(x)):.4f})")
