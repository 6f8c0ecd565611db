# Landmarks of the zeta evaluator, then the critical-line ceiling on a
# coarse sample of the verified grid.

import numpy as np

from cubegap.zeta import critical_line_bound, zeta, zeta_values_on_line

print("landmark values:")
for s, label in ((2.0, "pi^2/6"), (0.0, "-1/2"),
                 (complex(0.5, 14.134725), "first zero height")):
    ev = zeta(s, 1e-10)
    print(f"  zeta({s}) = {ev.value:.12g}   ({label}, "
          f"certified to {ev.abs_error:.1e})")

print()
print("critical line, |zeta(1/2+it)| against 3 t^(1/6) log(t+e) + 2.657:")
ts = np.arange(5.0, 1000.1, 95.0)
values, max_err = zeta_values_on_line(0.5, ts, 1e-9)
for t, v in zip(ts, values):
    bound = critical_line_bound(float(t))
    print(f"  t={t:7.1f}  |zeta|={abs(v):7.3f}  ceiling={bound:7.3f}  "
          f"margin={bound - abs(v):7.3f}")
print(f"largest evaluation error on this sample: {max_err:.2e}")
