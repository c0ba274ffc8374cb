"""Minimum principal angles along fiber rays, and the boundedness verdicts.

theta_m(v) measures how far the horizontal space at (p, v) stays from the
vertical.  Connections whose theta_m is bounded away from zero along every
fiber ray admit lifts of every path; the ones whose theta_m decays to zero
lose lifts to finite-time blow-up.  The scan samples theta_m on a geometric
radius grid, fits the decay exponent, and issues a verdict.
"""

import numpy as np

from pathlift import ConnectionSpec, NORMALIZED, fiber_scan, gallery, principal_angles

members = [
    ConnectionSpec("flat", {"dimension": 1}),
    ConnectionSpec("scalar-linear", {"lambda": 1.0}),
    ConnectionSpec("power-growth", {"alpha": 0.5}),
    ConnectionSpec("power-growth", {"alpha": 1.0}),
    ConnectionSpec("power-growth", {"alpha": 1.5}),
    ConnectionSpec("power-growth", {"alpha": 2.0}),
    ConnectionSpec("fig1", {}),
]

print("theta_m(r) under the normalized fiber weight, with fitted decay beta")
radii = [1.0, 16.0, 256.0, 4096.0, 65536.0]
header = "  ".join(f"r=2^{int(np.log2(r)):<2d}" for r in radii)
print(f"{'member':<22} {header}   beta    verdict")
for spec in members:
    conn = gallery(spec)
    report = fiber_scan(conn, np.zeros(conn.dimension))
    row = "  ".join(
        f"{report.theta_min[0, list(report.radii).index(r)]:.4f}" for r in radii
    )
    label = spec.name + (f"({list(spec.params.values())[0]})" if spec.params else "")
    print(f"{label:<22} {row}   {report.beta[0]:+.3f}  {report.verdict}")

print()
print("single-point spectra: the fig1 slope at v = 1 is arccot(sqrt(2))")
fig1 = gallery("fig1")
theta = principal_angles(fig1, [0.0], [1.0], NORMALIZED).theta_min
print(f"  theta_m = {theta:.9f}   arccot(sqrt 2) = {np.arctan2(1, np.sqrt(2)):.9f}")
