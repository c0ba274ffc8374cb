"""Parallel transport on the round sphere seen through its plane chart.

The sphere-stereographic gallery member carries the Christoffel coefficients
of the metric 4 delta_ij / (1 + |p|^2)^2.  Transporting a vector once around
a chart circle rotates it by the area of the spherical cap the circle bounds:
a direct Gauss-Bonnet check of the integrator.
"""

import numpy as np

from pathlift import gallery, holonomy, parallel_transport, path_circle, path_segment

sph = gallery("sphere-stereographic")

print("transport along a segment (linear in the fiber seed)")
path = path_segment([0.0, 0.0], [1.0, 0.0])
for v0 in ([1.0, 0.0], [0.0, 1.0], [2.0, -1.0]):
    out = parallel_transport(sph, path, v0)
    print(f"  {v0} -> {np.round(out.vec, 6).tolist()}")

print()
print("holonomy around chart circles vs the enclosed spherical-cap area")
print(f"{'radius':>7}  {'measured rotation':>18}  {'cap area (mod 2pi)':>19}")
for r in (0.25, 0.5, 1.0, 2.0):
    loop = path_circle([0.0, 0.0], r)
    v0 = np.array([1.0, 0.0])
    out = holonomy(sph, loop, v0).vec
    angle = np.arctan2(v0[0] * out[1] - v0[1] * out[0], v0 @ out)
    cap = 4 * np.pi * r**2 / (1 + r**2)
    cap_mod = (cap + np.pi) % (2 * np.pi) - np.pi
    print(f"{r:7.2f}  {angle:18.9f}  {cap_mod:19.9f}")

print()
print("radius 1 encloses a hemisphere (area 2 pi): the holonomy is trivial,")
print("which is why the measured rotation vanishes there.")
