"""Zero curvature of the x-frame Lax pair on an exact one-soliton.

U_t - V_x + [U, V] vanishes on solutions; finite differences at
dx = dt = 1e-3 leave a second-order residual.  Scaling u by a few percent
breaks it.
"""
import numpy as np

from mchrh.lax import zero_curvature_residual
from mchrh.soliton_rh import SolitonParams
from mchrh.verification import soliton_x_profile

params = SolitonParams(np.pi / 6, 1.0)
dx = dt = 1e-3
x = np.arange(-20, 20, dx)
f0 = soliton_x_profile(params, 0.0, x)
f1 = soliton_x_profile(params, dt, x)
mus = [0.5 + 0.5j, 2.0, 1.5j, 3 + 1j]
print(f"soliton residual: {zero_curvature_residual((f0, f1), mus, dx, dt):.2e}")


class Perturbed:
    x_grid, u, u_x, m = f0.x_grid, 1.05 * f0.u, f0.u_x, f0.m


print(f"perturbed residual: {zero_curvature_residual((Perturbed, f1), mus, dx, dt):.2e}")
