"""Closed-form one-solitons in the parametric (y, t) form and the classification.

theta < pi/3 gives a smooth wave, theta = pi/3 a crest where u_xx blows up,
theta > pi/3 a loop (x(y) non-monotone) and delta_hat < 0 a singular wave.
"""
import numpy as np

from mchrh import reconstruction as rc
from mchrh.soliton_rh import SolitonParams

y = np.linspace(-40, 40, 2001)
for theta, delta in [(np.pi / 6, 1), (np.pi / 3, 1), (0.4 * np.pi, 1), (0.4 * np.pi, -1)]:
    p = SolitonParams(theta, delta)
    with np.errstate(all="ignore"):
        sol = rc.soliton_profile(p, 0.0, y)
    print(f"theta={theta / np.pi:.3f}pi delta={delta:+d}: {sol.classification:18s} "
          f"max u={np.nanmax(sol.u_hat):.6f} monotone intervals={rc.monotone_intervals(sol.x_of_y[np.isfinite(sol.x_of_y)])}")

# Crest of the pi/3 wave: u = 2 at z = 1/2 and u_xx ~ -(3/2) zhat^-2.
p = SolitonParams(np.pi / 3, 1.0)
zh = np.array([-1e-2, 1e-2])
d2, lead = rc.crest_curvature_scan(p, 0.0, zh)
print("crest second differences:", np.round(d2, 1), "leading term:", np.round(lead, 1))

# Resampling to a uniform x-grid for a smooth wave.
p = SolitonParams(np.pi / 5, 1.0)
sol = rc.soliton_profile(p, 0.0, y)
xg = np.linspace(-10, 10, 9)
print("u on x-grid:", np.round(rc.resample_to_x(sol, xg), 6))
