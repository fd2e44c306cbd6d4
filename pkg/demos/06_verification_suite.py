"""Residual suite: PDE in (y, t), constitutive law, compatibility relations, RH invariants.

Each check returns a ResidualReport; a deliberately wrong source shows the
checks are not vacuous.
"""
import numpy as np

from mchrh import verification as vf
from mchrh.soliton_rh import ReflectionlessData, SolitonParams, one_soliton_matrix

p = SolitonParams(np.pi / 4, 1.0)
y = np.linspace(-40, 40, 2001)
for rep in vf.soliton_suite(p, y, 0.5):
    print(rep.line())

bad = vf.scaled_source(vf.soliton_source(p), u_scale=1.01)
print(vf.pde_residual_y(bad, y, 0.5).line(), "<- u scaled by 1.01")

M = one_soliton_matrix(p, 0.0, 0.0)
print(vf.residue_check(M, ReflectionlessData.one_soliton(p), 0.0, 0.0).line())
print(vf.singularity_check(M, M.alpha).line())

x = np.arange(-30, 30, 1e-3)
print(vf.soliton_pde_x(SolitonParams(np.pi / 5, 1.0), 0.0, x, 1e-3).line())
print(vf.soliton_pde_x(SolitonParams(np.pi / 3, 1.0), 0.0, x, 1e-3).line(), "<- crest window excluded")
