"""The uniformizing parameter mu and its symmetry orbits.

lambda and k are rational in mu, so the whole spectral problem lives on one
sheet.  Poles of the RH problem come in orbits under mu -> -conj(mu) and
mu -> -1/mu.
"""
import numpy as np

from mchrh import k_of_mu, lambda_of_mu, phase_p_hat, symmetry_orbit

for mu in (1j, 1.0, 2.0):
    print(f"mu={mu}: lambda={complex(lambda_of_mu(mu)):.4f}, k={complex(k_of_mu(mu)):.4f}")

# A unit-circle point has a two-point orbit: the pole pair of a one-soliton.
theta = np.pi / 4
print("orbit of e^{i pi/4}:", np.round(symmetry_orbit(np.exp(1j * theta)), 6))
print("orbit of i:", symmetry_orbit(1j))
print("orbit of 2 e^{i pi/8} i:", np.round(symmetry_orbit(2j * np.exp(1j * np.pi / 8)), 6))

# On the circle the phase is real, so the residue weights are real exponentials.
y, t = 1.5, 0.3
val = complex(phase_p_hat(y, t, np.exp(1j * theta)))
print(f"p_hat on the circle: {val.real:.12f} (imag {val.imag:.1e})")
print(f"sin(theta)/2 (-y + 2t/cos^2): {np.sin(theta) / 2 * (-y + 2 * t / np.cos(theta) ** 2):.12f}")
