"""Uniformized spectral parameter: lambda(mu), k(mu), phase functions, symmetry orbits.

Every function here is pure and accepts scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORBIT_TOL = 1e-12


class SpectralDomainError(ValueError):
    """Raised when mu hits a point where a formula is singular."""


def _check_excluded(mu, excluded, name):
    arr = np.atleast_1d(np.asarray(mu, dtype=complex))
    for bad in excluded:
        if np.any(np.abs(arr - bad) == 0.0):
            raise SpectralDomainError(f"{name}: mu={bad} is excluded")


def lambda_of_mu(mu):
    _check_excluded(mu, (0,), "lambda_of_mu")
    mu = np.asarray(mu, dtype=complex)
    return -(mu + 1.0 / mu) / 2.0


def k_of_mu(mu):
    _check_excluded(mu, (0,), "k_of_mu")
    mu = np.asarray(mu, dtype=complex)
    return (mu - 1.0 / mu) / 4.0


def _kappa(mu):
    # i(mu^2-1)/(4mu): the x-coefficient of the phase
    return 1j * (mu * mu - 1.0) / (4.0 * mu)


def _time_factor(mu):
    return 8.0 * mu * mu / (mu * mu + 1.0) ** 2


def phase_p_hat(y, t, mu):
    """Phase in the (y, t) scale: -i(mu^2-1)/(4mu) * (-y + 8 mu^2 t / (mu^2+1)^2)."""
    _check_excluded(mu, (0, 1j, -1j), "phase_p_hat")
    mu = np.asarray(mu, dtype=complex)
    return -_kappa(mu) * (-np.asarray(y) + _time_factor(mu) * np.asarray(t))


def phase_p(x, t, mu, I):
    """Phase in the (x, t) scale; ``I`` is the tail integral of (m - 1) from x to +inf."""
    _check_excluded(mu, (0, 1j, -1j), "phase_p")
    mu = np.asarray(mu, dtype=complex)
    return -_kappa(mu) * (np.asarray(I) - np.asarray(x) + _time_factor(mu) * np.asarray(t))


def phase_p0(x, t, mu):
    _check_excluded(mu, (0, 1j, -1j), "phase_p0")
    mu = np.asarray(mu, dtype=complex)
    x = np.asarray(x)
    t = np.asarray(t)
    return _kappa(mu) * x - 2j * (mu * mu - 1.0) * mu * t / (mu * mu + 1.0) ** 2


def reflect(mu):
    """mu -> -conj(mu)."""
    return -np.conj(mu)


def invert(mu):
    """mu -> -1/mu."""
    return -1.0 / mu


def symmetry_orbit(mu, tol: float = ORBIT_TOL) -> list[complex]:
    """Closure of ``{mu}`` under mu -> -conj(mu) and mu -> -1/mu.

    Points closer than ``tol`` are merged, so unit-circle points give two
    entries and ``i`` gives one.
    """
    mu = complex(mu)
    if mu == 0:
        raise SpectralDomainError("symmetry_orbit: mu=0 is excluded")
    candidates = [mu, reflect(mu), invert(mu), 1.0 / np.conj(mu)]
    orbit: list[complex] = []
    for c in candidates:
        c = complex(c)
        if all(abs(c - o) > tol for o in orbit):
            orbit.append(c)
    return orbit


@dataclass(frozen=True)
class SpectralPoint:
    mu: complex

    def __post_init__(self):
        if self.mu == 0:
            raise SpectralDomainError("SpectralPoint: mu=0 is excluded")

    @property
    def lam(self) -> complex:
        return complex(lambda_of_mu(self.mu))

    @property
    def k(self) -> complex:
        return complex(k_of_mu(self.mu))

    def orbit(self, tol: float = ORBIT_TOL) -> list[complex]:
        return symmetry_orbit(self.mu, tol)
