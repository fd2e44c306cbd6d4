"""Lax-pair coefficient matrices and a finite-difference zero-curvature check.

All constructors broadcast over array-valued field and spectral inputs and
return arrays of shape ``(..., 2, 2)``.  Matrices are plain complex numpy
arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral_plane import SpectralDomainError, lambda_of_mu

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
_J = np.array([[0, 1], [-1, 0]], dtype=complex)
_P_PLUS = np.array([[1, -1], [1, -1]], dtype=complex)   # pole block at mu = 1
_P_MINUS = np.array([[1, 1], [-1, -1]], dtype=complex)  # pole block at mu = -1


@dataclass(frozen=True)
class FieldSample:
    """Field values at one (x, t): u = u~, u_x = u~_x, m = u~ - u~_xx + 1."""

    u: float
    u_x: float
    m: float

    @property
    def omega(self):
        return self.u ** 2 - self.u_x ** 2 + 2 * self.u


def _reject(mu, points, name):
    arr = np.atleast_1d(np.asarray(mu, dtype=complex))
    for p in points:
        if np.any(arr == p):
            raise SpectralDomainError(f"{name}: mu={p} is excluded")


def _mat(a, b, c, d):
    a, b, c, d = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, d)))
    out = np.empty(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = b
    out[..., 1, 0] = c
    out[..., 1, 1] = d
    return out


def _scale(coef, mat):
    coef = np.asarray(coef, dtype=complex)
    return coef[..., None, None] * mat


def coeff_U(f: FieldSample, lam):
    lm = np.asarray(lam) * np.asarray(f.m)
    zero = np.zeros_like(lm, dtype=complex)
    return 0.5 * _mat(zero - 1, lm, -lm, zero + 1)


def coeff_V(f: FieldSample, lam):
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise SpectralDomainError("coeff_V: lambda=0 is excluded")
    u, ux, m = (np.asarray(v) for v in (f.u, f.u_x, f.m))
    om = u * u - ux * ux + 2 * u
    d = lam ** -2 + om / 2
    return _mat(
        d,
        -(u - ux + 1) / lam - lam * om * m / 2,
        (u + ux + 1) / lam + lam * om * m / 2,
        -d,
    )


def coeff_U_hat(m, mu):
    _reject(mu, (0, 1, -1), "coeff_U_hat")
    mu = np.asarray(mu, dtype=complex)
    dm = np.asarray(m) - 1.0
    off = 1j * (mu * mu + 1) * dm / (2 * (mu * mu - 1))
    diag = -1j * mu * dm / (mu * mu - 1)
    return _scale(off, _J) + _scale(diag, SIGMA3)


def coeff_U_hat0(m, mu):
    _reject(mu, (0, 1, -1), "coeff_U_hat0")
    mu = np.asarray(mu, dtype=complex)
    m = np.asarray(m)
    dm = m - 1.0
    kap = 1j * (mu * mu - 1) / (4 * mu)
    off = 1j * (mu * mu + 1) * dm / (2 * (mu * mu - 1))
    diag = -(1j * mu * dm / (mu * mu - 1) + kap * m - kap)
    return _scale(off, _J) + _scale(diag, SIGMA3)


def coeff_tilde_U(f_coef, mu):
    _reject(mu, (1, -1), "coeff_tilde_U")
    mu = np.asarray(mu, dtype=complex)
    f = np.asarray(f_coef)
    return (
        _scale(1j * f / (mu - 1), _P_PLUS)
        + _scale(1j * f / (mu + 1), _P_MINUS)
        + _scale(1j * f + 0 * mu, -_J)
    )


def coeff_tilde_V(q, g1, g2, mu):
    _reject(mu, (1, -1, 1j, -1j), "coeff_tilde_V")
    mu = np.asarray(mu, dtype=complex)
    q, g1, g2 = (np.asarray(v) for v in (q, g1, g2))
    zero = np.zeros(np.broadcast(q, g1, g2, mu).shape, dtype=complex)
    return (
        _scale(1j * q / (mu - 1), _P_PLUS)
        + _scale(1j * q / (mu + 1), _P_MINUS)
        + _mat(zero, g1 / (mu - 1j), g2 / (mu - 1j), zero)
        + _mat(zero, g2 / (mu + 1j), g1 / (mu + 1j), zero)
    )


def field_coefficients(u, u_x, m):
    """(f, q, g1, g2) of the (y, t) Lax pair from sampled fields."""
    u, u_x, m = (np.asarray(v, dtype=float) for v in (u, u_x, m))
    return -(m - 1) / (2 * m), u, -u - u_x, u - u_x


def _commutator(a, b):
    return a @ b - b @ a


def zero_curvature_residual(fields, mu_grid, dx: float, dt: float) -> float:
    """max ||U_t - V_x + [U, V]|| over the grid and ``mu_grid``.

    ``fields`` is a pair of field profiles (objects with ``x_grid``, ``u``,
    ``u_x``, ``m``) at times t and t + dt.  The residual is centred at
    t + dt/2; x-derivatives are second-order central with one-sided
    second-order ends.
    """
    f0, f1 = fields
    x0 = np.asarray(f0.x_grid)
    x1 = np.asarray(f1.x_grid)
    if x0.shape != x1.shape or not np.allclose(x0, x1, rtol=0, atol=1e-14):
        raise ValueError("zero_curvature_residual: profiles are on different grids")
    if not np.allclose(np.diff(x0), dx, rtol=1e-8, atol=0):
        raise ValueError("zero_curvature_residual: grid spacing does not match dx")
    worst = 0.0
    for mu in np.atleast_1d(mu_grid):
        lam = complex(lambda_of_mu(mu))
        s0 = FieldSample(np.asarray(f0.u), np.asarray(f0.u_x), np.asarray(f0.m))
        s1 = FieldSample(np.asarray(f1.u), np.asarray(f1.u_x), np.asarray(f1.m))
        U0, U1 = coeff_U(s0, lam), coeff_U(s1, lam)
        V0, V1 = coeff_V(s0, lam), coeff_V(s1, lam)
        U_t = (U1 - U0) / dt
        U_mid = 0.5 * (U0 + U1)
        V_mid = 0.5 * (V0 + V1)
        V_x = np.gradient(V_mid, dx, axis=0, edge_order=2)
        res = U_t - V_x + _commutator(U_mid, V_mid)
        worst = max(worst, float(np.max(np.abs(res))))
    return worst
