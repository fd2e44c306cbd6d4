import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mchrh.lax import (
    SIGMA1,
    SIGMA2,
    SIGMA3,
    FieldSample,
    coeff_tilde_U,
    coeff_tilde_V,
    coeff_U,
    coeff_U_hat,
    coeff_U_hat0,
    coeff_V,
    field_coefficients,
    zero_curvature_residual,
)
from mchrh.soliton_rh import SolitonParams
from mchrh.spectral_plane import SpectralDomainError, lambda_of_mu
from mchrh.verification import soliton_x_profile

cplx = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)).filter(
    lambda z: min(abs(z), abs(z - 1), abs(z + 1), abs(z - 1j), abs(z + 1j)) > 1e-2)
mvals = st.floats(0.1, 3.0)


def test_field_sample_omega():
    f = FieldSample(0.3, -0.2, 1.1)
    assert f.omega == 0.3 ** 2 - 0.2 ** 2 + 2 * 0.3


def test_coeff_U_values():
    assert np.allclose(coeff_U(FieldSample(0, 0, 1), 2), 0.5 * np.array([[-1, 2], [-2, 1]]), atol=0)
    assert np.allclose(coeff_U(FieldSample(0, 0, 0), 2), 0.5 * np.array([[-1, 0], [0, 1]]), atol=0)


def test_coeff_V_background():
    lam = 1.7 - 0.4j
    V = coeff_V(FieldSample(0, 0, 1), lam)
    assert np.allclose(V, [[lam ** -2, -1 / lam], [1 / lam, -lam ** -2]], rtol=0, atol=1e-15)


def test_coeff_V_hand_entry():
    lam, m = 0.8 + 0.3j, 1.4
    V = coeff_V(FieldSample(0, 1, m), lam)
    assert abs(V[0, 1] - lam * m / 2) < 1e-15


def test_coeff_V_rejects_zero_lambda():
    with pytest.raises(SpectralDomainError):
        coeff_V(FieldSample(0, 0, 1), 0)


@given(st.floats(-1, 1), st.floats(-1, 1), mvals, cplx)
def test_traceless(u, ux, m, mu):
    lam = lambda_of_mu(mu)
    f = FieldSample(u, ux, m)
    fc, q, g1, g2 = field_coefficients(u, ux, m)
    for M in (coeff_U(f, lam), coeff_V(f, lam), coeff_U_hat(m, mu), coeff_U_hat0(m, mu),
              coeff_tilde_U(fc, mu), coeff_tilde_V(q, g1, g2, mu)):
        assert abs(M[0, 0] + M[1, 1]) < 1e-14 * max(1, np.abs(M).max())


def test_U_hat_background_and_i():
    assert np.all(coeff_U_hat(1.0, 0.3 + 0.4j) == 0)
    m = 1.6
    # at mu = i the J-part vanishes and the diagonal is -(m-1)/2 sigma_3
    assert np.allclose(coeff_U_hat(m, 1j), -(m - 1) / 2 * SIGMA3, rtol=0, atol=1e-15)


@given(mvals, cplx)
def test_U_hat_symmetries(m, mu):
    U = coeff_U_hat(m, mu)
    scale = max(1, np.abs(U).max())
    assert np.abs(SIGMA1 @ np.conj(coeff_U_hat(m, np.conj(mu))) @ SIGMA1 - U).max() < 1e-12 * scale
    assert np.abs(SIGMA2 @ coeff_U_hat(m, -mu) @ SIGMA2 - U).max() < 1e-12 * scale
    assert np.abs(SIGMA1 @ coeff_U_hat(m, 1 / mu) @ SIGMA1 - U).max() < 1e-12 * scale


def test_U_hat0_values():
    for m in (0.4, 1.0, 2.5):
        assert np.abs(coeff_U_hat0(m, 1j)).max() < 1e-15
        assert np.abs(coeff_U_hat0(m, -1j)).max() < 1e-15
    assert np.all(coeff_U_hat0(1.0, 0.2 + 2j) == 0)


@given(mvals, cplx)
def test_U_hat0_minus_U_hat(m, mu):
    diff = coeff_U_hat0(m, mu) - coeff_U_hat(m, mu)
    expect = -1j * (mu * mu - 1) * (m - 1) / (4 * mu) * SIGMA3
    assert np.abs(diff - expect).max() < 1e-12 * max(1, np.abs(expect).max())


def test_tilde_U_values():
    assert np.all(coeff_tilde_U(0.0, 0.5 + 0.5j) == 0)
    # brute-force complex arithmetic at mu = i, f = 1 gives sigma_3
    mu, f = 1j, 1.0
    brute = (1j * f / (mu - 1) * np.array([[1, -1], [1, -1]])
             + 1j * f / (mu + 1) * np.array([[1, 1], [-1, -1]])
             + 1j * f * np.array([[0, -1], [1, 0]]))
    assert np.allclose(coeff_tilde_U(f, mu), brute, rtol=0, atol=1e-15)
    assert np.allclose(brute, SIGMA3, rtol=0, atol=1e-15)


@given(st.floats(-2, 2), cplx)
def test_tilde_U_conjugation_symmetry(f, mu):
    U = coeff_tilde_U(f, mu)
    assert np.abs(SIGMA1 @ np.conj(coeff_tilde_U(f, np.conj(mu))) @ SIGMA1 - U).max() < 1e-12 * max(1, np.abs(U).max())


def test_tilde_V_values():
    assert np.all(coeff_tilde_V(0, 0, 0, 0.3 + 2j) == 0)
    f, q, g1, g2 = field_coefficients(0.1, 0.0, 1.0)
    assert (q, g1, g2) == (0.1, -0.1, 0.1)
    assert f == 0


def test_tilde_V_residue_at_i():
    q, g1, g2 = 0.3, -0.7, 0.2
    r = 1e-4
    w = np.exp(2j * np.pi * np.arange(64) / 64)
    vals = coeff_tilde_V(q, g1, g2, 1j + r * w)
    res = np.mean(vals[:, 0, 1] * r * w)
    assert abs(res - g1) < 1e-12


def _profile(x, u, ux, m):
    class P:
        pass
    p = P()
    p.x_grid, p.u, p.u_x, p.m = x, u, ux, m
    return p


MUS = [0.5 + 0.5j, 2.0, 1.5j, 3 + 1j, -0.7 + 0.2j]


def test_zero_curvature_background():
    x = np.arange(-5, 5, 1e-3)
    z = np.zeros_like(x)
    bg = _profile(x, z, z, z + 1)
    assert zero_curvature_residual((bg, bg), MUS, 1e-3, 1e-3) <= 1e-10


@pytest.fixture(scope="module")
def soliton_pair():
    # theta = pi/6: the one-soliton is well resolved at dx = dt = 1e-3
    params = SolitonParams(np.pi / 6, 1.0)
    x = np.arange(-20, 20, 1e-3)
    return soliton_x_profile(params, 0.0, x), soliton_x_profile(params, 1e-3, x)


def test_zero_curvature_soliton(soliton_pair):
    assert zero_curvature_residual(soliton_pair, MUS, 1e-3, 1e-3) <= 1e-5


def test_zero_curvature_detects_non_solution(soliton_pair):
    f0, f1 = soliton_pair
    rng = np.random.default_rng(1)
    bumped = _profile(f0.x_grid, f0.u * (1 + 0.1 * rng.random()), f0.u_x, f0.m)
    assert zero_curvature_residual((bumped, f1), MUS, 1e-3, 1e-3) > 1e-3


def test_zero_curvature_grid_mismatch(soliton_pair):
    f0, f1 = soliton_pair
    other = _profile(f1.x_grid + 1e-4, f1.u, f1.u_x, f1.m)
    with pytest.raises(ValueError):
        zero_curvature_residual((f0, other), MUS, 1e-3, 1e-3)
