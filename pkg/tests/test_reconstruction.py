import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from mchrh import reconstruction as rc
from mchrh.soliton_rh import ReflectionlessData, RHEvaluation, SolitonParams, one_soliton_eval, z_of

thetas = st.floats(0.05, np.pi / 2 - 0.05)
PI3 = SolitonParams(np.pi / 3, 1.0)


def fsmooth_u(z):
    return 48 * z * (4 * z * z + 2 * z + 1) / (4 * z * z + 8 * z + 1) ** 2


def test_trivial_evaluation():
    u, ux, m, off = rc.recover_fields(RHEvaluation.trivial())
    assert (u, ux, m, off) == (0, 0, 1, 0)


def test_recover_rejects_bad_a1_and_eta():
    ev = RHEvaluation.trivial()
    ev.a1 = np.float64(-1.0)
    with pytest.raises(rc.NonpositiveA1Error):
        rc.recover_fields(ev)
    ev = RHEvaluation.trivial()
    ev.eta = np.float64(1.0)
    with pytest.raises(rc.EtaPoleError):
        rc.recover_fields(ev)


def test_pi_over_3_crest():
    ev = one_soliton_eval(PI3, 0, 0, z=0.5)
    u = -ev.a2 * ev.a1 - ev.a3 / ev.a1
    ux = -ev.a2 * ev.a1 + ev.a3 / ev.a1
    assert abs(u - 2.0) < 1e-12
    assert abs(ux) < 1e-12
    assert abs(fsmooth_u(0.5) - 2.0) < 1e-15
    # m_hat = 1/(1 - eta) has its pole exactly at the crest
    with pytest.raises(rc.EtaPoleError):
        rc.recover_fields(ev)


def test_crest_on_grid_point():
    s = np.sin(PI3.theta)
    y0 = np.log(0.5 / (2 * s)) / s
    sol = rc.soliton_profile(PI3, 0.0, np.array([y0 - 1, y0, y0 + 1]))
    assert abs(sol.u_hat[1] - 2) < 1e-12
    assert np.isinf(sol.m_hat[1]) and sol.flags[1] & rc.FLAG_CREST


def test_pi_over_3_fsmooth_pointwise():
    y = np.linspace(-40, 40, 2001)
    sol = rc.soliton_profile(PI3, 0.0, y)
    assert np.abs(sol.u_hat - fsmooth_u(z_of(PI3, y, 0.0))).max() < 1e-12


@settings(max_examples=30)
@given(thetas, st.floats(0.2, 4.0), st.floats(-1, 1))
def test_two_routes_agree(theta, delta, t):
    p = SolitonParams(theta, delta)
    y = np.linspace(-30, 30, 301)
    sol = rc.soliton_profile(p, t, y)
    u, ux, m, x = rc.closed_form_fields(p, y, t)
    for a, b in ((sol.u_hat, u), (sol.u_hat_x, ux), (sol.m_hat, m), (sol.x_of_y, x)):
        assert np.abs(a - b).max() < 1e-10 * max(1, np.abs(b).max())


@given(thetas)
def test_u_x_is_u_y_over_x_y(theta):
    p = SolitonParams(theta, 1.0)
    assume_y = np.linspace(-5, 5, 11)
    h = 1e-5
    up = rc.closed_form_fields(p, assume_y + h, 0)
    um = rc.closed_form_fields(p, assume_y - h, 0)
    uy = (up[0] - um[0]) / (2 * h)
    xy = (up[3] - um[3]) / (2 * h)
    ux = rc.closed_form_fields(p, assume_y, 0)[1]
    ok = np.abs(xy) > 1e-2
    assert np.allclose(ux[ok], uy[ok] / xy[ok], rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 4, np.pi / 3, 0.4 * np.pi])
def test_decay_and_offsets(theta):
    p = SolitonParams(theta, 1.0)
    s = np.sin(theta)
    y = np.array([-45 / s, 45 / s])
    u, _, _, x = rc.closed_form_fields(p, y, 0.0)
    assert np.all(np.abs(u) < 1e-8)
    assert abs((x[0] - y[0]) - 2 * np.log((1 + s) / (1 - s))) < 1e-10
    assert abs(x[1] - y[1]) < 1e-10


def test_R_of_z_values():
    for th in (0.3, np.pi / 3, 1.2):
        assert rc.R_of_z(0.0, th) == 1
        assert abs(rc.R_of_z(1e9, th) - 1) < 1e-8
    assert abs(rc.R_of_z(0.5, np.pi / 3)) < 1e-15
    # double zero: R and dR/dz vanish
    h = 1e-6
    assert abs(rc.R_of_z(0.5 + h, np.pi / 3) - rc.R_of_z(0.5 - h, np.pi / 3)) < 1e-11


def test_R_sign_pattern():
    z = np.geomspace(1e-6, 1e6, 20001)
    assert np.all(rc.R_of_z(z, np.pi / 3 - 0.2) > 0)
    assert np.all(rc.R_of_z(z, np.pi / 3) >= -1e-15)
    sign = np.sign(rc.R_of_z(z, np.pi / 3 + 0.2))
    # + - + : three intervals of monotonicity of x(y)
    assert np.count_nonzero(np.diff(sign)) == 2 and sign[0] > 0 and sign[-1] > 0


def test_classify():
    assert rc.classify(SolitonParams(np.pi / 6, 1)) == rc.SMOOTH
    assert rc.classify(SolitonParams(np.pi / 4, 1)) == rc.SMOOTH
    assert rc.classify(PI3) == rc.FINITE
    assert rc.classify(SolitonParams(0.4 * np.pi, 1)) == rc.LOOP
    for th in (0.2, np.pi / 3, 0.4 * np.pi):
        assert rc.classify(SolitonParams(th, -1)) == rc.SINGULAR


def test_singular_profile_masked():
    p = SolitonParams(0.4 * np.pi, -1.0)
    s = np.sin(p.theta)
    # put a grid point on the pole z = 1 - s
    y0 = np.log((1 - s) / (2 * abs(p.delta_hat) * s)) / s
    y = np.sort(np.append(np.linspace(-20, 20, 401), y0))
    with np.errstate(all="ignore"):
        sol = rc.soliton_profile(p, 0.0, y)
    flagged = (sol.flags & rc.FLAG_SINGULAR) > 0
    assert flagged.any()
    assert np.all(np.isnan(sol.u_hat[flagged]))
    assert "nan" in sol.to_csv()


def test_crest_flag_and_csv():
    sol = rc.soliton_profile(PI3, 0.0, np.linspace(-5, 5, 101))
    k = np.nonzero(sol.flags & rc.FLAG_CREST)[0]
    assert len(k) == 1
    text = sol.to_csv()
    assert text.startswith("# theta=")
    assert "# classification=finite-smoothness" in text
    assert "y,x,u,u_x,m,flags" in text


def test_invert_x_round_trip():
    p = SolitonParams(np.pi / 4, 1.0)
    y = np.linspace(-20, 20, 401)
    x = rc.closed_form_fields(p, y, 0.3)[3]
    assert np.abs(rc.invert_x(p, 0.3, x) - y).max() < 1e-10


def test_resample_preserves_max():
    p = SolitonParams(np.pi / 5, 1.0)
    sol = rc.soliton_profile(p, 0.0, np.linspace(-30, 30, 2001))
    ym = minimize_scalar(lambda y: -rc.closed_form_fields(p, y, 0.0)[0], bracket=(-2, 0, 2), tol=1e-12)
    xm = minimize_scalar(lambda x: -rc.resample_to_x(sol, [x])[0], bracket=(-2, 0, 2), tol=1e-12)
    assert abs(ym.fun - xm.fun) < 1e-8


def test_resample_exact_vs_pchip():
    p = SolitonParams(np.pi / 6, 1.0)
    sol = rc.soliton_profile(p, 0.0, np.linspace(-30, 30, 4001))
    xg = np.linspace(-20, 20, 201)
    assert np.abs(rc.resample_to_x(sol, xg) - rc.resample_to_x(sol, xg, exact=False)).max() < 1e-5


def test_resample_refuses_loop():
    sol = rc.soliton_profile(SolitonParams(0.4 * np.pi, 1.0), 0.0, np.linspace(-40, 40, 2001))
    assert rc.monotone_intervals(sol.x_of_y) == 3
    with pytest.raises(rc.NonMonotoneError) as exc:
        rc.resample_to_x(sol, np.linspace(-5, 5, 11))
    assert exc.value.intervals == 3
    assert rc.soliton_monotone_intervals(SolitonParams(0.4 * np.pi, 1.0)) == 3
    assert rc.soliton_monotone_intervals(PI3) == 1


def test_resample_refuses_singular():
    p = SolitonParams(0.5, -1.0)
    with np.errstate(all="ignore"):
        sol = rc.soliton_profile(p, 0.0, np.linspace(-10, 10, 101))
    with pytest.raises(rc.NonMonotoneError):
        rc.resample_to_x(sol, [0.0])


def test_crest_blowup():
    zh = np.array([-3e-2, -1e-2, 1e-2, 3e-2])
    exact = rc.crest_uxx_exact(zh)
    assert np.all(np.abs(exact * zh ** 2 / -1.5 - 1) < 0.15)
    small = np.array([-1e-5, 1e-5])
    assert np.all(np.abs(rc.crest_uxx_exact(small) * small ** 2 / -1.5 - 1) < 1e-4)
    d2, lead = rc.crest_curvature_scan(PI3, 0.0, zh)
    assert np.allclose(d2, exact, rtol=1e-2)
    assert rc.blowup_detected(PI3)
    with pytest.raises(ValueError):
        rc.blowup_detected(SolitonParams(np.pi / 4, 1.0))


def test_profile_from_reflectionless_one_pair():
    p = SolitonParams(np.pi / 4, 1.0)
    y = np.linspace(-20, 20, 81)
    sol = rc.profile_from_reflectionless(ReflectionlessData.one_soliton(p), 0.5, y)
    ref = rc.soliton_profile(p, 0.5, y)
    assert sol.classification == rc.SMOOTH
    assert np.abs(sol.u_hat - ref.u_hat).max() < 1e-10
    assert np.abs(sol.x_of_y - ref.x_of_y).max() < 1e-10
