"""Residual checks for the identities satisfied by RH-generated mCH solutions.

A (y, t)-source is any callable ``source(y, t) -> (u_hat, u_hat_x, m_hat)``.
An M-source is any callable ``M(mu) -> array (..., 2, 2)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lax import SIGMA1, SIGMA2, IDENTITY
from .reconstruction import FINITE, LOOP, SINGULAR, closed_form_fields, invert_x, recover_fields
from .soliton_rh import (
    ReflectionlessData,
    RHEvaluation,
    SolitonParams,
    one_soliton_eval,
    solve_reflectionless,
)
from .spectral_plane import phase_p_hat


@dataclass
class ResidualReport:
    name: str
    max_residual: float
    tolerance: float
    grid_meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "grid_meta": self.grid_meta,
        }, sort_keys=True)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.max_residual:.3e} (tol {self.tolerance:.1e})"


def write_jsonl(reports, path=None) -> str:
    text = "".join(r.to_json() + "\n" for r in reports)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# --------------------------------------------------------------------------
# sources

def soliton_source(params: SolitonParams):
    """(y, t) -> (u, u_x, m) through the RH evaluation of the one-soliton."""
    def source(y, t):
        u, ux, m, _ = recover_fields(one_soliton_eval(params, y, t))
        return u, ux, m
    return source


def background_source():
    def source(y, t):
        z = np.zeros(np.shape(y))
        return z, z, z + 1.0
    return source


def reflectionless_source(data: ReflectionlessData, **kw):
    def source(y, t):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        cols = {k: np.empty(y.shape) for k in ("a1", "a2", "a3", "eta", "alpha_plus")}
        for i, yi in enumerate(y):
            ev = solve_reflectionless(data, float(yi), t, **kw).evaluation()
            for k in cols:
                cols[k][i] = getattr(ev, k)
        u, ux, m, _ = recover_fields(RHEvaluation(**cols))
        return u, ux, m
    return source


def scaled_source(source, u_scale=1.0, m_shift=0.0):
    """A deliberately wrong source for detector sanity checks.

    u_hat is scaled together with its derivative u_hat_x; m_hat is shifted.
    """
    def wrapped(y, t):
        u, ux, m = source(y, t)
        return u * u_scale, ux * u_scale, m + m_shift
    return wrapped


# --------------------------------------------------------------------------
# (y, t) residuals

def _refined(compute, h, tol):
    """compute(h) -> residual array; Richardson-combine with h/2 when needed."""
    r = compute(h)
    if np.max(np.abs(r)) <= tol / 2:
        return r, {"h": h, "richardson": False}
    r2 = compute(h / 2)
    return (4 * r2 - r) / 3, {"h": h, "richardson": True}


def _meta(y, t, extra):
    return {"y_min": float(np.min(y)), "y_max": float(np.max(y)), "n": int(np.size(y)), "t": float(t), **extra}


def pde_residual_y(source, y_grid, t, h: float = 1e-4, tol: float = 1e-7) -> ResidualReport:
    """max |d/dt (1/m_hat) - 2 u_hat_x| at fixed y."""
    y = np.asarray(y_grid, dtype=float)
    _, ux, _ = source(y, t)

    def compute(hh):
        _, _, mp = source(y, t + hh)
        _, _, mm = source(y, t - hh)
        return (1 / mp - 1 / mm) / (2 * hh) - 2 * ux

    r, meta = _refined(compute, h, tol)
    return ResidualReport("pde_y", float(np.nanmax(np.abs(r))), tol, _meta(y, t, meta))


def constitutive_residual(source, y_grid, t, h: float = 1e-4, tol: float = 1e-6) -> ResidualReport:
    """max |m_hat - u_hat + (d/dy u_hat_x) m_hat - 1|."""
    y = np.asarray(y_grid, dtype=float)
    u, _, m = source(y, t)

    def compute(hh):
        _, uxp, _ = source(y + hh, t)
        _, uxm, _ = source(y - hh, t)
        return m - u + (uxp - uxm) / (2 * hh) * m - 1

    r, meta = _refined(compute, h, tol)
    return ResidualReport("constitutive", float(np.nanmax(np.abs(r))), tol, _meta(y, t, meta))


def _betas(u, ux, m):
    return -(m - 1) / (2 * m), u, -u - ux, u - ux


def rel_residuals(source, y_grid, t, h: float = 1e-4, tol: float = 1e-6):
    """The four compatibility relations between beta_1, beta_2, gamma_1, gamma_2."""
    y = np.asarray(y_grid, dtype=float)
    b1, b2, g1, g2 = _betas(*source(y, t))

    def rel_a(hh):
        b1p = _betas(*source(y, t + hh))[0]
        b1m = _betas(*source(y, t - hh))[0]
        return (b1p - b1m) / (2 * hh) + (g1 + g2) / 2

    def d_y(fn, hh):
        return (fn(_betas(*source(y + hh, t))) - fn(_betas(*source(y - hh, t)))) / (2 * hh)

    def rel_c(hh):
        return d_y(lambda B: B[2] - B[3], hh) - (1 + 2 * b1) * (g1 + g2)

    def rel_d(hh):
        return d_y(lambda B: B[2] + B[3], hh) + 4 * b1 - (1 + 2 * b1) * (g1 - g2)

    out = []
    for name, fn in (("rel_a", rel_a), ("rel_c", rel_c), ("rel_d", rel_d)):
        r, meta = _refined(fn, h, tol)
        out.append(ResidualReport(name, float(np.nanmax(np.abs(r))), tol, _meta(y, t, meta)))
    rb = b2 - (g2 - g1) / 2
    out.insert(1, ResidualReport("rel_b", float(np.nanmax(np.abs(rb))), tol, _meta(y, t, {})))
    return out


# --------------------------------------------------------------------------
# RH invariants

def rh_invariant_suite(M_source, mu_samples, tol: float = 1e-9):
    mu = np.asarray(mu_samples, dtype=complex)
    M = M_source(mu)
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    s1 = SIGMA1 @ np.conj(M_source(np.conj(mu))) @ SIGMA1 - M
    s2 = SIGMA2 @ M_source(-mu) @ SIGMA2 - M
    s3 = SIGMA1 @ M_source(1 / mu) @ SIGMA1 - M
    Mi = M_source(np.array([1j]))[0]
    M0 = M_source(np.array([0.0 + 0j]))[0]
    meta = {"n_mu": int(mu.size)}
    return [
        ResidualReport("det", float(np.max(np.abs(det - 1))), tol, meta),
        ResidualReport("sym_conj", float(np.max(np.abs(s1))), tol, meta),
        ResidualReport("sym_neg", float(np.max(np.abs(s2))), tol, meta),
        ResidualReport("sym_inv", float(np.max(np.abs(s3))), tol, meta),
        ResidualReport("offdiag_M_i", float(max(abs(Mi[0, 1]), abs(Mi[1, 0]))), tol, {}),
        ResidualReport("M0_minus_I", float(np.max(np.abs(M0 - IDENTITY))), tol, {}),
    ]


def residue_check(M_source, data: ReflectionlessData, y: float, t: float,
                  radius: float = 1e-3, npts: int = 32, tol: float = 1e-9) -> ResidualReport:
    """Res_{mu_j} M^(1) - M^(2)(mu_j) / kappa_hat_j over all poles, by contour averaging."""
    w = np.exp(2j * np.pi * np.arange(npts) / npts)
    worst = 0.0
    for mu_j, rho in data.poles:
        vals = M_source(mu_j + radius * w)
        res = np.mean(vals[:, :, 0] * (radius * w)[:, None], axis=0)
        kap = rho * np.exp(-2 * phase_p_hat(y, t, mu_j))
        # column 2 is analytic at mu_j: its circle mean is its value there
        rhs = np.mean(vals[:, :, 1], axis=0) / kap
        worst = max(worst, float(np.max(np.abs(res - rhs))))
    return ResidualReport("residue", worst, tol, {"y": y, "t": t, "poles": len(data.poles)})


def singularity_check(M_source, alpha_plus: float, eps=(1e-4, 5e-5, 2.5e-5), tol: float = 1e-9) -> ResidualReport:
    """(mu - 1) M(mu) -> (i alpha/2) [[-1, 1], [-1, 1]] along mu = 1 + i eps."""
    eps = np.asarray(eps, dtype=float)
    vals = (1j * eps)[:, None, None] * M_source(1 + 1j * eps)
    V = np.vander(eps, len(eps), increasing=True)
    lim = np.linalg.solve(V, vals.reshape(len(eps), 4)).reshape(len(eps), 2, 2)[0]
    target = 0.5j * alpha_plus * np.array([[-1, 1], [-1, 1]])
    return ResidualReport("singularity_mu1", float(np.max(np.abs(lim - target))), tol, {"eps": list(eps)})


# --------------------------------------------------------------------------
# x-frame residual

def pde_residual_x(profile_pair, dx: float, dt: float, tol: float = 1e-4, exclude=None,
                   classification: str = "smooth") -> ResidualReport:
    """max |m_t + (omega m)_x| for two profiles at t and t + dt on a common grid.

    Centred at t + dt/2; ``exclude`` is an optional boolean mask of grid points
    to skip (e.g. a window around a non-smooth crest).
    """
    if classification in (LOOP, SINGULAR):
        raise ValueError(f"{classification} solutions have no single-valued x-frame profile")
    f0, f1 = profile_pair
    x = np.asarray(f0.x_grid)
    if not np.array_equal(x, np.asarray(f1.x_grid)):
        raise ValueError("profiles are on different grids")
    if not np.allclose(np.diff(x), dx, rtol=1e-8, atol=0):
        raise ValueError("grid spacing does not match dx")

    def flux(f):
        u, ux, m = (np.asarray(v) for v in (f.u, f.u_x, f.m))
        return (u * u - ux * ux + 2 * u) * m

    m_t = (np.asarray(f1.m) - np.asarray(f0.m)) / dt
    F = 0.5 * (flux(f0) + flux(f1))
    F_x = np.gradient(F, dx, edge_order=2)
    r = np.abs(m_t + F_x)
    if exclude is not None:
        r = np.where(exclude, 0.0, r)
    meta = {"dx": dx, "dt": dt, "n": int(x.size), "excluded": int(0 if exclude is None else np.sum(exclude))}
    return ResidualReport("pde_x", float(np.max(r)), tol, meta)


def crest_position(params: SolitonParams, t: float) -> float:
    """x of the crest z = 1/2 of the theta = pi/3 soliton."""
    s = np.sin(params.theta)
    y = np.log(0.5 / (2 * params.delta_hat * s)) / s + params.speed() * t
    return float(y + 2 * np.log((1.5 + s) / (1.5 - s)))


@dataclass(frozen=True)
class _XProfile:
    x_grid: np.ndarray
    u: np.ndarray
    u_x: np.ndarray
    m: np.ndarray


def soliton_x_profile(params: SolitonParams, t: float, x_grid):
    """Exact one-soliton fields on an x-grid (inverse change of variables)."""
    x_grid = np.asarray(x_grid, dtype=float)
    y = invert_x(params, t, x_grid)
    u, ux, m, _ = closed_form_fields(params, y, t)
    return _XProfile(x_grid, u, ux, m)


def soliton_pde_x(params: SolitonParams, t: float, x_grid, dt: float, tol: float = 1e-4,
                  crest_window: float = 1.5) -> ResidualReport:
    from .reconstruction import classify

    cls = classify(params)
    x_grid = np.asarray(x_grid, dtype=float)
    dx = float(x_grid[1] - x_grid[0])
    pair = (soliton_x_profile(params, t, x_grid), soliton_x_profile(params, t + dt, x_grid))
    exclude = None
    if cls == FINITE:
        xc = crest_position(params, t + dt / 2)
        exclude = np.abs(x_grid - xc) <= crest_window
    rep = pde_residual_x(pair, dx, dt, tol, exclude=exclude, classification=cls)
    rep.grid_meta.update(theta=params.theta, t=t)
    return rep


def soliton_suite(params: SolitonParams, y_grid, t: float, h: float = 1e-4):
    """Every (y, t) residual for a one-soliton at time t."""
    src = soliton_source(params)
    reps = [pde_residual_y(src, y_grid, t, h), constitutive_residual(src, y_grid, t, h)]
    rels = rel_residuals(src, y_grid, t, h)
    if params.delta_hat < 0:
        rels = [r for r in rels if r.name not in ("rel_c", "rel_d")]
    return reps + rels
