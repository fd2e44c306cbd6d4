"""From RH data to mCH fields in the parametric (y, t) form and on the x-line."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .soliton_rh import (
    ReflectionlessData,
    RHEvaluation,
    SolitonParams,
    one_soliton_eval,
    solve_reflectionless,
    z_of,
)

PI3_TOL = 1e-12
SINGULAR_EPS = 1e-8

SMOOTH = "smooth"
FINITE = "finite-smoothness"
LOOP = "loop"
SINGULAR = "singular"
CLASSIFICATIONS = (SMOOTH, FINITE, LOOP, SINGULAR)

FLAG_SINGULAR = 1
FLAG_CREST = 2


class NonpositiveA1Error(ValueError):
    pass


class EtaPoleError(ValueError):
    pass


class NonMonotoneError(ValueError):
    def __init__(self, intervals: int, classification: str = ""):
        super().__init__(f"x(y) is not monotone: {intervals} intervals of monotonicity"
                         + (f" ({classification})" if classification else ""))
        self.intervals = intervals
        self.classification = classification


@dataclass
class ParametricSolution:
    t: float
    y_grid: np.ndarray
    x_of_y: np.ndarray
    u_hat: np.ndarray
    u_hat_x: np.ndarray
    m_hat: np.ndarray
    classification: str
    flags: np.ndarray = None
    params: Optional[SolitonParams] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.flags is None:
            self.flags = np.zeros(len(self.y_grid), dtype=int)

    def to_csv(self) -> str:
        lines = []
        if self.params is not None:
            lines.append(f"# theta={self.params.theta:.17g}")
            lines.append(f"# delta_hat={self.params.delta_hat:.17g}")
        lines.append(f"# t={self.t:.17g}")
        lines.append(f"# classification={self.classification}")
        for k, v in sorted(self.meta.items()):
            lines.append(f"# {k}={v}")
        lines.append("y,x,u,u_x,m,flags")
        for row in zip(self.y_grid, self.x_of_y, self.u_hat, self.u_hat_x, self.m_hat, self.flags):
            lines.append(",".join(_fmt(v) for v in row[:5]) + f",{int(row[5])}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    v = float(v)
    return "nan" if np.isnan(v) else format(v, ".17g")


def recover_fields(ev: RHEvaluation):
    """(u_hat, u_hat_x, m_hat, x_offset) from values of M-hat at mu = i and infinity."""
    a1, a2, a3, eta = (np.asarray(v, dtype=float) for v in (ev.a1, ev.a2, ev.a3, ev.eta))
    if np.any(a1 <= 0):
        raise NonpositiveA1Error("a1 <= 0: the change of variables x = y + 2 ln a1 is undefined")
    if np.any(np.abs(1 - eta) < 1e-14):
        raise EtaPoleError("eta = 1: m_hat has a pole")
    u = -a2 * a1 - a3 / a1
    ux = -a2 * a1 + a3 / a1
    m = 1.0 / (1.0 - eta)
    return u, ux, m, 2.0 * np.log(a1)


def R_of_z(z, theta: float):
    """x_y as a function of z for the one-soliton."""
    z = np.asarray(z, dtype=float)
    c2 = np.cos(theta) ** 2
    den = z * z + 2 * z + c2
    if np.any(den == 0):
        raise ZeroDivisionError("R_of_z: z^2 + 2z + cos^2(theta) = 0")
    return (z * z + 2 * z * np.cos(2 * theta) + c2) / den


def classify(params: SolitonParams) -> str:
    if params.delta_hat < 0:
        return SINGULAR
    if abs(params.theta - np.pi / 3) <= PI3_TOL:
        return FINITE
    return SMOOTH if params.theta < np.pi / 3 else LOOP


def closed_form_fields(params: SolitonParams, y, t):
    """(u, u_x, m, x) from the explicit one-soliton formulas in z."""
    theta = params.theta
    s, c = np.sin(theta), np.cos(theta)
    c2 = c * c
    z = z_of(params, y, t)
    den = z * z + 2 * z + c2
    u = 4 * np.tan(theta) ** 2 * z * (z * z + 2 * c2 * z + c2) / den ** 2
    ux = 4 * s ** 3 * z * (c2 - z * z) / (c2 * den ** 2)
    m = 1.0 / R_of_z(z, theta)
    x = np.asarray(y, dtype=float) + 2 * np.log((z + 1 + s) / (z + 1 - s))
    return u, ux, m, x


def _singular_mask(params: SolitonParams, z):
    s = np.sin(params.theta)
    a1 = (z + 1 + s) / (z + 1 - s)
    den = z * z + 2 * z + np.cos(params.theta) ** 2
    return (a1 <= 0) | (np.abs(den) < SINGULAR_EPS) | (np.abs(z + 1 - s) < SINGULAR_EPS)


def soliton_profile(params: SolitonParams, t: float, y_grid) -> ParametricSolution:
    """One-soliton sampled on ``y_grid`` through the RH evaluation route.

    Singular grid points (delta_hat < 0) are masked with NaN and flagged.
    """
    y = np.asarray(y_grid, dtype=float)
    z = z_of(params, y, t)
    cls = classify(params)
    flags = np.zeros(y.shape, dtype=int)
    bad = _singular_mask(params, z) if cls == SINGULAR else np.zeros(y.shape, bool)
    flags[bad] = FLAG_SINGULAR
    ok = ~bad
    u = np.full(y.shape, np.nan)
    ux, m, x = u.copy(), u.copy(), u.copy()
    ev = one_soliton_eval(params, y[ok], t, z=z[ok])
    crest = np.abs(1 - ev.eta) < 1e-14
    if np.any(crest):
        # m_hat is infinite exactly at the theta = pi/3 crest
        ev = RHEvaluation(ev.a1, ev.a2, ev.a3, np.where(crest, 0.0, ev.eta), ev.alpha_plus)
    u[ok], ux[ok], m[ok], off = recover_fields(ev)
    m[np.flatnonzero(ok)[crest]] = np.inf
    x[ok] = y[ok] + off
    if cls == FINITE:
        # grid point closest to the crest z = 1/2
        k = int(np.argmin(np.abs(z - 0.5)))
        flags[k] |= FLAG_CREST
    return ParametricSolution(t=float(t), y_grid=y, x_of_y=x, u_hat=u, u_hat_x=ux, m_hat=m,
                              classification=cls, flags=flags, params=params)


def profile_from_reflectionless(data: ReflectionlessData, t: float, y_grid, **kw) -> ParametricSolution:
    """Parametric solution from a general reflectionless RH problem, one solve per y."""
    y = np.asarray(y_grid, dtype=float)
    cols = {k: np.empty(y.shape) for k in ("a1", "a2", "a3", "eta", "alpha_plus")}
    for i, yi in enumerate(y):
        ev = solve_reflectionless(data, yi, t, **kw).evaluation()
        for k in cols:
            cols[k][i] = getattr(ev, k)
    ev = RHEvaluation(**cols)
    u, ux, m, off = recover_fields(ev)
    x = y + off
    n = monotone_intervals(x)
    cls = SMOOTH if n == 1 else LOOP
    return ParametricSolution(t=float(t), y_grid=y, x_of_y=x, u_hat=u, u_hat_x=ux, m_hat=m,
                              classification=cls, meta={"source": "reflectionless", "poles": len(data.poles)})


def monotone_intervals(x) -> int:
    """Number of maximal runs of strictly signed increments of x (zeros ignored)."""
    d = np.sign(np.diff(np.asarray(x, dtype=float)))
    d = d[d != 0]
    if d.size == 0:
        return 1
    return int(1 + np.count_nonzero(d[1:] != d[:-1]))


def invert_x(params: SolitonParams, t: float, x_targets, iters: int = 200):
    """y with x(y, t) = x for a regular monotone soliton, by bisection then Newton.

    For delta_hat > 0 the offset 2 ln a1 lies in (0, 2 ln((1+s)/(1-s))), which
    brackets the root.
    """
    xt = np.asarray(x_targets, dtype=float)
    s = np.sin(params.theta)
    lo = xt - 2 * np.log((1 + s) / (1 - s)) - 1e-12
    hi = xt + 1e-12

    def xmap(y):
        z = z_of(params, y, t)
        return y + 2 * np.log((z + 1 + s) / (z + 1 - s))

    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        right = xmap(mid) > xt
        hi = np.where(right, mid, hi)
        lo = np.where(right, lo, mid)
        if np.all(hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(mid))):
            break
    y = 0.5 * (lo + hi)
    # Newton polish where x_y is not small
    for _ in range(2):
        xy = R_of_z(z_of(params, y, t), params.theta)
        step = np.where(np.abs(xy) > 1e-3, (xmap(y) - xt) / np.where(xy == 0, 1, xy), 0.0)
        y = y - step
    return y


def resample_to_x(sol: ParametricSolution, x_grid, exact: bool = True):
    """u-tilde on ``x_grid`` from a monotone parametric solution."""
    if sol.classification in (LOOP, SINGULAR):
        n = monotone_intervals(sol.x_of_y[np.isfinite(sol.x_of_y)])
        if sol.classification == LOOP and sol.params is not None:
            n = soliton_monotone_intervals(sol.params)
        raise NonMonotoneError(n, sol.classification)
    n = monotone_intervals(sol.x_of_y)
    if n != 1:
        raise NonMonotoneError(n, sol.classification)
    x_grid = np.asarray(x_grid, dtype=float)
    if sol.params is not None and exact:
        y = invert_x(sol.params, sol.t, x_grid)
        u, _, _, _ = closed_form_fields(sol.params, y, sol.t)
        return u
    y_of_x = PchipInterpolator(sol.x_of_y, sol.y_grid, extrapolate=False)
    y = y_of_x(x_grid)
    return PchipInterpolator(sol.y_grid, sol.u_hat, extrapolate=False)(y)


def resample_fields(sol: ParametricSolution, x_grid):
    """(u, u_x, m) on ``x_grid`` for a regular one-soliton, via exact inversion."""
    if sol.params is None:
        raise ValueError("resample_fields needs soliton parameters")
    resample_to_x(sol, np.asarray(x_grid)[:1])  # classification guard
    y = invert_x(sol.params, sol.t, x_grid)
    u, ux, m, _ = closed_form_fields(sol.params, y, sol.t)
    return u, ux, m


def soliton_monotone_intervals(params: SolitonParams) -> int:
    """Intervals of monotonicity of x(., t) from the sign pattern of R on z > 0."""
    if params.delta_hat < 0:
        raise ValueError("singular solitons have no global x(y)")
    c2t = np.cos(2 * params.theta)
    disc = c2t * c2t - np.cos(params.theta) ** 2
    if disc <= 0:
        return 1
    roots = (-c2t - np.sqrt(disc), -c2t + np.sqrt(disc))
    if roots[0] > 0 and roots[1] > roots[0] * (1 + 1e-12):
        return 3
    return 1


def crest_curvature_scan(params: SolitonParams, t: float, zhat_values, rel_step: float = 1e-2):
    """Second differences of u-tilde(x) at points z = 1/2 + zhat around the crest.

    Returns (second_difference, leading_term) where leading_term = -(3/2) zhat^-2.
    The step is ``rel_step`` times the distance in x to the crest.
    """
    if classify(params) != FINITE:
        raise ValueError("crest scan applies to theta = pi/3 only")
    zh = np.asarray(zhat_values, dtype=float)
    s = np.sin(params.theta)
    speed = params.speed()

    def y_of_z(z):
        return np.log(z / (2 * params.delta_hat * s)) / s + speed * t

    def x_of_y(y):
        z = z_of(params, y, t)
        return y + 2 * np.log((z + 1 + s) / (z + 1 - s))

    xc = x_of_y(y_of_z(0.5))
    x0 = x_of_y(y_of_z(0.5 + zh))
    h = rel_step * np.abs(x0 - xc)
    vals = []
    for xx in (x0 - h, x0, x0 + h):
        u, _, _, _ = closed_form_fields(params, invert_x(params, t, xx), t)
        vals.append(u)
    d2 = (vals[0] - 2 * vals[1] + vals[2]) / h ** 2
    return d2, -1.5 / zh ** 2


def crest_uxx_exact(zhat):
    """u-tilde_xx at theta = pi/3 in terms of zhat = z - 1/2, from the chain rule."""
    zh = np.asarray(zhat, dtype=float)
    q = 2 * zh * zh + 6 * zh + 3
    z = zh + 0.5
    zy = np.sqrt(3) / 2 * z
    # u_x = u_y / x_y as a function of zhat, then differentiate in zhat
    num = -12 * np.sqrt(3) * zh * (zh + 1) * (2 * zh + 1)
    dnum = -12 * np.sqrt(3) * (6 * zh * zh + 6 * zh + 1)
    dq = 4 * zh + 6
    dux_dz = (dnum * q - 2 * num * dq) / q ** 3
    xy = 2 * zh * zh / q
    return dux_dz * zy / xy


def blowup_detected(params: SolitonParams, t: float = 0.0, zhat_values=(-3e-2, -1e-2, 1e-2, 3e-2),
                    rtol: float = 0.25) -> bool:
    """True when crest second differences track -(3/2) zhat^-2."""
    d2, lead = crest_curvature_scan(params, t, zhat_values)
    return bool(np.all(np.abs(d2 / lead - 1) < rtol))
