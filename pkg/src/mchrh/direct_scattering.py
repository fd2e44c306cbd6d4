"""Jost solutions at t = 0 and the spectral data a, b, r, zeros, norming constants, c.

Two integrators are used.  ``jost_solve`` is a reference adaptive Runge-Kutta
solve of the matrix ODE at one mu.  The spectral sweeps use a fourth-order
Magnus scheme on the profile grid, batched over mu and applied column by
column; its propagators have unit determinant so unitarity and matching-point
independence hold to rounding.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .lax import coeff_U_hat, SIGMA3
from .spectral_plane import SpectralDomainError, phase_p

DECAY_THRESHOLD = 1e-6
EXCLUSION = 0.05
CHUNK = 64
_GAUSS = (0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6)


class NonPositiveMError(ValueError):
    pass


class InsufficientDecayError(ValueError):
    pass


class NonConvergenceError(RuntimeError):
    pass


class CountMismatchError(RuntimeError):
    pass


class NonProportionalityError(RuntimeError):
    pass


class AmbiguousRegimeError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# profiles

@dataclass(frozen=True, eq=False)
class FieldProfile:
    """u-tilde, u-tilde_x and m-tilde on a grid; arrays are read-only."""

    x_grid: np.ndarray
    u: np.ndarray
    u_x: np.ndarray
    m: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        arrs = []
        for name in ("x_grid", "u", "u_x", "m"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
            arrs.append(a)
        n = len(self.x_grid)
        if n < 3 or any(len(a) != n for a in arrs):
            raise ValueError("profile arrays must have equal length >= 3")
        if np.any(np.diff(self.x_grid) <= 0):
            raise ValueError("x_grid must be strictly increasing")
        if np.any(self.m <= 0):
            raise NonPositiveMError("m-tilde must be strictly positive")

    @classmethod
    def background(cls, x_grid):
        z = np.zeros(len(x_grid))
        return cls(x_grid, z, z, z + 1.0, 0.0)

    def spline(self) -> CubicSpline:
        cache = self.__dict__.get("_spline")
        if cache is None:
            cache = CubicSpline(self.x_grid, self.m - 1.0)
            self.__dict__["_spline"] = cache
        return cache

    def m_at(self, x):
        return 1.0 + self.spline()(x)

    def tail_integral(self, x):
        """I(x) = int_x^{x_max} (m - 1), from the spline antiderivative."""
        anti = self.__dict__.get("_anti")
        if anti is None:
            anti = self.spline().antiderivative()
            self.__dict__["_anti"] = anti
        return anti(self.x_grid[-1]) - anti(x)

    def y_of_x(self):
        return self.x_grid - self.tail_integral(self.x_grid)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# tail_bound={self.tail_bound:.17g}\n")
        buf.write("x,u,u_x,m\n")
        for row in zip(self.x_grid, self.u, self.u_x, self.m):
            buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
        return buf.getvalue()


def _uniform_step(x):
    h = np.diff(x)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("numerical differentiation needs a uniform grid")
    return float(h[0])


def fd_derivatives(x, u):
    """First and second derivatives, fourth-order central, one-sided at the ends."""
    h = _uniform_step(x)
    u = np.asarray(u, dtype=float)
    n = len(u)
    if n < 7:
        raise ValueError("finite differences need at least 7 points")
    d1 = np.empty(n)
    d2 = np.empty(n)
    d1[2:-2] = (u[:-4] - 8 * u[1:-3] + 8 * u[3:-1] - u[4:]) / (12 * h)
    d2[2:-2] = (-u[:-4] + 16 * u[1:-3] - 30 * u[2:-2] + 16 * u[3:-1] - u[4:]) / (12 * h * h)
    # one-sided fourth-order stencils at the two points nearest each end
    c1 = {0: [-25, 48, -36, 16, -3], 1: [-3, -10, 18, -6, 1]}
    c2 = {0: [45, -154, 214, -156, 61, -10], 1: [10, -15, -4, 14, -6, 1]}
    for i in (0, 1):
        d1[i] = np.dot(c1[i], u[:5]) / (12 * h)
        d1[n - 1 - i] = -np.dot(c1[i], u[::-1][:5]) / (12 * h)
        d2[i] = np.dot(c2[i], u[:6]) / (12 * h * h)
        d2[n - 1 - i] = np.dot(c2[i], u[::-1][:6]) / (12 * h * h)
    return d1, d2


def spectral_derivatives(x, u):
    """First and second derivatives by FFT, treating the decaying profile as periodic."""
    h = _uniform_step(x)
    u = np.asarray(u, dtype=float)
    n = len(u)
    k = 2 * np.pi * np.fft.rfftfreq(n, d=h)
    U = np.fft.rfft(u)
    ik = 1j * k
    if n % 2 == 0:
        ik[-1] = 0.0  # Nyquist mode of an odd derivative
    d1 = np.fft.irfft(ik * U, n)
    d2 = np.fft.irfft(-(k * k) * U, n)
    return d1, d2


def profile_from_u(x_grid, u_values, differentiation: str = "finite-difference",
                   u_x=None, u_xx=None, decay_threshold: float = DECAY_THRESHOLD) -> FieldProfile:
    """FieldProfile with m = u - u_xx + 1.

    ``differentiation`` is "analytic-supplied" (pass ``u_x`` and ``u_xx``),
    "spectral" or "finite-difference".
    """
    x = np.asarray(x_grid, dtype=float)
    u = np.asarray(u_values, dtype=float)
    if len(x) != len(u):
        raise ValueError("x_grid and u_values differ in length")
    tail = max(abs(u[0]), abs(u[-1]))
    if tail > decay_threshold:
        raise InsufficientDecayError(f"|u| = {tail:.3e} at the grid ends exceeds {decay_threshold:.1e}")
    if differentiation == "analytic-supplied":
        if u_x is None or u_xx is None:
            raise ValueError("analytic-supplied differentiation needs u_x and u_xx")
        d1, d2 = np.asarray(u_x, dtype=float), np.asarray(u_xx, dtype=float)
    elif differentiation == "spectral":
        d1, d2 = spectral_derivatives(x, u)
    elif differentiation == "finite-difference":
        d1, d2 = fd_derivatives(x, u)
    else:
        raise ValueError(f"unknown differentiation scheme {differentiation!r}")
    m = u - d2 + 1.0
    if np.any(m <= 0):
        raise NonPositiveMError(f"m-tilde <= 0 at {np.count_nonzero(m <= 0)} grid points")
    nt = max(2, len(x) // 50)
    tail_bound = float(max(np.max(np.abs(m[:nt] - 1)), np.max(np.abs(m[-nt:] - 1))))
    return FieldProfile(x, u, d1 if u_x is None else np.asarray(u_x, dtype=float), m, tail_bound)


def read_profile_csv(text: str, differentiation: str = "finite-difference") -> FieldProfile:
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(rows)
    cols: dict = {k.strip(): [] for k in reader.fieldnames}
    for r in reader:
        for k, v in r.items():
            cols[k.strip()].append(float(v))
    if "x" not in cols or "u" not in cols:
        raise ValueError("profile CSV needs columns x and u")
    x, u = np.array(cols["x"]), np.array(cols["u"])
    if "m" in cols:
        ux = np.array(cols["u_x"]) if "u_x" in cols else fd_derivatives(x, u)[0]
        m = np.array(cols["m"])
        tail = float(max(abs(m[0] - 1), abs(m[-1] - 1)))
        return FieldProfile(x, u, ux, m, tail)
    prof = profile_from_u(x, u, differentiation)
    if "u_x" in cols:
        prof = FieldProfile(x, u, np.array(cols["u_x"]), prof.m, prof.tail_bound)
    return prof


# --------------------------------------------------------------------------
# reference Jost solver

@dataclass
class JostSolution:
    value: np.ndarray
    side: str
    mu: complex = 0j
    x: float = 0.0


def _px(mu, m):
    return 1j * (mu * mu - 1) / (4 * mu) * m


def _check_mu(mu):
    if mu == 0 or mu == 1 or mu == -1:
        raise SpectralDomainError(f"mu={mu} is excluded from the Jost equations")


def jost_solve(profile: FieldProfile, mu: complex, side: str, x_eval: float,
               rtol: float = 1e-10, atol: float = 1e-12) -> JostSolution:
    """Phi-tilde_{+-}(x_eval, 0, mu) by adaptive Runge-Kutta (DOP853).

    For real mu the full matrix is returned.  Off the real line only the
    column analytic in that half-plane is integrated; the other is NaN.
    """
    mu = complex(mu)
    _check_mu(mu)
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    x0, x1 = profile.x_grid[0], profile.x_grid[-1]
    if not x0 <= x_eval <= x1:
        raise ValueError("x_eval outside the profile grid")
    start = x1 if side == "plus" else x0
    if mu.imag == 0:
        cols = (0, 1)
    elif (mu.imag > 0) == (side == "plus"):
        cols = (1,)
    else:
        cols = (0,)

    def rhs(x, y):
        m = profile.m_at(x)
        Phi = y.reshape(2, 2)
        U = coeff_U_hat(m, mu)
        px = _px(mu, m)
        d = U @ Phi - px * (SIGMA3 @ Phi - Phi @ SIGMA3)
        return d.ravel()

    value = np.full((2, 2), np.nan, dtype=complex)
    if x_eval == start:
        value[:, list(cols)] = np.eye(2, dtype=complex)[:, list(cols)]
        return JostSolution(value, side, mu, x_eval)
    # integrate each column separately: the commutator form acts column-wise
    for c in cols:
        def rhs_col(x, v, c=c):
            m = profile.m_at(x)
            px = _px(mu, m)
            U = coeff_U_hat(m, mu)
            shift = 2 * px if c == 0 else -2 * px
            out = U @ v
            if c == 0:
                out[1] += shift * v[1]
            else:
                out[0] += shift * v[0]
            return out

        v0 = np.eye(2, dtype=complex)[:, c]
        sol = solve_ivp(rhs_col, (start, x_eval), v0, method="DOP853", rtol=rtol, atol=atol,
                        max_step=np.inf)
        if not sol.success:
            raise NonConvergenceError(f"jost_solve failed at mu={mu}: {sol.message}")
        value[:, c] = sol.y[:, -1]
    return JostSolution(value, side, mu, float(x_eval))


# --------------------------------------------------------------------------
# batched Magnus sweeps

def _node_values(profile: FieldProfile):
    cache = profile.__dict__.get("_nodes")
    if cache is None:
        x = profile.x_grid
        h = np.diff(x)
        sp = profile.spline()
        m1 = 1.0 + sp(x[:-1] + _GAUSS[0] * h)
        m2 = 1.0 + sp(x[:-1] + _GAUSS[1] * h)
        cache = (h, m1, m2)
        profile.__dict__["_nodes"] = cache
    return cache


def _propagators(profile: FieldProfile, mu, s: int, inverse: bool = False):
    """Per-interval propagators, shape (n-1, len(mu), 2, 2), for column sign ``s``.

    s = +1 is the first-column equation v' = (U_hat + 2 p_x E22) v,
    s = -1 the second-column one v' = (U_hat - 2 p_x E11) v.
    """
    h, m1, m2 = _node_values(profile)
    mu = np.asarray(mu, dtype=complex)[None, :]
    alpha = (0.5 * h * (m1 + m2 - 2))[:, None]
    beta = (0.5 * h * (m1 + m2))[:, None]
    gam = (np.sqrt(3) / 12 * h * h * (m2 - m1))[:, None]
    d = mu * mu - 1
    cJ = 1j * (mu * mu + 1) / (2 * d)
    cS = -1j * mu / d
    ik = 1j * d / (4 * mu)
    A = alpha * cS - beta * ik
    B = alpha * cJ + 2 * ik * cJ * gam
    C = -alpha * cJ + 2 * ik * cJ * gam
    scal = s * ik * beta
    if inverse:
        A, B, C, scal = -A, -B, -C, -scal
    q2 = A * A + B * C
    q = np.sqrt(q2)
    small = np.abs(q) < 1e-4
    qs = np.where(small, 1.0, q)
    sh = np.where(small, 1 + q2 / 6 + q2 * q2 / 120, np.sinh(qs) / qs)
    ch = np.where(small, 1 + q2 / 2 + q2 * q2 / 24, np.cosh(qs))
    e = np.exp(scal)
    P = np.empty(A.shape + (2, 2), dtype=complex)
    P[..., 0, 0] = e * (ch + sh * A)
    P[..., 0, 1] = e * sh * B
    P[..., 1, 0] = e * sh * C
    P[..., 1, 1] = e * (ch - sh * A)
    return P


def column_sweep(profile: FieldProfile, mu, column: int, side: str) -> np.ndarray:
    """Column ``column`` (0 or 1) of Phi-tilde_side at every grid point.

    Returns an array of shape (n, len(mu), 2).
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=complex))
    if np.any((mu == 0) | (mu == 1) | (mu == -1)):
        raise SpectralDomainError("mu in {0, 1, -1} is excluded from the sweeps")
    s = 1 if column == 0 else -1
    n = len(profile.x_grid)
    out = np.empty((n, len(mu), 2), dtype=complex)
    v = np.zeros((len(mu), 2), dtype=complex)
    v[:, column] = 1.0
    if side == "minus":
        P = _propagators(profile, mu, s)
        out[0] = v
        for k in range(n - 1):
            v = np.einsum("mij,mj->mi", P[k], v)
            out[k + 1] = v
    elif side == "plus":
        P = _propagators(profile, mu, s, inverse=True)
        out[-1] = v
        for k in range(n - 2, -1, -1):
            v = np.einsum("mij,mj->mi", P[k], v)
            out[k] = v
    else:
        raise ValueError("side must be 'plus' or 'minus'")
    return out


def _chunks(mu):
    mu = np.atleast_1d(np.asarray(mu, dtype=complex))
    for i in range(0, len(mu), CHUNK):
        yield i, mu[i:i + CHUNK]


def _match_index(profile: FieldProfile, x_match):
    x = profile.x_grid
    if x_match is None:
        # centre of mass of |m - 1|, a point where the solution is fully resolved
        w = np.abs(profile.m - 1)
        xc = float(np.sum(w * x) / np.sum(w)) if np.sum(w) > 0 else float(np.mean(x))
    else:
        xc = float(x_match)
    return int(np.clip(np.searchsorted(x, xc), 1, len(x) - 2))


def _det(v, w):
    return v[..., 0] * w[..., 1] - v[..., 1] * w[..., 0]


def a_of_mu(profile: FieldProfile, mu, x_match=None):
    """a(mu) = det(Phi_-^(1), Phi_+^(2)) for mu in the closed upper half-plane."""
    mu = np.atleast_1d(np.asarray(mu, dtype=complex))
    k = _match_index(profile, x_match)
    out = np.empty(len(mu), dtype=complex)
    for i, chunk in _chunks(mu):
        v1 = column_sweep(profile, chunk, 0, "minus")[k]
        v2 = column_sweep(profile, chunk, 1, "plus")[k]
        out[i:i + len(chunk)] = _det(v1, v2)
    return out


def scattering_ab_grid(profile: FieldProfile, mu_grid, x_match=None):
    """a and b on a real grid of mu, evaluated at one matching point."""
    mu = np.atleast_1d(np.asarray(mu_grid, dtype=complex))
    if np.any(mu.imag != 0):
        raise ValueError("scattering_ab needs real mu")
    k = _match_index(profile, x_match)
    xk = profile.x_grid[k]
    Ik = profile.tail_integral(xk)
    a = np.empty(len(mu), dtype=complex)
    b = np.empty(len(mu), dtype=complex)
    for i, chunk in _chunks(mu):
        m1 = column_sweep(profile, chunk, 0, "minus")[k]
        p2 = column_sweep(profile, chunk, 1, "plus")[k]
        m2 = column_sweep(profile, chunk, 1, "minus")[k]
        sl = slice(i, i + len(chunk))
        a[sl] = _det(m1, p2)
        b[sl] = np.exp(2 * phase_p(xk, 0.0, chunk, Ik)) * _det(p2, m2)
    return a, b


def scattering_ab(profile: FieldProfile, mu: float, x_match=None):
    a, b = scattering_ab_grid(profile, [mu], x_match)
    return complex(a[0]), complex(b[0])


def real_mu_grid(n: int = 64, hi: float = 16.0, band: float = EXCLUSION):
    """Real sample points symmetric under mu -> -mu and mu -> 1/mu, avoiding 0 and +-1."""
    half = n // 4
    start = max(1 + band, 1 / (1 - band)) * (1 + 1e-3)
    big = np.exp(np.linspace(np.log(start), np.log(hi), half))
    pos = np.concatenate([1 / big[::-1], big])
    return np.concatenate([-pos[::-1], pos])


# --------------------------------------------------------------------------
# zeros of a

@dataclass
class _Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def perimeter(self, n_side: int):
        xs = np.linspace(self.x0, self.x1, n_side + 1)
        ys = np.linspace(self.y0, self.y1, n_side + 1)
        pts = np.concatenate([
            xs[:-1] + 1j * self.y0,
            self.x1 + 1j * ys[:-1],
            xs[::-1][:-1] + 1j * self.y1,
            self.x0 + 1j * ys[::-1][:-1],
        ])
        return np.append(pts, pts[0])

    def contains(self, z, pad=0.0):
        return (self.x0 - pad <= z.real <= self.x1 + pad) and (self.y0 - pad <= z.imag <= self.y1 + pad)

    def split(self):
        xm, ym = 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)
        return [_Box(self.x0, xm, self.y0, ym), _Box(xm, self.x1, self.y0, ym),
                _Box(self.x0, xm, ym, self.y1), _Box(xm, self.x1, ym, self.y1)]

    @property
    def diameter(self):
        return float(np.hypot(self.x1 - self.x0, self.y1 - self.y0))


class _AEvaluator:
    def __init__(self, profile, x_match=None):
        self.profile = profile
        self.x_match = x_match
        self.cache: dict = {}
        self.calls = 0

    def __call__(self, mu):
        mu = np.atleast_1d(np.asarray(mu, dtype=complex))
        keys = [(round(z.real, 13), round(z.imag, 13)) for z in mu]
        todo = sorted({k for k in keys if k not in self.cache})
        if todo:
            pts = np.array([complex(*k) for k in todo])
            vals = a_of_mu(self.profile, pts, self.x_match)
            self.calls += len(pts)
            self.cache.update(zip(todo, vals))
        return np.array([self.cache[k] for k in keys])


def _contour(ev, box: _Box, n_side=24, max_refine=14, max_dphase=0.4):
    pts = box.perimeter(n_side)
    vals = ev(pts)
    for _ in range(max_refine):
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(dphi) > max_dphase)[0]
        if bad.size == 0:
            break
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        pts = np.insert(pts, bad + 1, mids)
        vals = np.insert(vals, bad + 1, ev(mids))
    dphi = np.angle(vals[1:] / vals[:-1])
    wind = np.sum(dphi) / (2 * np.pi)
    return pts, vals, wind


def _newton(ev, z0, tol, maxit=30, h=1e-5):
    z = np.asarray(z0, dtype=complex).copy()
    done = np.zeros(z.shape, bool)
    for _ in range(maxit):
        hz = h * np.maximum(1.0, np.abs(z))
        f = ev(z)
        df = (ev(z + hz) - ev(z - hz)) / (2 * hz)
        step = np.where(done, 0.0, f / df)
        z = z - step
        done |= np.abs(step) < 1e-13 * np.maximum(1.0, np.abs(z))
        if np.all(done):
            break
    return z, np.abs(ev(z))


def find_zeros_a(profile: FieldProfile, search_region=(-10.0, 10.0, EXCLUSION, 10.0),
                 tol: float = 1e-8, max_depth: int = 7, annulus=(0.1, 10.0), x_match=None):
    """Zeros of a in the upper half-plane by argument-principle counting and Newton polishing."""
    ev = _AEvaluator(profile, x_match)
    root = _Box(*search_region)
    found: list = []
    stack = [(root, 0)]
    while stack:
        box, depth = stack.pop()
        pts, vals, wind = _contour(ev, box)
        n = int(round(wind.real))
        if abs(wind - n) > 0.2:
            raise CountMismatchError(f"non-integer winding {wind:.3f} on {box}")
        if n == 0:
            continue
        if n == 1:
            dlog = np.log(vals[1:] / vals[:-1])
            centre = np.sum(0.5 * (pts[1:] + pts[:-1]) * dlog) / (2j * np.pi)
            z, res = _newton(ev, [centre], tol)
            if box.contains(z[0], pad=1e-9) and res[0] < tol:
                found.append(complex(z[0]))
                continue
        if depth >= max_depth:
            raise CountMismatchError(f"could not isolate {n} zeros in {box} at depth {depth}")
        stack.extend((b, depth + 1) for b in box.split())
    zeros = _complete_orbits(found)
    lo, hi = annulus
    return [z for z in zeros if lo - 1e-9 <= abs(z) <= hi + 1e-9]


def _complete_orbits(zeros, tol=1e-7):
    out: list = []
    for z in sorted(zeros, key=lambda w: (round(w.real, 6), round(w.imag, 6))):
        for img in (z, -np.conj(z), -1 / z, 1 / np.conj(z)):
            img = complex(img)
            if img.imag > 0 and all(abs(img - w) > tol for w in out):
                out.append(img)
    return sorted(out, key=lambda w: (w.real, w.imag))


# --------------------------------------------------------------------------
# norming constants

def a_dot(profile: FieldProfile, mu_j, radius: float = 1e-2, npts: int = 16, x_match=None):
    """da/dmu at mu_j by the Cauchy integral over a small circle."""
    phi = 2 * np.pi * np.arange(npts) / npts
    w = np.exp(1j * phi)
    vals = a_of_mu(profile, mu_j + radius * w, x_match)
    return complex(np.mean(vals / w) / radius)


def norming_constants(profile: FieldProfile, zeros, n_points: int = 5, rtol: float = 1e-6):
    """[(mu_j, rho_j)] with rho_j = a'(mu_j) delta_j, delta_j from a least-squares fit."""
    x = profile.x_grid
    w = np.abs(profile.m - 1)
    core = np.nonzero(w >= 0.05 * w.max())[0] if w.max() > 0 else np.arange(len(x))
    idx = np.unique(np.linspace(core[0], core[-1], n_points).round().astype(int))
    out = []
    for mu in zeros:
        mu = complex(mu)
        v1 = column_sweep(profile, [mu], 0, "minus")[idx, 0]
        v2 = column_sweep(profile, [mu], 1, "plus")[idx, 0]
        p = phase_p(x[idx], 0.0, mu, profile.tail_integral(x[idx]))
        basis = (np.exp(-2 * p)[:, None] * v1).ravel()
        target = v2.ravel()
        delta = complex(np.vdot(basis, target) / np.vdot(basis, basis))
        resid = np.linalg.norm(target - delta * basis) / np.linalg.norm(target)
        if resid > rtol:
            raise NonProportionalityError(
                f"Jost columns not proportional at mu={mu} (residual {resid:.2e}); spurious zero?")
        out.append((mu, a_dot(profile, mu) * delta))
    return out


# --------------------------------------------------------------------------
# behaviour at mu = 1

def _richardson(eps, vals):
    """Value at eps = 0 of the polynomial through (eps_k, vals_k)."""
    eps = np.asarray(eps, dtype=float)
    V = np.vander(eps, len(eps), increasing=True)
    return complex(np.linalg.solve(V, np.asarray(vals, dtype=complex))[0])


def singularity_constant(profile: FieldProfile, eps=(1e-2, 5e-3, 2.5e-3),
                         gamma_zero: float = 1e-5, gamma_generic: float = 1e-3,
                         reflectionless_tol: float = 1e-6):
    """(gamma, c): residue of a at mu = 1 and the singularity constant.

    gamma is extrapolated from -2i eps * i a(1 + i eps); c = 0 when
    |gamma| > gamma_generic and c = 1 + r(1) when |gamma| < gamma_zero.
    |r(1)| below ``reflectionless_tol`` is treated as r(1) = 0, so c = 1.
    """
    eps = np.asarray(eps, dtype=float)
    a_up = a_of_mu(profile, 1 + 1j * eps)
    gamma = _richardson(eps, -2j * (1j * eps) * a_up)
    g = abs(gamma)
    if gamma_zero <= g <= gamma_generic:
        raise AmbiguousRegimeError(f"|gamma| = {g:.3e} inside the dead band [{gamma_zero}, {gamma_generic}]")
    if g > gamma_generic:
        return float(gamma.real), 0.0
    a, b = scattering_ab_grid(profile, 1 + eps)
    r1 = _richardson(eps, b / np.conj(a))
    if abs(r1) < reflectionless_tol:
        return float(gamma.real), 1.0
    return float(gamma.real), float((1 + r1).real)


# --------------------------------------------------------------------------
# spectral data

@dataclass
class SpectralData:
    mu_grid: np.ndarray
    a_vals: np.ndarray
    b_vals: np.ndarray
    r_vals: np.ndarray
    zeros: list
    gamma: float
    c: float
    meta: dict = field(default_factory=dict)

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(np.abs(self.a_vals) ** 2 - np.abs(self.b_vals) ** 2 - 1)))

    def to_json(self) -> str:
        pair = lambda z: [float(np.real(z)), float(np.imag(z))]  # noqa: E731
        obj = {
            "mu_grid": [float(m) for m in self.mu_grid],
            "a": [pair(z) for z in self.a_vals],
            "b": [pair(z) for z in self.b_vals],
            "r": [pair(z) for z in self.r_vals],
            "zeros": [{"mu": pair(m), "rho": pair(r)} for m, r in self.zeros],
            "gamma": float(self.gamma),
            "c": float(self.c),
            "meta": self.meta,
        }
        return json.dumps(obj, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str):
        obj = json.loads(text)
        cz = lambda v: np.array([complex(*p) for p in v], dtype=complex)  # noqa: E731
        return cls(
            mu_grid=np.array(obj["mu_grid"], dtype=float),
            a_vals=cz(obj["a"]), b_vals=cz(obj["b"]), r_vals=cz(obj["r"]),
            zeros=[(complex(*z["mu"]), complex(*z["rho"])) for z in obj["zeros"]],
            gamma=obj["gamma"], c=obj["c"], meta=obj.get("meta", {}),
        )

    def reflectionless_data(self, circle_tol: float = 1e-4):
        """ReflectionlessData from the discrete part, with near-circle poles snapped."""
        from .soliton_rh import ReflectionlessData

        gens = []
        for mu, rho in self.zeros:
            if abs(abs(mu) - 1) < circle_tol:
                th = float(np.angle(mu))
                if not 0 < th < np.pi / 2:
                    continue
                mu = np.exp(1j * th)
                dh = float((-1j * np.exp(1j * th) * rho).real)
                gens.append((mu, 1j * np.exp(-1j * th) * dh))
            elif mu.real >= 0 and abs(mu) > 1:
                gens.append((mu, rho))
        return ReflectionlessData.from_generators(gens, c=1.0 if self.c == 1 else self.c)


def compute_spectral_data(profile: FieldProfile, mu_grid=None, find_zeros: bool = True,
                          zero_tol: float = 1e-8) -> SpectralData:
    mu_grid = real_mu_grid() if mu_grid is None else np.asarray(mu_grid, dtype=float)
    a, b = scattering_ab_grid(profile, mu_grid)
    zeros = find_zeros_a(profile, tol=zero_tol) if find_zeros else []
    pairs = norming_constants(profile, zeros) if zeros else []
    gamma, c = singularity_constant(profile)
    meta = {
        "grid": {"x_min": float(profile.x_grid[0]), "x_max": float(profile.x_grid[-1]),
                 "n": int(len(profile.x_grid))},
        "tolerances": {"zero_tol": zero_tol, "exclusion": EXCLUSION},
        "integrator": "magnus4",
    }
    return SpectralData(mu_grid, a, b, b / np.conj(a), pairs, gamma, c, meta)
