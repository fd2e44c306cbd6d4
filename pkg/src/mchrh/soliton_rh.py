"""Reflectionless Riemann-Hilbert problem in the (y, t) scale.

Two routes are provided.  ``one_soliton_eval`` / ``full_M`` are the closed
forms for a single pole pair on the unit circle; ``solve_reflectionless``
assembles and solves the residue-condition linear system for any symmetric
pole configuration and returns the rational matrix as a callable.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lax import IDENTITY
from .spectral_plane import phase_p_hat

EXP_CLAMP = 700.0
POLE_GUARD = 1e-8
CIRCLE_TOL = 1e-12

_B_PLUS = np.array([[-1, 1], [-1, 1]], dtype=complex)   # (mu - 1) block
_B_MINUS = np.array([[1, 1], [-1, -1]], dtype=complex)  # (mu + 1) block


class PoleEvaluationError(ValueError):
    pass


class SingularSolitonError(ValueError):
    pass


class SingularSystemError(np.linalg.LinAlgError):
    def __init__(self, msg, cond=np.inf):
        super().__init__(f"{msg} (condition estimate {cond:.3e})")
        self.cond = cond


@dataclass(frozen=True)
class SolitonParams:
    theta: float
    delta_hat: float

    def __post_init__(self):
        if not 0.0 < self.theta < np.pi / 2:
            raise ValueError(f"theta must lie in (0, pi/2), got {self.theta}")
        if self.delta_hat == 0 or not np.isfinite(self.delta_hat):
            raise ValueError("delta_hat must be a nonzero real number")

    @property
    def mu1(self) -> complex:
        return complex(np.exp(1j * self.theta))

    @property
    def rho1(self) -> complex:
        return complex(1j * np.exp(-1j * self.theta) * self.delta_hat)

    def speed(self) -> float:
        """Velocity of z in the y-frame."""
        return 2.0 / np.cos(self.theta) ** 2


def z_of(params: SolitonParams, y, t, return_saturated: bool = False):
    """z(y, t) = 2 delta_hat sin(theta) exp(sin(theta) (y - 2t/cos^2 theta))."""
    s = np.sin(params.theta)
    expo = s * (np.asarray(y, dtype=float) - params.speed() * np.asarray(t, dtype=float))
    saturated = np.abs(expo) > EXP_CLAMP
    z = 2.0 * params.delta_hat * s * np.exp(np.clip(expo, -EXP_CLAMP, EXP_CLAMP))
    if return_saturated:
        return z, saturated
    return z


@dataclass
class RHEvaluation:
    """Quantities read off a solution M-hat(y, t, mu).

    a1 = M11(i), a2 = dM12/dmu(i), a3 = dM21/dmu(i), eta = lim mu M12(mu),
    alpha_plus is the coefficient of the mu = 1 singularity.  kappa1, kappa2
    and z are only populated for the closed-form one-soliton.
    """

    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    eta: np.ndarray
    alpha_plus: np.ndarray
    kappa1: Optional[np.ndarray] = None
    kappa2: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None

    @classmethod
    def trivial(cls):
        return cls(a1=np.float64(1.0), a2=np.float64(0.0), a3=np.float64(0.0),
                   eta=np.float64(0.0), alpha_plus=np.float64(0.0))


def _kappas(theta, z):
    s, c = np.sin(theta), np.cos(theta)
    den = z * z + 2 * z + c * c
    kappa2 = -2 * z * s / den
    kappa1 = 2 * s * c / den
    return kappa1, kappa2


def one_soliton_eval(params: SolitonParams, y, t, z=None) -> RHEvaluation:
    """Closed-form RH data for the one-soliton of parameters (theta, delta_hat)."""
    theta = params.theta
    s = np.sin(theta)
    if z is None:
        z = z_of(params, y, t)
    z = np.asarray(z, dtype=float)
    near = np.minimum(np.abs(z - (-1 + s)), np.abs(z - (-1 - s)))
    if np.any(near < 1e-12):
        raise SingularSolitonError("z hits the singular set -1 +/- sin(theta)")
    kappa1, kappa2 = _kappas(theta, z)
    return RHEvaluation(
        a1=(z + 1 + s) / (z + 1 - s),
        a2=s * kappa2 / (1 + s),
        a3=s * kappa2 / (1 - s),
        eta=-2 * kappa2 * s,
        alpha_plus=2 * kappa2,
        kappa1=kappa1,
        kappa2=kappa2,
        z=z,
    )


@dataclass
class RationalM:
    """M(mu) = I + alpha-blocks at +-1 + simple poles in each column.

    ``col1`` holds (pole, residue vector) pairs of the first column,
    ``col2`` those of the second column.
    """

    alpha: complex
    col1: list = field(default_factory=list)
    col2: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def poles(self):
        return [p for p, _ in self.col1] + [p for p, _ in self.col2] + [1.0, -1.0]

    def _guard(self, mu):
        for p in self.poles():
            if np.any(np.abs(mu - p) < POLE_GUARD):
                raise PoleEvaluationError(f"evaluation within {POLE_GUARD} of the pole {p}")

    def __call__(self, mu, guard: bool = True):
        mu = np.asarray(mu, dtype=complex)
        if guard:
            self._guard(mu)
        out = np.broadcast_to(IDENTITY, mu.shape + (2, 2)).copy()
        ia = 0.5j * self.alpha
        out += (ia / (mu - 1))[..., None, None] * _B_PLUS
        out -= (ia / (mu + 1))[..., None, None] * _B_MINUS
        for p, v in self.col1:
            out[..., :, 0] += (1.0 / (mu - p))[..., None] * v
        for p, w in self.col2:
            out[..., :, 1] += (1.0 / (mu - p))[..., None] * w
        return out

    def derivative(self, mu):
        mu = np.asarray(mu, dtype=complex)
        self._guard(mu)
        out = np.zeros(mu.shape + (2, 2), dtype=complex)
        ia = 0.5j * self.alpha
        out -= (ia / (mu - 1) ** 2)[..., None, None] * _B_PLUS
        out += (ia / (mu + 1) ** 2)[..., None, None] * _B_MINUS
        for p, v in self.col1:
            out[..., :, 0] -= (1.0 / (mu - p) ** 2)[..., None] * v
        for p, w in self.col2:
            out[..., :, 1] -= (1.0 / (mu - p) ** 2)[..., None] * w
        return out

    def large_mu_coefficient(self):
        """Matrix M_inf with M = I + M_inf/mu + O(mu^-2)."""
        out = 0.5j * self.alpha * (_B_PLUS - _B_MINUS)
        for _, v in self.col1:
            out[:, 0] += v
        for _, w in self.col2:
            out[:, 1] += w
        return out

    def evaluation(self) -> RHEvaluation:
        Mi = self(1j)
        dMi = self.derivative(1j)
        eta = self.large_mu_coefficient()[0, 1]
        ev = RHEvaluation(
            a1=np.float64(Mi[0, 0].real),
            a2=np.float64(dMi[0, 1].real),
            a3=np.float64(dMi[1, 0].real),
            eta=np.float64(eta.real),
            alpha_plus=np.float64(np.real(self.alpha)),
        )
        if "kappa1" in self.meta:
            ev.kappa1 = np.float64(self.meta["kappa1"])
            ev.kappa2 = np.float64(self.meta["kappa2"])
        return ev


def _circle_pair_columns(theta, kappa1, kappa2):
    e, eb = np.exp(1j * theta), np.exp(-1j * theta)
    col1 = [
        (e, np.array([1j * kappa1 * e, 1j * kappa2 * e])),
        (-eb, np.array([1j * kappa1 * eb, -1j * kappa2 * eb])),
    ]
    col2 = [
        (eb, np.array([-1j * kappa2 * eb, -1j * kappa1 * eb])),
        (-e, np.array([1j * kappa2 * e, -1j * kappa1 * e])),
    ]
    return col1, col2


def full_M(params: SolitonParams, y: float, t: float, mu):
    """Closed-form one-soliton M-hat(y, t, mu)."""
    ev = one_soliton_eval(params, y, t)
    k1, k2 = float(ev.kappa1), float(ev.kappa2)
    col1, col2 = _circle_pair_columns(params.theta, k1, k2)
    M = RationalM(alpha=2 * k2, col1=col1, col2=col2, meta={"kappa1": k1, "kappa2": k2})
    return M(mu)


def one_soliton_matrix(params: SolitonParams, y: float, t: float) -> RationalM:
    ev = one_soliton_eval(params, y, t)
    k1, k2 = float(ev.kappa1), float(ev.kappa2)
    col1, col2 = _circle_pair_columns(params.theta, k1, k2)
    return RationalM(alpha=2 * k2, col1=col1, col2=col2,
                     meta={"kappa1": k1, "kappa2": k2, "assembly": "closed-form"})


# --------------------------------------------------------------------------
# reflectionless data

def _orbit_with_rho(mu, rho):
    """Orbit images of (mu, rho) with the induced norming constants."""
    mu, rho = complex(mu), complex(rho)
    mu2 = -1.0 / mu
    rho2 = -mu * mu * rho
    return [
        (mu, rho),
        (-np.conj(mu), np.conj(rho)),
        (mu2, rho2),
        (-np.conj(mu2), np.conj(rho2)),
    ]


@dataclass
class ReflectionlessData:
    """Poles (mu_j in C+, rho_j) closed under mu -> -conj(mu), mu -> -1/mu."""

    poles: list
    c: float = 1.0

    def __post_init__(self):
        self.poles = [(complex(m), complex(r)) for m, r in self.poles]

    @classmethod
    def from_generators(cls, generators, c: float = 1.0, tol: float = 1e-12):
        poles: list = []
        for mu, rho in generators:
            for m, r in _orbit_with_rho(mu, rho):
                if all(abs(m - q) > tol for q, _ in poles):
                    poles.append((complex(m), complex(r)))
        return cls(poles=poles, c=c)

    @classmethod
    def one_soliton(cls, params: SolitonParams):
        return cls.from_generators([(params.mu1, params.rho1)])

    def validate(self, tol: float = 1e-9):
        """Raise ValueError unless the pole set and constants are orbit-consistent."""
        if self.c != 1:
            raise ValueError("reflectionless data with c != 1 is not supported (c=1 required)")
        for mu, rho in self.poles:
            if mu.imag <= 0:
                raise ValueError(f"pole {mu} is not in the upper half-plane")
            if rho == 0:
                raise ValueError(f"pole {mu} has a zero norming constant")
            if abs(mu - 1j) < tol:
                raise ValueError("mu = i cannot be a pole")
            for image, rimage in _orbit_with_rho(mu, rho)[1:3]:
                match = [r for q, r in self.poles if abs(q - image) <= tol * max(1, abs(image))]
                if not match:
                    raise ValueError(f"pole set not closed: image {image} of {mu} missing")
                if abs(match[0] - rimage) > tol * max(1.0, abs(rimage)):
                    raise ValueError(f"norming constant at {image} inconsistent with that at {mu}")
        return self

    def on_circle(self, tol: float = CIRCLE_TOL) -> bool:
        return all(abs(abs(m) - 1.0) <= tol for m, _ in self.poles)

    def circle_generators(self):
        """(theta_j, delta_hat_j) for unit-circle poles with 0 < theta_j < pi/2."""
        out = []
        for mu, rho in self.poles:
            theta = float(np.angle(mu))
            if 0 < theta < np.pi / 2:
                out.append((theta, float((-1j * np.exp(1j * theta) * rho).real)))
        return sorted(out)

    def to_json(self) -> str:
        return json.dumps({
            "c": self.c,
            "poles": [{"mu": [m.real, m.imag], "rho": [r.real, r.imag]} for m, r in self.poles],
        }, indent=1)

    @classmethod
    def from_json(cls, text: str, validate: bool = True, tol: float = 1e-9):
        obj = json.loads(text)
        poles = [(complex(*p["mu"]), complex(*p["rho"])) for p in obj["poles"]]
        data = cls(poles=poles, c=obj.get("c", 1))
        if validate:
            data.validate(tol)
        return data


def _kappa_hat(rho, mu, y, t):
    return rho * np.exp(-2 * phase_p_hat(y, t, mu))


def _solve_equilibrated(A, b, label):
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    cond = np.linalg.cond(As)
    if not np.isfinite(cond) or cond > 1e13:
        raise SingularSystemError(f"{label}: residue system is singular", cond)
    sol, *_ = np.linalg.lstsq(As, b, rcond=None)
    resid = np.linalg.norm(As @ sol - b) / max(1.0, np.linalg.norm(b))
    if resid > 1e-8:
        raise SingularSystemError(f"{label}: residue system inconsistent (residual {resid:.2e})", cond)
    return sol / scale, cond


def _solve_real(data: ReflectionlessData, y, t) -> RationalM:
    gens = data.circle_generators()
    n = len(gens)
    # unknowns: alpha, then (kappa1_j, kappa2_j)
    nunk = 1 + 2 * n

    def col2_coeffs(mu):
        """M^(2)(mu) = e2 + sum_k coeffs[:, k] X_k."""
        C = np.zeros((2, nunk), dtype=complex)
        C[:, 0] = 0.5j / (mu - 1) * np.array([1, 1]) - 0.5j / (mu + 1) * np.array([1, -1])
        for j, (th, _) in enumerate(gens):
            e, eb = np.exp(1j * th), np.exp(-1j * th)
            C[1, 1 + 2 * j] = -1j * eb / (mu - eb) - 1j * e / (mu + e)
            C[0, 2 + 2 * j] = -1j * eb / (mu - eb) + 1j * e / (mu + e)
        return C

    rows, rhs = [], []
    for j, (th, dh) in enumerate(gens):
        mu = np.exp(1j * th)
        kk = dh * np.exp(-2 * phase_p_hat(y, t, mu)).real
        C = col2_coeffs(mu)
        C[0, 1 + 2 * j] += kk
        C[1, 2 + 2 * j] += kk
        target = -np.array([0, 1], dtype=complex)
        for r in range(2):
            rows.append(C[r].real)
            rhs.append(target[r].real)
            rows.append(C[r].imag)
            rhs.append(target[r].imag)
    row = np.zeros(nunk)
    row[0] = 1.0
    row[2::2] = -2.0
    rows.append(row)
    rhs.append(0.0)
    X, cond = _solve_equilibrated(np.array(rows), np.array(rhs), "real assembly")
    col1, col2 = [], []
    for j, (th, _) in enumerate(gens):
        c1, c2 = _circle_pair_columns(th, X[1 + 2 * j], X[2 + 2 * j])
        col1 += c1
        col2 += c2
    meta = {"assembly": "real", "cond": cond}
    if n == 1:
        meta.update(kappa1=X[1], kappa2=X[2])
    return RationalM(alpha=X[0], col1=col1, col2=col2, meta=meta)


def _solve_complex(data: ReflectionlessData, y, t) -> RationalM:
    Z = data.poles
    n = len(Z)
    nunk = 1 + 4 * n  # alpha, v_j (2), w_j (2)
    e1 = np.array([1, 0], dtype=complex)
    e2 = np.array([0, 1], dtype=complex)

    def col_coeffs(mu, col):
        C = np.zeros((2, nunk), dtype=complex)
        if col == 1:
            C[:, 0] = 0.5j / (mu - 1) * np.array([-1, -1]) - 0.5j / (mu + 1) * np.array([1, -1])
            for j, (zeta, _) in enumerate(Z):
                C[0, 1 + 4 * j] = 1 / (mu - zeta)
                C[1, 2 + 4 * j] = 1 / (mu - zeta)
        else:
            C[:, 0] = 0.5j / (mu - 1) * np.array([1, 1]) - 0.5j / (mu + 1) * np.array([1, -1])
            for j, (zeta, _) in enumerate(Z):
                zb = np.conj(zeta)
                C[0, 3 + 4 * j] = 1 / (mu - zb)
                C[1, 4 + 4 * j] = 1 / (mu - zb)
        return C

    rows, rhs = [], []
    for j, (zeta, rho) in enumerate(Z):
        kap = complex(_kappa_hat(rho, zeta, y, t))
        # kap v_j - M2(zeta) = 0, rows scaled to order one whatever |kap|
        w = 1.0 / max(1.0, abs(kap))
        C = -col_coeffs(zeta, 2)
        C[0, 1 + 4 * j] += kap
        C[1, 2 + 4 * j] += kap
        rows.append(w * C)
        rhs.append(w * e2)
        C = -col_coeffs(np.conj(zeta), 1)
        C[0, 3 + 4 * j] += np.conj(kap)
        C[1, 4 + 4 * j] += np.conj(kap)
        rows.append(w * C)
        rhs.append(w * e1)
    rows.append(col_coeffs(0.0, 1))
    rhs.append(np.zeros(2, dtype=complex))
    rows.append(col_coeffs(0.0, 2))
    rhs.append(np.zeros(2, dtype=complex))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    X, cond = _solve_equilibrated(A, b, "complex assembly")
    col1 = [(zeta, X[1 + 4 * j: 3 + 4 * j]) for j, (zeta, _) in enumerate(Z)]
    col2 = [(np.conj(zeta), X[3 + 4 * j: 5 + 4 * j]) for j, (zeta, _) in enumerate(Z)]
    return RationalM(alpha=X[0], col1=col1, col2=col2, meta={"assembly": "complex", "cond": cond})


def solve_reflectionless(data: ReflectionlessData, y: float, t: float,
                         assembly: str = "auto", allow_off_circle: bool = False) -> RationalM:
    """Solve the reflectionless RH problem at one (y, t).

    ``assembly`` is "real" (unit-circle poles, real unknowns), "complex"
    (general complex unknowns) or "auto".  Off-circle poles need
    ``allow_off_circle=True``.
    """
    if data.c != 1:
        raise ValueError("only c = 1 reflectionless data can be solved")
    if not data.poles:
        return RationalM(alpha=0.0, meta={"assembly": "empty"})
    circle = data.on_circle()
    if not circle and not allow_off_circle:
        raise ValueError("off-circle poles require allow_off_circle=True")
    if assembly == "auto":
        assembly = "real" if circle else "complex"
    if assembly == "real":
        if not circle:
            raise ValueError("real assembly needs unit-circle poles")
        return _solve_real(data, y, t)
    if assembly == "complex":
        return _solve_complex(data, y, t)
    raise ValueError(f"unknown assembly {assembly!r}")


def reflectionless_solve(data: ReflectionlessData, y: float, t: float, **kw) -> RHEvaluation:
    return solve_reflectionless(data, y, t, **kw).evaluation()
