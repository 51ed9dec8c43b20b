"""Exact slant normal magnetic trajectories from their parametric equations.

With contact angle theta and strength q, the x/y behaviour of a slant
normal magnetic trajectory is governed by lambda = -q + 2 s cos(theta):

  * lambda != 0 (case a): each (x_i, y_i) pair traces a circle of radius
    |c_i / lambda| at angular rate -lambda, with phases f_i(t) = -lambda t + a_i:

        x_i = (c_i / -lambda) sin f_i + b_i
        y_i = (c_i /  lambda) cos f_i + d_i
        z_a = 2 t cos(theta)
              - sum_i [ c_i^2/(4 lambda^2) (sin 2f_i + 2 f_i) + (c_i d_i / lambda) sin f_i ]
              + h_a

  * lambda = 0 (case b, forcing q = 2 s cos(theta)): straight x/y lines and
    quadratic z:

        gamma_i = c_i t + d_i                      (i = 1..2n)
        z_a     = 2 t cos(theta)
                  + sum_i c_i (c_{n+i} t^2 / 2 + d_{n+i} t) + h_a

Unit speed pins the c-amplitudes to sum c_i^2 = 4 (1 - s cos^2(theta)).
Velocities and accelerations are produced from the exact derivative
formulas, never finite differences, so these samplers can serve as
integration oracles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model_space as ms
from .dynamics import Trajectory
from .errors import InfeasibleAngleError, InvalidParamsError, WrongCaseError
from .frenet import covariant_tt

__all__ = [
    "CaseAParams",
    "CaseBParams",
    "lambda_",
    "sample_case_a",
    "sample_case_b",
    "random_params",
    "residual",
]

_LAMBDA_ZERO_BAND = 1e-12
_CONSTRAINT_TOL = 1e-12


def lambda_(q: float, s: int, cos_theta: float) -> float:
    """Dichotomy coefficient -q + 2 s cos(theta) of the x/y equations."""
    return -q + 2.0 * s * cos_theta


def _check_angle(cos_theta: float, s: int):
    if abs(cos_theta) > 1.0 / np.sqrt(s) + 1e-12:
        raise InfeasibleAngleError(
            f"|cos(theta)| = {abs(cos_theta):.6g} exceeds 1/sqrt(s) = {1.0 / np.sqrt(s):.6g}"
        )


def _check_amplitudes(c: np.ndarray, s: int, cos_theta: float):
    target = 4.0 * (1.0 - s * cos_theta * cos_theta)
    got = float(np.sum(c * c))
    if abs(got - target) > _CONSTRAINT_TOL:
        raise InvalidParamsError(
            f"sum of c_i^2 must equal 4(1 - s cos^2 theta) = {target!r}, got {got!r}"
        )


def _vector(values, length: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (length,):
        raise InvalidParamsError(f"{name} must have length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParamsError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class CaseAParams:
    """Free constants of the oscillatory family (lambda != 0)."""

    sig: ms.SpaceSignature
    q: float
    cos_theta: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        if self.q == 0:
            raise InvalidParamsError("q must be nonzero")
        _check_angle(self.cos_theta, self.sig.s)
        n, s = self.sig.n, self.sig.s
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _vector(getattr(self, name), n, name))
        object.__setattr__(self, "h", _vector(self.h, s, "h"))
        _check_amplitudes(self.c, s, self.cos_theta)
        if abs(self.lam) <= _LAMBDA_ZERO_BAND:
            raise WrongCaseError(
                "lambda = -q + 2 s cos(theta) vanishes; use the straight-line family (case b)"
            )

    @property
    def lam(self) -> float:
        return lambda_(self.q, self.sig.s, self.cos_theta)

    def as_dict(self) -> dict:
        return {
            "case": "a",
            "n": self.sig.n,
            "s": self.sig.s,
            "q": self.q,
            "cos_theta": self.cos_theta,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
            "d": self.d.tolist(),
            "h": self.h.tolist(),
        }


@dataclass(frozen=True)
class CaseBParams:
    """Free constants of the straight-line family (lambda = 0, q = 2 s cos theta)."""

    sig: ms.SpaceSignature
    cos_theta: float
    c: np.ndarray
    d: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        _check_angle(self.cos_theta, self.sig.s)
        if self.cos_theta == 0:
            raise InvalidParamsError(
                "cos(theta) = 0 implies q = 2 s cos(theta) = 0, which is excluded"
            )
        n, s = self.sig.n, self.sig.s
        object.__setattr__(self, "c", _vector(self.c, 2 * n, "c"))
        object.__setattr__(self, "d", _vector(self.d, 2 * n, "d"))
        object.__setattr__(self, "h", _vector(self.h, s, "h"))
        _check_amplitudes(self.c, s, self.cos_theta)

    @property
    def q(self) -> float:
        return 2.0 * self.sig.s * self.cos_theta

    def as_dict(self) -> dict:
        return {
            "case": "b",
            "n": self.sig.n,
            "s": self.sig.s,
            "q": self.q,
            "cos_theta": self.cos_theta,
            "c": self.c.tolist(),
            "d": self.d.tolist(),
            "h": self.h.tolist(),
        }


def sample_case_a(params: CaseAParams, times) -> Trajectory:
    """Exact samples of the oscillatory family at the given times."""
    sig = params.sig
    n, s = sig.n, sig.s
    t = np.asarray(times, dtype=float)[:, None]
    lam = params.lam
    a, b, c, d, h = params.a, params.b, params.c, params.d, params.h
    ct = params.cos_theta

    f = -lam * t + a
    gx = (c / -lam) * np.sin(f) + b
    gy = (c / lam) * np.cos(f) + d
    zcore = 2.0 * t[:, 0] * ct - np.sum(
        (c * c / (4.0 * lam * lam)) * (np.sin(2.0 * f) + 2.0 * f)
        + (c * d / lam) * np.sin(f),
        axis=1,
    )
    pts = np.concatenate([gx, gy, zcore[:, None] + h], axis=1)

    vx = c * np.cos(f)
    vy = c * np.sin(f)
    vz = 2.0 * ct + np.sum((c * c / lam) * np.cos(f) ** 2 + c * d * np.cos(f), axis=1)
    vel = np.concatenate([vx, vy, np.repeat(vz[:, None], s, axis=1)], axis=1)

    ax = lam * c * np.sin(f)
    ay = -lam * c * np.cos(f)
    az = np.sum(c * c * np.sin(2.0 * f) + lam * c * d * np.sin(f), axis=1)
    acc = np.concatenate([ax, ay, np.repeat(az[:, None], s, axis=1)], axis=1)

    return Trajectory(sig, t[:, 0], pts, vel, q=params.q, accelerations=acc)


def sample_case_b(params: CaseBParams, times) -> Trajectory:
    """Exact samples of the straight-line family at the given times."""
    sig = params.sig
    n, s = sig.n, sig.s
    t = np.asarray(times, dtype=float)[:, None]
    c, d, h = params.c, params.d, params.h
    ct = params.cos_theta

    gxy = c * t + d
    zcore = 2.0 * t[:, 0] * ct + np.sum(
        c[:n] * (c[n:] * t * t / 2.0 + d[n:] * t), axis=1
    )
    pts = np.concatenate([gxy, zcore[:, None] + h], axis=1)

    vz = 2.0 * ct + np.sum(c[:n] * (c[n:] * t + d[n:]), axis=1)
    vel = np.concatenate(
        [np.broadcast_to(c, gxy.shape).copy(), np.repeat(vz[:, None], s, axis=1)], axis=1
    )

    az = float(np.sum(c[:n] * c[n:]))
    acc = np.zeros_like(pts)
    acc[:, 2 * n:] = az

    return Trajectory(sig, t[:, 0], pts, vel, q=params.q, accelerations=acc)


def random_params(sig: ms.SpaceSignature, q: float, cos_theta: float, seed) -> CaseAParams | CaseBParams:
    """Seed-deterministic parameter set for the (q, cos_theta) family.

    The c-vector is drawn uniformly on the sphere of radius
    2 sqrt(1 - s cos^2 theta); the remaining free constants are drawn
    uniformly in [-1, 1].  The family is selected by whether
    lambda = -q + 2 s cos(theta) vanishes (band 1e-12).
    """
    if q == 0:
        raise InvalidParamsError("q must be nonzero")
    _check_angle(cos_theta, sig.s)
    rng = np.random.default_rng(seed)
    n, s = sig.n, sig.s
    radius = 2.0 * np.sqrt(max(0.0, 1.0 - s * cos_theta * cos_theta))

    def sphere(k: int) -> np.ndarray:
        if radius == 0.0:
            return np.zeros(k)
        u = rng.normal(size=k)
        un = np.linalg.norm(u)
        if un < 1e-12:
            u = np.zeros(k)
            u[0] = 1.0
            un = 1.0
        return u * (radius / un)

    if abs(lambda_(q, s, cos_theta)) <= _LAMBDA_ZERO_BAND:
        return CaseBParams(
            sig,
            cos_theta,
            c=sphere(2 * n),
            d=rng.uniform(-1.0, 1.0, size=2 * n),
            h=rng.uniform(-1.0, 1.0, size=s),
        )
    return CaseAParams(
        sig,
        q,
        cos_theta,
        a=rng.uniform(-1.0, 1.0, size=n),
        b=rng.uniform(-1.0, 1.0, size=n),
        c=sphere(n),
        d=rng.uniform(-1.0, 1.0, size=n),
        h=rng.uniform(-1.0, 1.0, size=s),
    )


def residual(traj: Trajectory, q: float) -> float:
    """max_t || nabla_T T + q phi T ||_g over the trajectory.

    Uses the trajectory's exact accelerations when present; otherwise the
    acceleration is reconstructed by second-order central differences of the
    recorded velocities.
    """
    sl, ntt = covariant_tt(traj)
    pts = traj.points[sl]
    vel = traj.velocities[sl]
    res = ntt + q * ms.phi_comps(traj.sig, pts, vel)
    return float(np.max(ms.norm(traj.sig, pts, res)))
