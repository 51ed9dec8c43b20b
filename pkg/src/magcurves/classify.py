"""Classification of normal magnetic trajectories and its inverse map.

A slant normal magnetic curve of strength q with contact angle theta
(cos theta = eta^a(T) for every a) is exactly one of:

  * a geodesic along (+-1/sqrt(s)) sum_a xi_a          (cos theta = +-1/sqrt(s))
  * a slant circle, k1 = sqrt(q^2 - s), k2 = 0         (cos theta = 1/q, |q| > sqrt(s))
  * a Legendre helix, k1 = |q|, k2 = sqrt(s)           (cos theta = 0)
  * a slant helix of order 3,
        k1 = |q| sqrt(1 - s cos^2 theta),  k2 = sqrt(s) |1 - q cos theta|.

Dropping the slant assumption, a normal magnetic curve with contact-form
values cos(theta_a) still has osculating order at most 3 with

    A  = sum_a cos^2(theta_a),   B = sum_a cos(theta_a),
    k1 = |q| sqrt(1 - A),        k2 = sqrt(A q^2 - A s + B^2 - 2 B q + s).

The inverse direction recovers which strengths a given slant helix is a
magnetic curve for; the case tags mirror the angle regimes above
("i" geodesic / "ii" Legendre / "iii" circle / "iv" generic slant).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import model_space as ms
from .dynamics import Trajectory
from .errors import InconsistentCaseError, InfeasibleAngleError
from .frenet import FrenetSeries, covariant_tt

__all__ = [
    "CurveKind",
    "CurveClass",
    "InverseResult",
    "predict_class",
    "order_bound_curvatures",
    "invert_q",
    "check_circle_existence",
    "rho",
    "fit_field_strength",
    "classify_trajectory",
]

_DISPATCH_BAND = 1e-9       # exact-equality cases get this much numerical slack
_FEASIBILITY_SLACK = 1e-12


class CurveKind(str, Enum):
    GEODESIC = "geodesic"
    SLANT_CIRCLE = "slant_circle"
    LEGENDRE_HELIX = "legendre_helix"
    SLANT_HELIX = "slant_helix"
    GENERAL_MAGNETIC = "general_magnetic"
    NOT_MAGNETIC = "not_magnetic"


@dataclass(frozen=True)
class CurveClass:
    """Classification outcome with predicted curvatures and sign data.

    ``q`` is None when the strength is indeterminate (a Reeb-direction
    geodesic is magnetic for every q).  ``measured`` carries empirical
    values when the class was derived from a sampled trajectory.
    """

    kind: CurveKind
    q: float | None = None
    cos_theta: float | None = None
    kappa1: float | None = None
    kappa2: float | None = None
    epsilon: int | None = None
    measured: dict | None = None

    def __post_init__(self):
        for name in ("kappa1", "kappa2"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")

    def as_dict(self) -> dict:
        return {
            "class": self.kind.value,
            "q": self.q,
            "cos_theta": self.cos_theta,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "epsilon": self.epsilon,
            "measured": self.measured,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.as_dict(), **kwargs)


@dataclass(frozen=True)
class InverseResult:
    """Strength candidates recovered from curvature data."""

    case_tag: str
    q_candidates: tuple[float, ...]
    cos_theta: float

    def __post_init__(self):
        if any(q == 0 for q in self.q_candidates):
            raise ValueError("inverse strengths must be nonzero")


def _sign(x: float) -> int:
    return int(np.sign(x))


def predict_class(q: float, cos_theta: float, s: int) -> CurveClass:
    """Classification of the slant normal magnetic curve with data (q, theta).

    The angle regimes are exact-equality conditions; numerically each gets a
    band of 1e-9 around it.
    """
    if q == 0:
        raise ValueError("q must be nonzero")
    limit = 1.0 / math.sqrt(s)
    if abs(cos_theta) > limit + _FEASIBILITY_SLACK:
        raise InfeasibleAngleError(
            f"|cos(theta)| = {abs(cos_theta):.6g} exceeds 1/sqrt(s) = {limit:.6g}"
        )
    eps = _sign(1.0 - q * cos_theta)
    if abs(abs(cos_theta) - limit) <= _DISPATCH_BAND:
        return CurveClass(CurveKind.GEODESIC, q=q, cos_theta=cos_theta,
                          kappa1=0.0, kappa2=0.0, epsilon=eps)
    if abs(cos_theta - 1.0 / q) <= _DISPATCH_BAND and abs(q) > math.sqrt(s):
        return CurveClass(CurveKind.SLANT_CIRCLE, q=q, cos_theta=cos_theta,
                          kappa1=math.sqrt(q * q - s), kappa2=0.0, epsilon=eps)
    if abs(cos_theta) <= _DISPATCH_BAND:
        return CurveClass(CurveKind.LEGENDRE_HELIX, q=q, cos_theta=cos_theta,
                          kappa1=abs(q), kappa2=math.sqrt(s), epsilon=eps)
    k1 = abs(q) * math.sqrt(max(0.0, 1.0 - s * cos_theta * cos_theta))
    k2 = math.sqrt(s) * abs(1.0 - q * cos_theta)
    return CurveClass(CurveKind.SLANT_HELIX, q=q, cos_theta=cos_theta,
                      kappa1=k1, kappa2=k2, epsilon=eps)


def order_bound_curvatures(q: float, cosines) -> tuple[float, float]:
    """(k1, k2) of a normal magnetic curve with per-direction contact values.

    Valid without the slant assumption; with equal cosines it reduces to the
    slant formulas.
    """
    cos = np.asarray(cosines, dtype=float)
    s = cos.shape[-1]
    a_sum = float(np.sum(cos * cos))
    if a_sum > 1.0 + _FEASIBILITY_SLACK:
        raise InfeasibleAngleError(
            f"sum of squared cosines is {a_sum:.6g} > 1; angles are not realizable"
        )
    b_sum = float(np.sum(cos))
    k1 = abs(q) * math.sqrt(max(0.0, 1.0 - a_sum))
    k2sq = a_sum * q * q - a_sum * s + b_sum * b_sum - 2.0 * b_sum * q + s
    return k1, math.sqrt(max(0.0, k2sq))


def invert_q(kappa1: float, kappa2: float, s: int, case: str,
             eps: int = 1, branch: int = 1) -> InverseResult:
    """Strengths for which a slant helix with these curvatures is magnetic.

    ``case`` selects the angle regime being inverted:
      * "ii"  Legendre (cos theta = 0): requires kappa2 = sqrt(s); the curve
        is magnetic for both of +-kappa1.
      * "iii" slant circle: requires kappa2 = 0; q = eps sqrt(kappa1^2 + s)
        and cos theta = 1/q.
      * "iv"  generic slant helix: with w = eps sqrt(s) + branch kappa2,
        q = eps sqrt(kappa1^2 + w^2), cos theta = w / (sqrt(s) |q|).

    ``eps`` is the orientation sign -sgn(g(phi T, v2)) and ``branch`` the
    sign of eta^a(v3); both depend on frame data absent from bare
    curvatures, so the caller supplies them.
    """
    if not kappa1 > 0:
        raise ValueError(
            "kappa1 must be positive; kappa1 = 0 is the geodesic case, "
            "magnetic for an arbitrary strength"
        )
    if kappa2 < 0:
        raise ValueError("kappa2 must be nonnegative")
    if eps not in (1, -1) or branch not in (1, -1):
        raise ValueError("eps and branch must be +1 or -1")

    if case == "i":
        raise InconsistentCaseError(
            "case i is the geodesic family (kappa1 = 0) with arbitrary strength"
        )
    if case == "ii":
        if abs(kappa2 - math.sqrt(s)) > _FEASIBILITY_SLACK:
            raise InconsistentCaseError(
                f"case ii requires kappa2 = sqrt(s) = {math.sqrt(s)!r}, got {kappa2!r}"
            )
        return InverseResult("ii", (kappa1, -kappa1), 0.0)
    if case == "iii":
        if kappa2 > _FEASIBILITY_SLACK:
            raise InconsistentCaseError(
                f"case iii is a circle: kappa2 must be 0, got {kappa2!r}"
            )
        q = eps * math.sqrt(kappa1 * kappa1 + s)
        return InverseResult("iii", (q,), eps / math.sqrt(kappa1 * kappa1 + s))
    if case == "iv":
        if kappa2 <= _FEASIBILITY_SLACK:
            raise InconsistentCaseError(
                "case iv requires kappa2 > 0 (use case iii for circles)"
            )
        w = eps * math.sqrt(s) + branch * kappa2
        root = math.sqrt(kappa1 * kappa1 + w * w)
        q = eps * root
        return InverseResult("iv", (q,), w / (math.sqrt(s) * root))
    raise ValueError(f"unknown case {case!r}: expected one of 'i', 'ii', 'iii', 'iv'")


def check_circle_existence(q: float, s: int) -> bool:
    """Whether a non-geodesic slant circle exists for strength q.

    None exists for 0 < |q| <= sqrt(s); the boundary is excluded exactly.
    """
    if q == 0:
        raise ValueError("q must be nonzero")
    return abs(q) > math.sqrt(s)


def rho(cos_theta: float, s: int) -> float:
    """Magnitude of the Reeb-sum component along v3 for order-3 slant helices.

    rho^2 = s - s^2 cos^2(theta); the sign is frame-dependent and not
    resolved here.
    """
    limit = 1.0 / math.sqrt(s)
    if abs(cos_theta) > limit + _FEASIBILITY_SLACK:
        raise InfeasibleAngleError(
            f"|cos(theta)| = {abs(cos_theta):.6g} exceeds 1/sqrt(s) = {limit:.6g}"
        )
    return math.sqrt(max(0.0, s - s * s * cos_theta * cos_theta))


def fit_field_strength(traj: Trajectory) -> tuple[float | None, float]:
    """Least-squares strength estimate and the resulting Lorentz residual.

    Minimizes sum_t || nabla_T T + q phi T ||_g^2 over q, which is a scalar
    quadratic with closed-form minimizer q = -sum <nabla_T T, phi T> /
    sum ||phi T||^2.  When phi T vanishes along the curve (Reeb-direction
    geodesics) the strength is indeterminate and None is returned together
    with max_t || nabla_T T ||_g.
    """
    sig = traj.sig
    sl, ntt = covariant_tt(traj)
    pts = traj.points[sl]
    vel = traj.velocities[sl]
    phit = ms.phi_comps(sig, pts, vel)
    den = float(np.sum(ms.inner(sig, pts, phit, phit)))
    if den <= 1e-12 * len(pts):
        return None, float(np.max(ms.norm(sig, pts, ntt)))
    q = -float(np.sum(ms.inner(sig, pts, ntt, phit))) / den
    res = ntt + q * phit
    return q, float(np.max(ms.norm(sig, pts, res)))


def _v2_alignment(traj: Trajectory, series: FrenetSeries) -> float | None:
    """Mean of g(v2, phi T / ||phi T||) over samples where both are defined."""
    sig = traj.sig
    keep = slice(2, len(traj) - 2)
    pts = traj.points[keep]
    v1 = series.frames[:, 0]
    v2 = series.frames[:, 1]
    phit = ms.phi_comps(sig, pts, v1)
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = ms.norm(sig, pts, phit)
        vals = ms.inner(sig, pts, v2, phit) / scale
    vals = vals[np.isfinite(vals)]
    if len(vals) == 0:
        return None
    return float(np.mean(vals))


def _nanmedian(arr: np.ndarray) -> float:
    if not np.any(np.isfinite(arr)):
        return float("nan")
    return float(np.nanmedian(arr))


def classify_trajectory(traj: Trajectory, series: FrenetSeries, tol: float = 1e-3) -> CurveClass:
    """Empirical classification of a sampled trajectory.

    The trajectory must behave like a normal magnetic curve to within tol:
    unit speed, constant contact-form values, and a small Lorentz residual
    at the least-squares strength.  Anything else is NOT_MAGNETIC (a curve
    can satisfy the Lorentz equation without being unit speed; normality is
    part of the contract being tested).  Magnetic curves dispatch on the
    measured angles and curvature medians: equal angles reproduce the slant
    families, constant-but-unequal angles are GENERAL_MAGNETIC.
    """
    sig = traj.sig
    s = sig.s
    etas = traj.etas()
    cosines = etas.mean(axis=0)
    angle_dev = float(np.max(np.abs(etas - cosines)))
    speed_dev = float(np.max(np.abs(traj.speeds() - 1.0)))
    q_hat, res = fit_field_strength(traj)

    k1_med = _nanmedian(series.kappa1)
    k2_med = _nanmedian(series.kappa2)
    k3_med = _nanmedian(series.kappa3)
    measured = {
        "q": q_hat,
        "cosines": [float(c) for c in cosines],
        "kappa1": k1_med,
        "kappa2": None if np.isnan(k2_med) else k2_med,
        "kappa3": None if np.isnan(k3_med) else k3_med,
        "residual": res,
        "speed_deviation": speed_dev,
        "angle_deviation": angle_dev,
        "v2_alignment": _v2_alignment(traj, series),
    }

    if speed_dev > tol or angle_dev > tol or res > tol:
        return CurveClass(CurveKind.NOT_MAGNETIC, q=q_hat, measured=measured)

    slant = float(np.max(cosines) - np.min(cosines)) <= tol
    if not slant:
        k1, k2 = order_bound_curvatures(q_hat, cosines)
        return CurveClass(
            CurveKind.GENERAL_MAGNETIC,
            q=q_hat,
            cos_theta=None,
            kappa1=k1,
            kappa2=k2,
            epsilon=None,
            measured=measured,
        )

    cos_theta = float(np.mean(cosines))
    if k1_med <= tol or q_hat is None:
        return CurveClass(
            CurveKind.GEODESIC,
            q=None,
            cos_theta=cos_theta,
            kappa1=0.0,
            kappa2=0.0,
            epsilon=None,
            measured=measured,
        )
    eps = _sign(1.0 - q_hat * cos_theta)
    k2_is_zero = np.isnan(k2_med) or k2_med <= tol
    if k2_is_zero:
        return CurveClass(
            CurveKind.SLANT_CIRCLE,
            q=q_hat,
            cos_theta=cos_theta,
            kappa1=math.sqrt(max(0.0, q_hat * q_hat - s)),
            kappa2=0.0,
            epsilon=eps,
            measured=measured,
        )
    if abs(cos_theta) <= tol:
        return CurveClass(
            CurveKind.LEGENDRE_HELIX,
            q=q_hat,
            cos_theta=cos_theta,
            kappa1=abs(q_hat),
            kappa2=math.sqrt(s),
            epsilon=eps,
            measured=measured,
        )
    k1 = abs(q_hat) * math.sqrt(max(0.0, 1.0 - s * cos_theta * cos_theta))
    k2 = math.sqrt(s) * abs(1.0 - q_hat * cos_theta)
    return CurveClass(
        CurveKind.SLANT_HELIX,
        q=q_hat,
        cos_theta=cos_theta,
        kappa1=k1,
        kappa2=k2,
        epsilon=eps,
        measured=measured,
    )
