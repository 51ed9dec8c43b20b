"""Curvatures and Frenet frames extracted numerically from sampled curves.

Along a unit-speed curve with tangent T = v_1, the Frenet recursion

    nabla_T T   = k1 v_2
    nabla_T v_2 = -k1 T   + k2 v_3
    nabla_T v_3 = -k2 v_2 + k3 v_4

defines the curvatures k1, k2, k3 and frame vectors extracted here.  Each
covariant rate nabla_T V is assembled from a fourth-order central
difference of the component series plus the exact connection correction
Gamma(T, V), at the trajectory's own grid step.  Every differentiation
level trims two samples from each end (the five-point stencil's reach);
quantities are NaN where trimmed or where the preceding curvature falls
below its level's degeneracy threshold (no frame vector is normalized out
of noise).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model_space as ms
from .dynamics import Trajectory
from .errors import InsufficientDataError, InvalidGridError

__all__ = ["EPS_GEO", "FrenetSeries", "covariant_tt", "frenet_apparatus", "osculating_order"]

# Degeneracy thresholds: below these a curvature counts as zero and the next
# frame vector is not normalized out of noise.  kappa1 is clean (exact
# connection plus one fourth-order difference of integrated data, rounding
# ceiling ~1e-11); each further level adds a normalization and another
# difference, raising the ceiling to ~3e-9 (kappa2) and ~3e-7 (kappa3) at
# desk-scale steps, so the thresholds step up accordingly.  All sit well
# below the 1e-4 .. 1e-3 tolerances at which curvatures are compared.
EPS_GEO = 1e-9
_EPS_LEVEL = (EPS_GEO, 1e-7, 1e-5)
_TRIM = 2       # samples dropped from each end per differentiation level
_GRID_RTOL = 1e-9


@dataclass(frozen=True)
class FrenetSeries:
    """Curvature and frame series on the trimmed interior grid.

    ``frames`` has shape (len(times), 4, dim) holding v_1..v_4 in coordinate
    components, NaN where undefined; ``defined_order[t]`` counts the frame
    vectors defined at that sample.
    """

    sig: ms.SpaceSignature
    times: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    kappa3: np.ndarray
    frames: np.ndarray
    defined_order: np.ndarray


def _uniform_step(times: np.ndarray) -> float:
    dt = np.diff(times)
    h = float(dt[0])
    if np.max(np.abs(dt - h)) > _GRID_RTOL * max(1.0, abs(h)):
        raise InvalidGridError("trajectory time grid is not uniform")
    return h


def covariant_tt(traj: Trajectory) -> tuple[slice, np.ndarray]:
    """nabla_T T along the trajectory, with the index range where it is valid.

    Uses the exact recorded accelerations when the trajectory carries them;
    otherwise d(T)/dt comes from central differences of the velocities and
    the first and last samples are excluded.
    """
    sig = traj.sig
    if traj.accelerations is not None:
        sl = slice(None)
        acc = traj.accelerations
    else:
        if len(traj) < 3:
            raise InsufficientDataError("need at least 3 samples to reconstruct accelerations")
        h = _uniform_step(traj.times)
        sl = slice(1, -1)
        acc = (traj.velocities[2:] - traj.velocities[:-2]) / (2.0 * h)
    pts = traj.points[sl]
    vel = traj.velocities[sl]
    return sl, acc + ms.gamma_bilinear(sig, pts, vel, vel)


def frenet_apparatus(traj: Trajectory, fd_step_hint: float | None = None) -> FrenetSeries:
    """Curvatures k1..k3 and frame vectors v_1..v_4 along a sampled curve.

    Requires at least 5 samples on a uniform grid.  ``fd_step_hint``, when
    given, must match the grid step (it guards against trajectories that
    were resampled after integration).
    """
    sig = traj.sig
    N = len(traj)
    if N < 5:
        raise InsufficientDataError(f"need at least 5 samples, got {N}")
    h = _uniform_step(traj.times)
    if fd_step_hint is not None and abs(h - fd_step_hint) > _GRID_RTOL * max(1.0, abs(fd_step_hint)):
        raise InvalidGridError(
            f"grid step {h!r} does not match fd_step_hint {fd_step_hint!r}"
        )

    P, V = traj.points, traj.velocities

    def rate(field: np.ndarray) -> np.ndarray:
        # nabla_T field: fourth-order five-point difference of the components
        # (matching the integrator's order; hence the 2-sample trim per
        # level) plus the exact connection term
        out = np.full_like(field, np.nan)
        out[2:-2] = (-field[4:] + 8.0 * field[3:-1] - 8.0 * field[1:-3] + field[:-4]) / (12.0 * h)
        return out + ms.gamma_bilinear(sig, P, V, field)

    def trim(arr: np.ndarray, level: int) -> np.ndarray:
        k = _TRIM * level
        arr[:k] = np.nan
        arr[-k:] = np.nan
        return arr

    def gnorm(field: np.ndarray) -> np.ndarray:
        return ms.norm(sig, P, field)

    def unit(field: np.ndarray, kappa: np.ndarray, eps: float) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where((kappa > eps)[:, None], field / kappa[:, None], np.nan)
        return out

    with np.errstate(invalid="ignore"):
        ntt = trim(rate(V), 1)
        kappa1 = gnorm(ntt)
        v2 = unit(ntt, kappa1, _EPS_LEVEL[0])

        k2v3 = trim(rate(v2) + kappa1[:, None] * V, 2)
        kappa2 = gnorm(k2v3)
        v3 = unit(k2v3, kappa2, _EPS_LEVEL[1])

        k3v4 = trim(rate(v3) + kappa2[:, None] * v2, 3)
        kappa3 = gnorm(k3v4)
        v4 = unit(k3v4, kappa3, _EPS_LEVEL[2])

    keep = slice(_TRIM, N - _TRIM)
    frames = np.stack([V[keep], v2[keep], v3[keep], v4[keep]], axis=1)
    defined = np.ones(N, dtype=int)
    lvl2 = kappa1 > _EPS_LEVEL[0]
    lvl3 = lvl2 & (kappa2 > _EPS_LEVEL[1])
    lvl4 = lvl3 & (kappa3 > _EPS_LEVEL[2])
    defined += lvl2.astype(int) + lvl3.astype(int) + lvl4.astype(int)

    return FrenetSeries(
        sig=sig,
        times=traj.times[keep],
        kappa1=kappa1[keep],
        kappa2=kappa2[keep],
        kappa3=kappa3[keep],
        frames=frames,
        defined_order=defined[keep],
    )


def _nanmedian(arr: np.ndarray) -> float:
    if not np.any(np.isfinite(arr)):
        return np.nan
    return float(np.nanmedian(arr))


def osculating_order(series: FrenetSeries, tol: float) -> int:
    """Largest r with time-median kappa_{r-1} above tol (r = 1 when even
    kappa1 stays below tol).

    The chain is walked in order: once a curvature median falls below tol,
    the later ones are Frenet-undefined (numerically they are differentiated
    noise) and are not consulted.  Nothing caps the result at 3, so the
    order bound for magnetic inputs is a checkable outcome rather than an
    assumption.
    """
    if len(series.times) == 0:
        raise InsufficientDataError("empty curvature series")
    r = 1
    for kappa in (series.kappa1, series.kappa2, series.kappa3):
        med = _nanmedian(kappa)
        if not (np.isfinite(med) and med > tol):
            break
        r += 1
    return r
