"""Flat-file formats for trajectories and curvature series.

Trajectory CSV column order is fixed:

    t, x_1..x_n, y_1..y_n, z_1..z_s, vx_1..vx_n, vy_1..vy_n, vz_1..vz_s,
    speed, eta_1..eta_s

The JSON mirror keys the same column names plus the metadata n, s, q.
Numbers are written in the shortest decimal form that round-trips, so
identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import model_space as ms
from .dynamics import Trajectory
from .frenet import FrenetSeries

__all__ = [
    "trajectory_columns",
    "write_trajectory_csv",
    "write_trajectory_json",
    "write_trajectory",
    "read_trajectory",
    "write_frenet_csv",
]


def _fmt(v: float) -> str:
    return repr(float(v))


def trajectory_columns(sig: ms.SpaceSignature) -> list[str]:
    n, s = sig.n, sig.s
    cols = ["t"]
    cols += [f"x_{i}" for i in range(1, n + 1)]
    cols += [f"y_{i}" for i in range(1, n + 1)]
    cols += [f"z_{a}" for a in range(1, s + 1)]
    cols += [f"vx_{i}" for i in range(1, n + 1)]
    cols += [f"vy_{i}" for i in range(1, n + 1)]
    cols += [f"vz_{a}" for a in range(1, s + 1)]
    cols.append("speed")
    cols += [f"eta_{a}" for a in range(1, s + 1)]
    return cols


def _trajectory_table(traj: Trajectory) -> np.ndarray:
    speeds = traj.speeds()
    etas = traj.etas()
    return np.column_stack([traj.times, traj.points, traj.velocities, speeds, etas])


def write_trajectory_csv(traj: Trajectory, path) -> None:
    table = _trajectory_table(traj)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(trajectory_columns(traj.sig))
        for row in table:
            writer.writerow([_fmt(v) for v in row])


def write_trajectory_json(traj: Trajectory, path) -> None:
    table = _trajectory_table(traj)
    doc: dict = {"n": traj.sig.n, "s": traj.sig.s, "q": traj.q}
    for k, name in enumerate(trajectory_columns(traj.sig)):
        doc[name] = [float(v) for v in table[:, k]]
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def write_trajectory(traj: Trajectory, path, fmt: str | None = None) -> None:
    """Write CSV or JSON; the format defaults to the path suffix."""
    fmt = fmt or Path(path).suffix.lstrip(".").lower()
    if fmt == "csv":
        write_trajectory_csv(traj, path)
    elif fmt == "json":
        write_trajectory_json(traj, path)
    else:
        raise ValueError(f"unknown trajectory format {fmt!r} (expected csv or json)")


def _sig_from_header(header: list[str]) -> ms.SpaceSignature:
    n = sum(1 for c in header if c.startswith("x_"))
    s = sum(1 for c in header if c.startswith("z_"))
    if n < 1 or s < 1:
        raise ValueError(f"cannot infer (n, s) from CSV header {header}")
    sig = ms.SpaceSignature(n, s)
    if header != trajectory_columns(sig):
        raise ValueError("CSV header does not match the fixed trajectory column order")
    return sig


def read_trajectory(path, fmt: str | None = None) -> Trajectory:
    """Read a trajectory written by this module.

    Speed and contact-form columns are derived quantities and are not
    trusted on input.  CSV carries no strength, so q is None there.
    """
    fmt = fmt or Path(path).suffix.lstrip(".").lower()
    if fmt == "csv":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            sig = _sig_from_header(header)
            rows = np.array([[float(v) for v in row] for row in reader])
        d = sig.dim
        return Trajectory(sig, rows[:, 0], rows[:, 1:1 + d], rows[:, 1 + d:1 + 2 * d], q=None)
    if fmt == "json":
        with open(path) as fh:
            doc = json.load(fh)
        sig = ms.SpaceSignature(int(doc["n"]), int(doc["s"]))
        cols = trajectory_columns(sig)
        table = np.column_stack([np.asarray(doc[name], dtype=float) for name in cols])
        d = sig.dim
        q = doc.get("q")
        return Trajectory(sig, table[:, 0], table[:, 1:1 + d], table[:, 1 + d:1 + 2 * d],
                          q=None if q is None else float(q))
    raise ValueError(f"unknown trajectory format {fmt!r} (expected csv or json)")


def write_frenet_csv(series: FrenetSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "kappa1", "kappa2", "kappa3", "order"])
        for i in range(len(series.times)):
            writer.writerow([
                _fmt(series.times[i]),
                _fmt(series.kappa1[i]),
                _fmt(series.kappa2[i]),
                _fmt(series.kappa3[i]),
                int(series.defined_order[i]),
            ])
