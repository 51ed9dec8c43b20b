"""Exact tensors and connection of the model space R^(2n+s).

The model space carries the standard framed metric structure with s Reeb
directions: in coordinates (x_1..x_n, y_1..y_n, z_1..z_s),

    xi_a  = 2 d/dz_a
    eta^a = (dz_a - sum_i y_i dx_i) / 2
    phi X = sum_i Y_i d/dx_i - sum_i X_i d/dy_i + (sum_i Y_i y_i) sum_a d/dz_a
    g     = sum_a eta^a (x) eta^a + (1/4) sum_i (dx_i (x) dx_i + dy_i (x) dy_i)

where X_i, Y_i, Z_a are the d/dx_i, d/dy_i, d/dz_a components of X.  All
tangent data is stored in the coordinate basis; the g-orthonormal frame
(X_1..X_n, X_{n+1}..X_{2n}, xi_1..xi_s) with X_i = 2 d/dy_i and
X_{n+i} = phi X_i is a derived view.

Expanding g gives the coordinate blocks used throughout (all others zero):

    g_{x_i x_j} = delta_ij/4 + (s/4) y_i y_j      g_{y_i y_j} = delta_ij/4
    g_{x_i z_a} = -y_i/4                          g_{z_a z_b} = delta_ab/4

These blocks are polynomials in y, so metric derivatives and Christoffel
symbols are evaluated in closed form; finite differences appear only in
test oracles and in the curvature-from-samples code.

Array-level helpers (``metric_matrix``, ``eta_comps``, ``phi_comps``,
``inner``, ``gamma_bilinear``, ...) accept arbitrary leading batch axes and
are the fast path for integration and trajectory post-processing.  The
``Point``/``Tangent`` wrappers carry validation for the public operations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpaceSignature",
    "Point",
    "Tangent",
    "origin",
    "metric_matrix",
    "inverse_metric_matrix",
    "metric_derivatives",
    "christoffel_array",
    "frame_matrix",
    "eta_comps",
    "phi_comps",
    "inner",
    "norm",
    "gamma_bilinear",
    "metric",
    "phi",
    "eta",
    "xi",
    "orthonormal_frame",
    "christoffel",
    "covariant_acceleration",
    "nabla_phi_check",
]


@dataclass(frozen=True)
class SpaceSignature:
    """Pair (n, s) fixing the model space of dimension 2n + s."""

    n: int
    s: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 1):
            raise ValueError(f"s must be a positive integer, got {self.s!r}")

    @property
    def dim(self) -> int:
        return 2 * self.n + self.s

    @property
    def x_slice(self) -> slice:
        return slice(0, self.n)

    @property
    def y_slice(self) -> slice:
        return slice(self.n, 2 * self.n)

    @property
    def z_slice(self) -> slice:
        return slice(2 * self.n, self.dim)


def _as_coords(sig: SpaceSignature, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (sig.dim,):
        raise ValueError(
            f"{what} must have {sig.dim} components for (n={sig.n}, s={sig.s}), "
            f"got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite, got {arr}")
    return arr


@dataclass(frozen=True)
class Point:
    """Coordinate vector (x_1..x_n, y_1..y_n, z_1..z_s)."""

    sig: SpaceSignature
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_coords(self.sig, self.coords, "point"))


@dataclass(frozen=True)
class Tangent:
    """Tangent vector at ``base``, components in the coordinate basis."""

    base: Point
    comps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "comps", _as_coords(self.sig, self.comps, "tangent"))

    @property
    def sig(self) -> SpaceSignature:
        return self.base.sig


def origin(sig: SpaceSignature) -> Point:
    return Point(sig, np.zeros(sig.dim))


# ---------------------------------------------------------------------------
# array-level structure tensors (batched over leading axes)
# ---------------------------------------------------------------------------

def eta_comps(sig: SpaceSignature, coords: np.ndarray, v: np.ndarray) -> np.ndarray:
    """All s contact forms on v: eta^a(v) = (v_{z_a} - sum_i y_i v_{x_i}) / 2."""
    coords = np.asarray(coords, dtype=float)
    v = np.asarray(v, dtype=float)
    n = sig.n
    y = coords[..., n:2 * n]
    y_vx = np.sum(y * v[..., :n], axis=-1, keepdims=True)
    return 0.5 * (v[..., 2 * n:] - y_vx)


def phi_comps(sig: SpaceSignature, coords: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Structure endomorphism phi applied to v, in coordinate components.

    The z output carries the single coefficient sum_i v_{y_i} y_i replicated
    across every z slot.
    """
    coords = np.asarray(coords, dtype=float)
    v = np.asarray(v, dtype=float)
    n = sig.n
    y = coords[..., n:2 * n]
    vy = v[..., n:2 * n]
    out = np.empty_like(v)
    out[..., :n] = vy
    out[..., n:2 * n] = -v[..., :n]
    out[..., 2 * n:] = np.sum(vy * y, axis=-1, keepdims=True)
    return out


def inner(sig: SpaceSignature, coords: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Metric pairing g(u, v) evaluated from the tensor-product form of g."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = sig.n
    etas = np.sum(eta_comps(sig, coords, u) * eta_comps(sig, coords, v), axis=-1)
    flat = 0.25 * np.sum(u[..., :2 * n] * v[..., :2 * n], axis=-1)
    return etas + flat


def norm(sig: SpaceSignature, coords: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.sqrt(inner(sig, coords, v, v))


def metric_matrix(sig: SpaceSignature, coords: np.ndarray) -> np.ndarray:
    """Coordinate components g_{ab} at a single point, as a (dim, dim) matrix."""
    coords = _as_coords(sig, coords, "point")
    n, s, d = sig.n, sig.s, sig.dim
    y = coords[n:2 * n]
    g = np.zeros((d, d))
    g[:n, :n] = 0.25 * np.eye(n) + (s / 4.0) * np.outer(y, y)
    g[n:2 * n, n:2 * n] = 0.25 * np.eye(n)
    g[2 * n:, 2 * n:] = 0.25 * np.eye(s)
    g[:n, 2 * n:] = -0.25 * y[:, None]
    g[2 * n:, :n] = -0.25 * y[None, :]
    return g


def inverse_metric_matrix(sig: SpaceSignature, coords: np.ndarray) -> np.ndarray:
    """Closed-form inverse metric g^{ab} (from g^{-1} = F F^T, F the frame)."""
    coords = _as_coords(sig, coords, "point")
    n, s, d = sig.n, sig.s, sig.dim
    y = coords[n:2 * n]
    ginv = np.zeros((d, d))
    ginv[:n, :n] = 4.0 * np.eye(n)
    ginv[n:2 * n, n:2 * n] = 4.0 * np.eye(n)
    ginv[2 * n:, 2 * n:] = 4.0 * (np.eye(s) + np.dot(y, y))
    ginv[:n, 2 * n:] = 4.0 * y[:, None]
    ginv[2 * n:, :n] = 4.0 * y[None, :]
    return ginv


def metric_derivatives(sig: SpaceSignature, coords: np.ndarray) -> np.ndarray:
    """Exact partials dg[a, b, c] = d_a g_{bc}.

    Only y-derivatives are nonzero:
        d_{y_k} g_{x_i x_j} = (s/4)(delta_ik y_j + delta_jk y_i)
        d_{y_k} g_{x_i z_a} = -delta_ik / 4
    """
    coords = _as_coords(sig, coords, "point")
    n, s, d = sig.n, sig.s, sig.dim
    y = coords[n:2 * n]
    dg = np.zeros((d, d, d))
    for k in range(n):
        blk = dg[n + k]
        for i in range(n):
            blk[i, k] += (s / 4.0) * y[i]
            blk[k, i] += (s / 4.0) * y[i]
        blk[k, 2 * n:] += -0.25
        blk[2 * n:, k] += -0.25
    return dg


def christoffel_array(sig: SpaceSignature, coords: np.ndarray) -> np.ndarray:
    """Christoffel symbols Gamma^k_{ij} of the Levi-Civita connection.

    Assembled from the exact metric derivatives and the closed-form inverse
    metric; index order is gamma[k, i, j] with k the raised index.
    """
    dg = metric_derivatives(sig, coords)
    ginv = inverse_metric_matrix(sig, coords)
    # lower-index symbols: (d_i g_{jl} + d_j g_{il} - d_l g_{ij}) / 2
    lower = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, lower)


def gamma_bilinear(sig: SpaceSignature, coords: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Closed-form contraction Gamma^k_{ij} u^i v^j, batched over leading axes.

    Agrees with ``christoffel_array`` contracted twice; this form avoids
    building the dim^3 tensor in the integration and curvature hot paths.
    """
    coords = np.asarray(coords, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n, s = sig.n, sig.s
    y = coords[..., n:2 * n]
    ux, uy, uz = u[..., :n], u[..., n:2 * n], u[..., 2 * n:]
    vx, vy, vz = v[..., :n], v[..., n:2 * n], v[..., 2 * n:]
    y_ux = np.sum(y * ux, axis=-1, keepdims=True)
    y_vx = np.sum(y * vx, axis=-1, keepdims=True)
    y_uy = np.sum(y * uy, axis=-1, keepdims=True)
    y_vy = np.sum(y * vy, axis=-1, keepdims=True)
    suz = np.sum(uz, axis=-1, keepdims=True)
    svz = np.sum(vz, axis=-1, keepdims=True)
    cross = np.sum(ux * vy, axis=-1, keepdims=True) + np.sum(vx * uy, axis=-1, keepdims=True)
    out = np.empty(np.broadcast_shapes(u.shape, v.shape, coords.shape), dtype=float)
    out[..., :n] = 0.5 * s * (y_ux * vy + y_vx * uy) - 0.5 * (uy * svz + vy * suz)
    out[..., n:2 * n] = -0.5 * s * (ux * y_vx + vx * y_ux) + 0.5 * (ux * svz + vx * suz)
    out[..., 2 * n:] = (0.5 * s * (y_ux * y_vy + y_vx * y_uy)
                        - 0.5 * cross
                        - 0.5 * (y_uy * svz + y_vy * suz))
    return out


def frame_matrix(sig: SpaceSignature, coords: np.ndarray) -> np.ndarray:
    """Columns are the orthonormal frame (X_1..X_2n, xi_1..xi_s) at coords."""
    coords = _as_coords(sig, coords, "point")
    n, s, d = sig.n, sig.s, sig.dim
    y = coords[n:2 * n]
    F = np.zeros((d, d))
    for i in range(n):
        F[n + i, i] = 2.0          # X_i = 2 d/dy_i
        F[i, n + i] = 2.0          # X_{n+i} = 2 d/dx_i + 2 y_i sum_a d/dz_a
        F[2 * n:, n + i] = 2.0 * y[i]
    for a in range(s):
        F[2 * n + a, 2 * n + a] = 2.0
    return F


# ---------------------------------------------------------------------------
# public operations on Point/Tangent
# ---------------------------------------------------------------------------

def _check_same_sig(p: Point, *tangents: Tangent):
    for t in tangents:
        if t.sig != p.sig:
            raise ValueError(
                f"tangent signature {t.sig} does not match point signature {p.sig}"
            )


def metric(p: Point, X: Tangent, Y: Tangent) -> float:
    """g_p(X, Y)."""
    _check_same_sig(p, X, Y)
    return float(inner(p.sig, p.coords, X.comps, Y.comps))


def phi(p: Point, X: Tangent) -> Tangent:
    """phi X at p."""
    _check_same_sig(p, X)
    return Tangent(p, phi_comps(p.sig, p.coords, X.comps))


def eta(p: Point, X: Tangent) -> np.ndarray:
    """The s values eta^a(X) at p."""
    _check_same_sig(p, X)
    return eta_comps(p.sig, p.coords, X.comps)


def xi(sig: SpaceSignature, alpha: int, at: Point | None = None) -> Tangent:
    """Reeb field xi_alpha = 2 d/dz_alpha (alpha is 1-based).

    The components do not depend on the base point; ``at`` only fixes where
    the returned tangent is attached (origin by default).
    """
    if not 1 <= alpha <= sig.s:
        raise ValueError(f"alpha must be in 1..{sig.s}, got {alpha}")
    comps = np.zeros(sig.dim)
    comps[2 * sig.n + alpha - 1] = 2.0
    return Tangent(at if at is not None else origin(sig), comps)


def orthonormal_frame(p: Point) -> tuple[Tangent, ...]:
    """The g-orthonormal frame (X_1..X_n, X_{n+1}..X_{2n}, xi_1..xi_s) at p."""
    F = frame_matrix(p.sig, p.coords)
    return tuple(Tangent(p, F[:, k]) for k in range(p.sig.dim))


def christoffel(p: Point) -> np.ndarray:
    """Gamma^k_{ij} at p as a (dim, dim, dim) array, symmetric in (i, j)."""
    return christoffel_array(p.sig, p.coords)


def covariant_acceleration(p: Point, v: Tangent, a: Tangent) -> Tangent:
    """Covariant acceleration a^k + Gamma^k_{ij} v^i v^j along velocity v."""
    _check_same_sig(p, v, a)
    quad = gamma_bilinear(p.sig, p.coords, v.comps, v.comps)
    return Tangent(p, a.comps + quad)


def nabla_phi_check(p: Point, X: Tangent, Y: Tangent,
                    fd_step: float = 1e-6) -> tuple[Tangent, Tangent]:
    """Both sides of the covariant-derivative identity for phi.

    The left side (nabla_X phi)Y = nabla_X(phi Y) - phi(nabla_X Y) is
    assembled for constant-component extensions of X and Y: the coefficient
    derivative of phi Y along X is taken by central differences (phi's
    coefficients are linear in y, so the step only controls rounding), the
    connection terms come from the closed-form contraction.  The right side

        g(phi X, phi Y) sum_a xi_a + (sum_a eta^a(Y)) phi^2 X

    is evaluated exactly.  Returned as (lhs, rhs) for comparison in tests.
    """
    _check_same_sig(p, X, Y)
    sig, c = p.sig, p.coords
    xc, yc = X.comps, Y.comps
    h = fd_step
    d_phiY = (phi_comps(sig, c + h * xc, yc) - phi_comps(sig, c - h * xc, yc)) / (2 * h)
    nab_X_phiY = d_phiY + gamma_bilinear(sig, c, xc, phi_comps(sig, c, yc))
    nab_X_Y = gamma_bilinear(sig, c, xc, yc)
    lhs = nab_X_phiY - phi_comps(sig, c, nab_X_Y)

    phiX = phi_comps(sig, c, xc)
    phiY = phi_comps(sig, c, yc)
    g_phiX_phiY = inner(sig, c, phiX, phiY)
    sum_xi = np.zeros(sig.dim)
    sum_xi[2 * sig.n:] = 2.0
    phi2X = phi_comps(sig, c, phiX)
    rhs = g_phiX_phiY * sum_xi + np.sum(eta_comps(sig, c, yc)) * phi2X
    return Tangent(p, lhs), Tangent(p, rhs)
