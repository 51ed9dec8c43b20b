import numpy as np
import pytest

from magcurves import model_space as ms
from conftest import SIG_GRID


def rand_point(sig, rng, scale=2.0):
    return ms.Point(sig, rng.normal(scale=scale, size=sig.dim))


def rand_tangent(p, rng, scale=2.0):
    return ms.Tangent(p, rng.normal(scale=scale, size=p.sig.dim))


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

def test_signature_validation():
    with pytest.raises(ValueError):
        ms.SpaceSignature(0, 1)
    with pytest.raises(ValueError):
        ms.SpaceSignature(1, 0)
    with pytest.raises(ValueError):
        ms.SpaceSignature(1.5, 1)
    assert ms.SpaceSignature(2, 3).dim == 7


def test_point_and_tangent_validation():
    sig = ms.SpaceSignature(1, 1)
    with pytest.raises(ValueError):
        ms.Point(sig, [1.0, 2.0])
    with pytest.raises(ValueError):
        ms.Point(sig, [1.0, np.inf, 0.0])
    p = ms.Point(sig, [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        ms.Tangent(p, [1.0])


def test_metric_requires_matching_signature():
    p = ms.origin(ms.SpaceSignature(1, 1))
    other = ms.origin(ms.SpaceSignature(1, 2))
    with pytest.raises(ValueError):
        ms.metric(p, ms.Tangent(other, np.zeros(4)), ms.Tangent(p, np.zeros(3)))


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

def test_metric_hand_values():
    sig = ms.SpaceSignature(1, 1)
    p = ms.origin(sig)
    xi1 = ms.xi(sig, 1, at=p)
    assert ms.metric(p, xi1, xi1) == pytest.approx(1.0, abs=1e-15)

    dx = ms.Tangent(p, [1.0, 0.0, 0.0])
    dz = ms.Tangent(p, [0.0, 0.0, 1.0])
    assert ms.metric(p, dx, dz) == 0.0

    # with y_1 = 2 the dx direction picks up the contact-form square
    p2 = ms.Point(sig, [0.0, 2.0, 0.0])
    dx2 = ms.Tangent(p2, [1.0, 0.0, 0.0])
    assert ms.metric(p2, dx2, dx2) == pytest.approx(1.25, abs=1e-15)


def test_metric_hand_value_against_arclength_oracle():
    # arc length of the coordinate line t -> (t, 0, 0) shifted to y=2,
    # measured by finite differences, matches sqrt(g(dx, dx))
    sig = ms.SpaceSignature(1, 1)
    p = ms.Point(sig, [0.0, 2.0, 0.0])
    h = 1e-6
    # straight coordinate segment: secant length from the quadratic form
    seg = np.array([h, 0.0, 0.0])
    length = np.sqrt(float(seg @ ms.metric_matrix(sig, p.coords) @ seg)) / h
    assert length == pytest.approx(np.sqrt(1.25), rel=1e-12)


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_metric_matrix_positive_definite_and_consistent(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = rand_point(sig, rng)
        g = ms.metric_matrix(sig, p.coords)
        np.linalg.cholesky(g)  # raises if not positive definite
        assert np.allclose(g, g.T, atol=0)
        u = rng.normal(size=sig.dim)
        v = rng.normal(size=sig.dim)
        assert float(u @ g @ v) == pytest.approx(
            float(ms.inner(sig, p.coords, u, v)), abs=1e-13
        )
        ginv = ms.inverse_metric_matrix(sig, p.coords)
        assert np.abs(g @ ginv - np.eye(sig.dim)).max() < 1e-12


# ---------------------------------------------------------------------------
# structure operators
# ---------------------------------------------------------------------------

def test_phi_kills_reeb_fields():
    sig = ms.SpaceSignature(2, 3)
    p = ms.origin(sig)
    for alpha in range(1, 4):
        out = ms.phi(p, ms.xi(sig, alpha, at=p))
        assert np.all(out.comps == 0.0)


def test_phi_maps_y_to_x_at_origin():
    sig = ms.SpaceSignature(1, 1)
    p = ms.origin(sig)
    out = ms.phi(p, ms.Tangent(p, [0.0, 2.0, 0.0]))
    assert np.allclose(out.comps, [2.0, 0.0, 0.0], atol=0)


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_phi_squared_identity(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = rand_point(sig, rng)
        X = rand_tangent(p, rng)
        phi2 = ms.phi(p, ms.phi(p, X)).comps
        expected = -X.comps.copy()
        etas = ms.eta(p, X)
        for alpha in range(s):
            expected += etas[alpha] * ms.xi(sig, alpha + 1, at=p).comps
        assert np.abs(phi2 - expected).max() < 1e-12


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_phi_metric_compatibility(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(6)
    for _ in range(50):
        p = rand_point(sig, rng)
        X, Y = rand_tangent(p, rng), rand_tangent(p, rng)
        lhs = ms.metric(p, ms.phi(p, X), ms.phi(p, Y))
        rhs = ms.metric(p, X, Y) - float(np.sum(ms.eta(p, X) * ms.eta(p, Y)))
        assert abs(lhs - rhs) < 1e-12


def test_eta_hand_value():
    sig = ms.SpaceSignature(1, 1)
    p = ms.Point(sig, [0.0, -np.sqrt(3.0), 0.0])
    X = ms.Tangent(p, [np.sqrt(3.0), 0.0, -2.0])
    assert ms.eta(p, X)[0] == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_eta_dualities(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(7)
    p = rand_point(sig, rng)
    for alpha in range(1, s + 1):
        vals = ms.eta(p, ms.xi(sig, alpha, at=p))
        expected = np.zeros(s)
        expected[alpha - 1] = 1.0
        assert np.abs(vals - expected).max() < 1e-15
    for _ in range(20):
        X = rand_tangent(p, rng)
        assert np.abs(ms.eta(p, ms.phi(p, X))).max() < 1e-12
        for alpha in range(1, s + 1):
            assert ms.eta(p, X)[alpha - 1] == pytest.approx(
                ms.metric(p, X, ms.xi(sig, alpha, at=p)), abs=1e-13
            )


def test_xi_components_and_range():
    sig = ms.SpaceSignature(1, 1)
    assert np.allclose(ms.xi(sig, 1).comps, [0.0, 0.0, 2.0], atol=0)
    with pytest.raises(ValueError):
        ms.xi(sig, 0)
    with pytest.raises(ValueError):
        ms.xi(sig, 2)
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = rand_point(sig, rng)
        x = ms.xi(sig, 1, at=p)
        assert ms.metric(p, x, x) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_orthonormal_frame(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(n * 10 + s)
    for _ in range(100 // len(SIG_GRID) + 1):
        p = rand_point(sig, rng)
        frame = ms.orthonormal_frame(p)
        gram = np.array([[ms.metric(p, a, b) for b in frame] for a in frame])
        assert np.abs(gram - np.eye(sig.dim)).max() < 1e-12
        # phi sends X_i to X_{n+i}
        for i in range(n):
            assert np.abs(ms.phi(p, frame[i]).comps - frame[n + i].comps).max() < 1e-13


def test_frame_at_origin():
    sig = ms.SpaceSignature(1, 1)
    frame = ms.orthonormal_frame(ms.origin(sig))
    assert np.allclose(frame[1].comps, [2.0, 0.0, 0.0], atol=0)  # X_{n+1} with y=0


# ---------------------------------------------------------------------------
# connection
# ---------------------------------------------------------------------------

def fd_christoffel(sig, coords, h=1e-5):
    """Independent oracle: Gamma from central differences of the metric."""
    d = sig.dim
    dg = np.zeros((d, d, d))
    for a in range(d):
        e = np.zeros(d)
        e[a] = h
        dg[a] = (ms.metric_matrix(sig, coords + e) - ms.metric_matrix(sig, coords - e)) / (2 * h)
    ginv = np.linalg.inv(ms.metric_matrix(sig, coords))
    gamma = np.zeros((d, d, d))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                acc = 0.0
                for ell in range(d):
                    acc += ginv[k, ell] * (dg[i][j, ell] + dg[j][i, ell] - dg[ell][i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


@pytest.mark.parametrize("n,s", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_christoffel_against_fd_oracle(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(42)
    for _ in range(5):
        p = rand_point(sig, rng)
        exact = ms.christoffel(p)
        approx = fd_christoffel(sig, p.coords)
        assert np.abs(exact - approx).max() < 1e-6


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_christoffel_symmetry(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(13)
    for _ in range(10):
        gamma = ms.christoffel(rand_point(sig, rng))
        assert np.abs(gamma - gamma.transpose(0, 2, 1)).max() == 0.0


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_gamma_bilinear_matches_tensor(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(17)
    for _ in range(10):
        p = rand_point(sig, rng)
        u = rng.normal(size=sig.dim)
        v = rng.normal(size=sig.dim)
        via_tensor = np.einsum("kij,i,j->k", ms.christoffel(p), u, v)
        direct = ms.gamma_bilinear(sig, p.coords, u, v)
        assert np.abs(via_tensor - direct).max() < 1e-12


@pytest.mark.parametrize("n,s", SIG_GRID)
def test_nabla_xi_is_minus_phi(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(23)
    for _ in range(10):
        p = rand_point(sig, rng)
        X = rng.normal(size=sig.dim)
        for alpha in range(1, s + 1):
            xi_c = ms.xi(sig, alpha, at=p).comps
            nab = ms.gamma_bilinear(sig, p.coords, X, xi_c)  # xi has constant components
            assert np.abs(nab + ms.phi_comps(sig, p.coords, X)).max() < 1e-10


def test_metric_compatibility_fd():
    rng = np.random.default_rng(29)
    for (n, s) in [(1, 1), (2, 2), (1, 3)]:
        sig = ms.SpaceSignature(n, s)
        h = 1e-5
        for _ in range(5):
            c = rng.normal(scale=2.0, size=sig.dim)
            V = rng.normal(size=sig.dim)
            W = rng.normal(size=sig.dim)
            gamma = ms.christoffel_array(sig, c)
            for k in range(sig.dim):
                e = np.zeros(sig.dim)
                e[k] = 1.0
                lhs = (ms.inner(sig, c + h * e, V, W) - ms.inner(sig, c - h * e, V, W)) / (2 * h)
                rhs = (ms.inner(sig, c, np.einsum("kij,i,j->k", gamma, e, V), W)
                       + ms.inner(sig, c, V, np.einsum("kij,i,j->k", gamma, e, W)))
                assert abs(lhs - rhs) < 1e-5


def test_d_eta_equals_fundamental_form():
    # d(eta^a)(X, Y) = g(X, phi Y) with the 1/2-alternation convention,
    # via central differences on constant-component fields
    rng = np.random.default_rng(31)
    h = 1e-5
    for (n, s) in SIG_GRID:
        sig = ms.SpaceSignature(n, s)
        for _ in range(10):
            c = rng.normal(scale=2.0, size=sig.dim)
            X = rng.normal(size=sig.dim)
            Y = rng.normal(size=sig.dim)
            x_eta_y = (ms.eta_comps(sig, c + h * X, Y) - ms.eta_comps(sig, c - h * X, Y)) / (2 * h)
            y_eta_x = (ms.eta_comps(sig, c + h * Y, X) - ms.eta_comps(sig, c - h * Y, X)) / (2 * h)
            deta = 0.5 * (x_eta_y - y_eta_x)
            want = ms.inner(sig, c, X, ms.phi_comps(sig, c, Y))
            assert np.abs(deta - want).max() < 1e-5


# ---------------------------------------------------------------------------
# covariant acceleration and the phi-derivative identity
# ---------------------------------------------------------------------------

def test_covariant_acceleration_zero_velocity():
    sig = ms.SpaceSignature(2, 1)
    rng = np.random.default_rng(37)
    p = rand_point(sig, rng)
    a = rand_tangent(p, rng)
    zero = ms.Tangent(p, np.zeros(sig.dim))
    out = ms.covariant_acceleration(p, zero, a)
    assert np.all(out.comps == a.comps)


def test_covariant_acceleration_reeb_line():
    # constant velocity along xi_1 has vanishing covariant acceleration
    sig = ms.SpaceSignature(1, 1)
    for t in (0.0, 0.7, 2.0):
        p = ms.Point(sig, [0.0, 0.0, 2.0 * t])
        v = ms.Tangent(p, [0.0, 0.0, 2.0])
        a = ms.Tangent(p, np.zeros(3))
        assert np.abs(ms.covariant_acceleration(p, v, a).comps).max() == 0.0


@pytest.mark.parametrize("n,s", [(1, 1), (2, 2), (1, 3), (3, 1)])
def test_nabla_phi_identity(n, s):
    sig = ms.SpaceSignature(n, s)
    rng = np.random.default_rng(41)
    p0 = rand_point(sig, rng)

    # on Reeb inputs every term vanishes
    lhs, rhs = ms.nabla_phi_check(p0, ms.xi(sig, 1, at=p0), ms.xi(sig, 1, at=p0))
    assert np.abs(rhs.comps).max() < 1e-12
    assert np.abs(lhs.comps).max() < 1e-6

    for _ in range(10):
        p = rand_point(sig, rng)
        X, Y = rand_tangent(p, rng), rand_tangent(p, rng)
        lhs, rhs = ms.nabla_phi_check(p, X, Y)
        diff = lhs.comps - rhs.comps
        assert float(np.sqrt(ms.inner(sig, p.coords, diff, diff))) < 1e-5

    # Y along a Reeb direction reduces the right side to phi^2 X
    for _ in range(5):
        p = rand_point(sig, rng)
        X = rand_tangent(p, rng)
        Y = ms.xi(sig, s, at=p)
        lhs, rhs = ms.nabla_phi_check(p, X, Y)
        phi2x = ms.phi(p, ms.phi(p, X)).comps
        assert np.abs(rhs.comps - phi2x).max() < 1e-12
        assert np.abs(lhs.comps - rhs.comps).max() < 1e-5
