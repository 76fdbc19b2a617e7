"""Geometry layer: radius maps, volumes, areas, gradient and Laplacian."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chball.geometry import (
    BallPoint,
    ScalarField,
    geodesic_radius,
    geodesic_radius_from_abs,
    ball_radius_from_geodesic,
    geodesic_ball_volume,
    geodesic_ball_volume_log,
    geodesic_sphere_area,
    volume_coordinate,
    radius_from_volume_coordinate,
    finite_difference_gradient,
    bergman_gradient_norm,
    bergman_gradient_norm_batch,
    invariant_laplacian,
    invariant_laplacian_batch,
)

EXACT_TOL = 1e-12
FD_TOL = 5e-6
LAPLACE_TOL = 2e-4

# frozen closed-form values at rho = 0.5
VOL_N2_RHO_HALF = 0.07373414397783205       # sinh(0.5)**4
AREA_N2_RHO_HALF = 0.6382290102797079       # 4 sinh(0.5)**3 cosh(0.5)


def _points(n, m=24, seed=0, rmax=0.93):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    norms = np.linalg.norm(Z, axis=1)
    scale = rng.uniform(0.05, rmax, m) / norms
    return Z * scale[:, None]


def test_geodesic_radius_roundtrip():
    for r in [0.0, 0.1, 0.5, 0.9, 0.999]:
        rho = geodesic_radius_from_abs(r)
        assert math.isclose(math.tanh(rho), r, abs_tol=EXACT_TOL)
        assert math.isclose(ball_radius_from_geodesic(rho), r, abs_tol=EXACT_TOL)


def test_geodesic_radius_point():
    p = BallPoint(np.array([0.3 + 0.0j, 0.4j]))
    assert math.isclose(geodesic_radius(p), math.atanh(0.5), abs_tol=EXACT_TOL)


def test_ball_volume_frozen_values():
    assert math.isclose(geodesic_ball_volume(0.5, 2), VOL_N2_RHO_HALF, rel_tol=EXACT_TOL)
    assert math.isclose(geodesic_ball_volume(1.0, 1), math.sinh(1.0) ** 2, rel_tol=EXACT_TOL)


def test_sphere_area_frozen_values():
    assert math.isclose(geodesic_sphere_area(0.5, 2), AREA_N2_RHO_HALF, rel_tol=EXACT_TOL)
    assert math.isclose(
        geodesic_sphere_area(1.0, 1), 2.0 * math.sinh(1.0) * math.cosh(1.0), rel_tol=EXACT_TOL
    )


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("rho", [0.25, 1.0, 2.5])
def test_area_volume_identity(n, rho):
    # per^2 = 4 n^2 (V^((2n-1)/n) + V^2) for geodesic balls
    V = geodesic_ball_volume(rho, n)
    P = geodesic_sphere_area(rho, n)
    rhs = 4.0 * n * n * (V ** ((2 * n - 1) / n) + V * V)
    assert math.isclose(P * P, rhs, rel_tol=1e-12)


def test_volume_log_space_consistency():
    for n in [1, 2]:
        for rho in [0.5, 5.0, 50.0]:
            lv = geodesic_ball_volume_log(rho, n)
            assert math.isclose(lv, math.log(geodesic_ball_volume(rho, n)), rel_tol=1e-12)
    # huge radius: log form stays finite and linear in rho
    lv = geodesic_ball_volume_log(500.0, 2)
    assert math.isclose(lv, 4 * (500.0 - math.log(2.0)), rel_tol=1e-12)


def test_volume_overflow_guard():
    with pytest.raises(OverflowError):
        geodesic_ball_volume(400.0, 2)


@given(st.floats(min_value=1e-6, max_value=0.999), st.integers(min_value=1, max_value=4))
def test_volume_coordinate_roundtrip(r, n):
    s = volume_coordinate(r, n)
    back = radius_from_volume_coordinate(s, n)
    assert math.isclose(back, r, rel_tol=1e-10, abs_tol=1e-12)


def test_volume_coordinate_matches_ball_volume():
    # s(tanh(rho)) = sinh(rho)^(2n) is the hyperbolic ball volume
    for n in [1, 2, 3]:
        for rho in [0.3, 1.0, 2.0]:
            s = volume_coordinate(math.tanh(rho), n)
            assert math.isclose(s, geodesic_ball_volume(rho, n), rel_tol=1e-12)


def test_gradient_norm_of_geodesic_radius_is_one():
    # |grad_g rho| = 1 pins the metric normalization
    for n in [1, 2, 3]:
        Z = _points(n, seed=n)
        fld = ScalarField(n=n, evaluate=lambda W: np.arctanh(np.linalg.norm(W, axis=1)))
        vals = bergman_gradient_norm_batch(fld, Z)
        assert np.max(np.abs(vals - 1.0)) < FD_TOL


def test_finite_difference_matches_analytic_partials():
    # d(|z1|^2)/dz1 = conj(z1)
    Z = _points(2, m=8, seed=4, rmax=0.8)
    G = finite_difference_gradient(lambda W: np.abs(W[:, 0]) ** 2, Z)
    assert np.max(np.abs(G[:, 0] - np.conj(Z[:, 0]))) < FD_TOL
    assert np.max(np.abs(G[:, 1])) < FD_TOL


def test_gradient_norm_single_point_matches_batch():
    Z = _points(2, m=4, seed=5)
    fld = ScalarField(n=2, evaluate=lambda W: np.abs(W[:, 0]) ** 2 + 0.5 * np.abs(W[:, 1]) ** 2)
    batch = bergman_gradient_norm_batch(fld, Z)
    for i in range(Z.shape[0]):
        one = bergman_gradient_norm(fld, BallPoint(Z[i]))
        assert math.isclose(one, batch[i], rel_tol=1e-12)


def test_invariant_laplacian_log_level():
    # Delta_g log(|f|^a (1-|z|^2)^b) = -4 n b away from zeros of f
    n = 2
    a, b = 1.5, 0.8
    rng = np.random.default_rng(3)
    Z = _points(n, m=16, seed=7, rmax=0.7)

    def u_log(W):
        f = W[:, 0] + 0.3 * W[:, 1] ** 2 + 1.1
        return a * np.log(np.abs(f)) + b * np.log1p(-np.sum(np.abs(W) ** 2, axis=1))

    fld = ScalarField(n=n, evaluate=u_log)
    vals = invariant_laplacian_batch(fld, Z)
    assert np.max(np.abs(vals + 4 * n * b)) < LAPLACE_TOL * (1 + 4 * n * b)


def test_invariant_laplacian_single_matches_batch():
    n = 1
    fld = ScalarField(n=n, evaluate=lambda W: np.abs(W[:, 0]) ** 2)
    Z = _points(n, m=3, seed=11, rmax=0.5)
    batch = invariant_laplacian_batch(fld, Z)
    one = invariant_laplacian(fld, BallPoint(Z[0]))
    assert math.isclose(one, batch[0], rel_tol=1e-8, abs_tol=1e-8)


def test_ball_point_validation():
    with pytest.raises(ValueError):
        BallPoint(np.array([1.2 + 0j]))
    with pytest.raises(ValueError):
        BallPoint(np.array([np.nan + 0j]))
    p = BallPoint(np.array([0.6 + 0.0j, 0.0 + 0.0j]))
    assert p.n == 2
    assert math.isclose(p.abs, 0.6, abs_tol=EXACT_TOL)
