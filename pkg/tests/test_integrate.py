"""Monte Carlo / quadrature engines: oracles, determinism, error bars."""

import math
import warnings

import numpy as np
import pytest
from scipy.special import beta as beta_fn

from chball.geometry import ScalarField
from chball.integrate import (
    BLOCK,
    McConfig,
    IntegralEstimate,
    direction_block,
    integrate_sphere,
    exact_sphere_monomial,
    integrate_ball,
    integrate_ball_weighted,
    integrate_ball_hyperbolic,
    integrate_ball_rejection,
    integrate_ball_stratified,
)

RADIAL_TOL = 1e-8     # deterministic radial rules, relative
EXACT_TOL = 1e-12
SIGMAS = 4.0          # statistical acceptance band


def _const_field(n):
    return ScalarField(n=n, evaluate=lambda Z: np.ones(Z.shape[0]))


def test_mcconfig_validation():
    with pytest.raises(ValueError):
        McConfig(seed=1, sphere_samples=8)
    with pytest.raises(ValueError):
        McConfig(seed=1, radial_nodes=4)
    with pytest.raises(ValueError):
        McConfig(seed=-3)


def test_estimate_validation():
    with pytest.raises(ValueError):
        IntegralEstimate(1.0, -1.0, 10, "exact")
    with pytest.raises(ValueError):
        IntegralEstimate(1.0, float("nan"), 10, "exact")


def test_direction_block_deterministic_and_normalized():
    A = direction_block(42, 3, 0)
    B = direction_block(42, 3, 0)
    assert np.array_equal(A, B)
    C = direction_block(42, 3, 1)
    assert not np.array_equal(A[: C.shape[0]], C)
    assert np.max(np.abs(np.linalg.norm(A, axis=1) - 1.0)) < 1e-12
    assert A.shape == (BLOCK, 3)


def test_exact_sphere_monomial_values():
    assert exact_sphere_monomial((1, 0), (1, 0), 2).value == 0.5
    assert exact_sphere_monomial((2, 1), (2, 1), 2).value == pytest.approx(1 / 12, rel=EXACT_TOL)
    assert exact_sphere_monomial((1,), (2,), 1).value == 0.0
    assert exact_sphere_monomial((3,), (3,), 1).value == pytest.approx(1.0, rel=EXACT_TOL)
    with pytest.raises(ValueError):
        exact_sphere_monomial((1,), (1, 0), 2)


def test_sphere_mc_matches_exact_monomial():
    cfg = McConfig(seed=101, sphere_samples=16384)
    for n, a in [(1, (2,)), (2, (1, 0)), (2, (1, 1))]:
        exact = exact_sphere_monomial(a, a, n).value
        phi = ScalarField(
            n=n,
            evaluate=lambda Z, a=a: np.prod(np.abs(Z) ** (2 * np.array(a)), axis=1),
        )
        est = integrate_sphere(phi, cfg)
        assert est.method == "monte_carlo"
        assert abs(est.value - exact) < SIGMAS * est.stderr + 1e-12


def test_sphere_rejects_complex_output():
    phi = ScalarField(n=1, evaluate=lambda Z: Z[:, 0])
    with pytest.raises(ValueError):
        integrate_sphere(phi, McConfig(seed=0, sphere_samples=32))


def test_ball_constant_exact():
    est = integrate_ball(_const_field(2), McConfig(seed=1, sphere_samples=64))
    assert est.value == pytest.approx(1.0, rel=EXACT_TOL)
    assert est.stderr < 1e-14


def test_ball_radial_monomial_exact():
    # int_B |z|^2 dv = n/(n+1); radial integrand has no direction noise
    for n in [1, 2, 3]:
        phi = ScalarField(n=n, evaluate=lambda Z: np.sum(np.abs(Z) ** 2, axis=1))
        est = integrate_ball(phi, McConfig(seed=2, sphere_samples=64))
        assert est.value == pytest.approx(n / (n + 1), rel=RADIAL_TOL)
        assert est.stderr < 1e-12


def test_ball_monomial_mc():
    # int_B |z1|^2 dv = 1/(n+1)
    n = 2
    phi = ScalarField(n=n, evaluate=lambda Z: np.abs(Z[:, 0]) ** 2)
    est = integrate_ball(phi, McConfig(seed=3, sphere_samples=16384))
    assert abs(est.value - 1 / (n + 1)) < SIGMAS * est.stderr


def test_weighted_constant_matches_beta():
    # int_B (1-|z|^2)^(q-1) dv = n B(n, q)
    for n in [1, 2]:
        for q in [0.01, 0.5, 1.0, 2.5]:
            est = integrate_ball_weighted(
                _const_field(n), exponent=q - 1.0, cfg=McConfig(seed=4, sphere_samples=64)
            )
            assert est.value == pytest.approx(n * beta_fn(n, q), rel=RADIAL_TOL)


def test_weighted_radial_polynomial():
    # int_B |z|^2 (1-|z|^2)^(q-1) dv = n B(n+1, q) (one extra power of x = r^2)
    n, q = 2, 0.75
    phi = ScalarField(n=n, evaluate=lambda Z: np.sum(np.abs(Z) ** 2, axis=1))
    est = integrate_ball_weighted(phi, exponent=q - 1.0, cfg=McConfig(seed=5, sphere_samples=64))
    exact = n * beta_fn(n + 1, q)
    assert est.value == pytest.approx(exact, rel=RADIAL_TOL)


def test_weighted_rejects_bad_exponent():
    with pytest.raises(ValueError):
        integrate_ball_weighted(_const_field(1), exponent=-1.0, cfg=McConfig(seed=0))


def test_hyperbolic_ball_indicator_exact():
    # geodesic ball of radius rho has hyperbolic volume sinh(rho)^(2n)
    for n, rho in [(1, 1.0), (2, 0.5), (2, 2.0)]:
        rc = math.tanh(rho)
        phi = ScalarField(
            n=n,
            evaluate=lambda Z, rc=rc: (np.linalg.norm(Z, axis=1) < rc).astype(float),
        )
        est = integrate_ball_hyperbolic(phi, McConfig(seed=6, sphere_samples=64))
        assert est.value == pytest.approx(math.sinh(rho) ** (2 * n), rel=1e-9)


def test_hyperbolic_smooth_radial_decay():
    # int (1-|z|^2)^4 dv_g over the n=1 ball = int_0^inf (1+s)^-4 ds = 1/3
    phi = ScalarField(n=1, evaluate=lambda Z: (1 - np.abs(Z[:, 0]) ** 2) ** 4)
    est = integrate_ball_hyperbolic(phi, McConfig(seed=7, sphere_samples=64))
    assert est.value == pytest.approx(1 / 3, rel=1e-8)


def test_hyperbolic_uses_certified_support_hint():
    rc = 0.6
    phi = ScalarField(
        n=1,
        evaluate=lambda Z: (np.abs(Z[:, 0]) < rc).astype(float),
        support_radius_hint=rc,
    )
    est = integrate_ball_hyperbolic(phi, McConfig(seed=8, sphere_samples=64))
    exact = rc * rc / (1 - rc * rc)
    assert est.value == pytest.approx(exact, rel=1e-12)


def test_hyperbolic_warns_when_not_decayed():
    with pytest.warns(RuntimeWarning):
        integrate_ball_hyperbolic(_const_field(1), McConfig(seed=9, sphere_samples=64))


def test_rejection_agrees_with_polar():
    n = 2
    phi = ScalarField(n=n, evaluate=lambda Z: np.abs(Z[:, 0]) ** 2)
    a = integrate_ball(phi, McConfig(seed=10, sphere_samples=16384))
    b = integrate_ball_rejection(phi, McConfig(seed=10, sphere_samples=16384))
    gap = abs(a.value - b.value)
    assert gap < SIGMAS * math.hypot(a.stderr, b.stderr)
    assert b.samples == 16384


def test_engines_bit_identical_on_rerun():
    n = 2
    phi = ScalarField(n=n, evaluate=lambda Z: np.abs(Z[:, 0] + 0.3) ** 2)
    cfg = McConfig(seed=11, sphere_samples=4096 + 17)
    for engine in [integrate_sphere, integrate_ball, integrate_ball_rejection]:
        e1 = engine(phi, cfg)
        e2 = engine(phi, cfg)
        assert (e1.value, e1.stderr, e1.samples) == (e2.value, e2.stderr, e2.samples)
    w1 = integrate_ball_weighted(phi, 0.5, cfg)
    w2 = integrate_ball_weighted(phi, 0.5, cfg)
    assert (w1.value, w1.stderr) == (w2.value, w2.stderr)


def test_direction_set_shared_across_sample_counts():
    # common random numbers: the first block does not depend on the budget
    A = direction_block(12, 2, 0)
    small = McConfig(seed=12, sphere_samples=100)
    phi = ScalarField(n=2, evaluate=lambda Z: np.abs(Z[:, 0]) ** 2)
    est_small = integrate_sphere(phi, small)
    manual = float(np.mean(np.abs(A[:100, 0]) ** 2))
    assert est_small.value == pytest.approx(manual, rel=1e-15)


def _ball_indicator(n, rho):
    rc = math.tanh(rho)
    return ScalarField(
        n=n,
        evaluate=lambda Z, rc=rc: (np.linalg.norm(Z, axis=1) < rc).astype(float),
        support_radius_hint=rc,
    )


def test_stratified_hyperbolic_volume_with_live_error_bar():
    # the stratified engine keeps a genuine (nonzero) Monte Carlo stderr
    # on radial integrands, unlike the polar rules, while its variance
    # stays small enough for sub-0.1% relative error at modest budgets
    for n, rho in [(1, 0.8), (1, 1.6), (2, 0.8), (2, 1.6)]:
        est = integrate_ball_stratified(
            _ball_indicator(n, rho), McConfig(seed=13, sphere_samples=20000)
        )
        exact = math.sinh(rho) ** (2 * n)
        assert est.stderr > 0.0
        assert abs(est.value - exact) <= SIGMAS * est.stderr
        assert est.stderr / est.value < 1e-3
        assert est.samples == 20000


def test_stratified_agrees_with_polar_on_nonradial_field():
    # smooth non-radial integrand with decay faster than the hyperbolic
    # weight: both engines target int phi dv_g
    n = 1
    phi = ScalarField(
        n=n,
        evaluate=lambda Z: np.abs(Z[:, 0] + 0.3) ** 2
        * (1.0 - np.sum(np.abs(Z) ** 2, axis=1)) ** 4,
    )
    a = integrate_ball_hyperbolic(phi, McConfig(seed=14, sphere_samples=4096))
    b = integrate_ball_stratified(phi, McConfig(seed=14, sphere_samples=40000))
    assert abs(a.value - b.value) < SIGMAS * math.hypot(a.stderr, b.stderr)


def test_stratified_bit_identical_and_validated():
    phi = _ball_indicator(2, 1.0)
    cfg = McConfig(seed=15, sphere_samples=5000)
    e1 = integrate_ball_stratified(phi, cfg)
    e2 = integrate_ball_stratified(phi, cfg)
    assert (e1.value, e1.stderr, e1.samples) == (e2.value, e2.stderr, e2.samples)
    with pytest.raises(ValueError):
        integrate_ball_stratified(phi, cfg, strata=0)
