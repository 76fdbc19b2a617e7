"""Sharp-constant values, isoperimetric margins, and inequality checks.

Closed-form anchors: B(1,1) = 1, the p -> 1 Sobolev limit 2n, the
radial-optimizer cross-check of S(2, 3/2), the Beta prefactor
Gamma(1/3)^2 / (2 Gamma(2/3)) of the supremum regime, and the exact
Hardy values for the indicator and exponential profiles.
"""

import math

import numpy as np
import pytest
from scipy import integrate as sci
from scipy.special import gammaln

from chball.holo import PolynomialFunction, LevelFunction
from chball.integrate import McConfig
from chball.rearrange import truncate_level_function
from chball.inequalities import (
    ORDERING_TOL,
    beta_function,
    sobolev_constant,
    sup_norm_prefactor,
    ell_integral_check,
    sup_representation_check,
    isoperimetric_model_check,
    isoperimetric_refined_check,
    sobolev_check,
    weighted_hardy_check,
    hardy_sharpness_probe,
    kalaj_lemma_check,
)

CFG = McConfig(seed=77, sphere_samples=2048, radial_nodes=64)


def truncated(n, f=None, a=2.0, b=1.0, t_cut=None):
    base = f if f is not None else PolynomialFunction.constant(1.0, n)
    w = LevelFunction(base, a, b)
    if t_cut is None:
        return truncate_level_function(w)
    return truncate_level_function(w, t_cut=t_cut)


# ----------------------------------------------------------------------
# special functions and constants
# ----------------------------------------------------------------------

def test_beta_function_values():
    assert beta_function(1.0, 1.0) == 1.0
    assert abs(beta_function(0.5, 0.5) - math.pi) < 1e-12
    with pytest.raises(ValueError):
        beta_function(0.0, 1.0)


def test_sobolev_constant_limit_and_domain():
    for m in (2, 4, 6):
        assert sobolev_constant(m, 1) == float(m)
        gaps = [abs(sobolev_constant(m, 1.0 + e) - m)
                for e in (1e-6, 1e-8, 1e-10)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert abs(sobolev_constant(m, 1.0 + 1e-11) - m) < 1e-8
    with pytest.raises(ValueError):
        sobolev_constant(2, 2.0)
    with pytest.raises(ValueError):
        sobolev_constant(2, 0.5)
    with pytest.raises(ValueError):
        sobolev_constant(3, 1.5)


def test_sobolev_constant_matches_radial_optimizer():
    # m = 2, p = 3/2: the extremal profile is (1 + r^3)^(-1/3); the
    # ratio of seminorm to L^6 norm in unit-ball-volume measure must
    # reproduce the Gamma formula
    grad = 2.0 * math.pi * sci.quad(
        lambda r: (r ** 2 * (1.0 + r ** 3) ** (-4.0 / 3.0)) ** 1.5 * r,
        0.0, np.inf)[0]
    norm6 = 2.0 * math.pi * sci.quad(
        lambda r: (1.0 + r ** 3) ** -2.0 * r, 0.0, np.inf)[0]
    ratio = grad ** (2.0 / 3.0) / norm6 ** (1.0 / 6.0) / math.sqrt(math.pi)
    assert abs(ratio - sobolev_constant(2, 1.5)) < 1e-10


def test_sup_norm_prefactor_value():
    exact = math.gamma(1.0 / 3.0) ** 2 / (2.0 * math.gamma(2.0 / 3.0))
    assert abs(sup_norm_prefactor(1, 4.0) - exact) < 1e-12
    assert abs(exact - 2.6497) < 3e-4
    with pytest.raises(ValueError):
        sup_norm_prefactor(1, 2.0)


def test_ell_integral_matches_beta_closed_form():
    for n, p in [(1, 3.0), (1, 4.0), (2, 5.0), (2, 4.5)]:
        rep = ell_integral_check(n, p)
        assert rep["passed"] and rep["rel_error"] <= 1e-8
    with pytest.raises(ValueError):
        ell_integral_check(1, 2.0)


def test_sup_representation_random_spot_checks():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b = rng.uniform(0.1, 5.0, 2)
        alpha = rng.uniform(0.05, 0.95)
        rep = sup_representation_check(a, b, alpha)
        assert rep["passed"]
        assert rep["gap"] <= 1e-10 * rep["exact"]
    with pytest.raises(ValueError):
        sup_representation_check(1.0, 1.0, 1.5)
    with pytest.raises(ValueError):
        sup_representation_check(-1.0, 1.0, 0.5)


# ----------------------------------------------------------------------
# isoperimetric margins for geodesic balls
# ----------------------------------------------------------------------

def test_isoperimetric_model_margins():
    rep = isoperimetric_model_check([1e-3, 1e-2, 0.1, 1.0, 2.0], 1)
    assert rep["passed"]
    rel = rep["relative_margin"]
    assert all(x >= 0.0 for x in rel)
    assert rel == sorted(rel)  # grows with rho, vanishes at 0
    assert rel[0] < 1e-5
    # exact value of the relative margin for geodesic balls
    assert abs(rel[3] - (1.0 - math.cosh(1.0) ** -2)) < 1e-12
    rep = isoperimetric_model_check(np.linspace(0.1, 2.0, 20), 2)
    assert rep["passed"]
    assert min(rep["relative_margin"]) > 0.0
    with pytest.raises(ValueError):
        isoperimetric_model_check([0.0, 1.0], 1)


def test_isoperimetric_refined_identity():
    for n in (1, 2, 3):
        rep = isoperimetric_refined_check(np.linspace(0.05, 3.0, 50), n)
        assert rep["passed"] and rep["worst"] <= 1e-12
    assert isoperimetric_refined_check([0.7], 3)["worst"] <= 1e-12
    assert abs(math.sinh(2.0) ** 2
               - 4.0 * (math.sinh(1.0) ** 2 + math.sinh(1.0) ** 4)) < 1e-12


# ----------------------------------------------------------------------
# the Sobolev family on truncated level functions
# ----------------------------------------------------------------------

def test_sobolev_family_battery():
    u1 = truncated(1, t_cut=0.2)
    u1n = truncated(1, f=PolynomialFunction.coordinate(0, 1)
                    + PolynomialFunction.constant(0.5, 1))
    u2 = truncated(2, t_cut=0.2)
    u2n = truncated(2, f=PolynomialFunction.coordinate(0, 2), t_cut=0.025)
    battery = [
        (u1, "I", 1.0), (u1, "II", 1.5), (u1, "IV", 4.0),
        (u1n, "I", 1.0),
        (u2, "III", 2.0), (u2, "III", 3.0), (u2, "IV", 5.0),
        (u2n, "III", 2.0),
    ]
    for u, regime, p in battery:
        rep = sobolev_check(u, p, regime, CFG)
        assert rep["passed"], rep
        # the battery stays far from the extremal configurations
        assert rep["margin"] > 0.05 * max(abs(rep["lhs"]), abs(rep["rhs"]))


def test_sobolev_regime_validation():
    u = truncated(1, t_cut=0.2)
    for p, regime in [(2.0, "I"), (2.5, "II"), (2.0, "III"), (1.5, "IV")]:
        with pytest.raises(ValueError):
            sobolev_check(u, p, regime, CFG)
    with pytest.raises(ValueError):
        sobolev_check(u, 2.0, "V", CFG)


# ----------------------------------------------------------------------
# weighted Hardy inequality
# ----------------------------------------------------------------------

def test_weighted_hardy_indicator_closed_forms():
    rep = weighted_hardy_check(lambda x: 1.0 if 0.0 < x < 1.0 else 0.0,
                               2.0, 2.0, x_max=1.0)
    assert abs(rep["lhs"] - 4.0 / 3.0) < 1e-10
    assert abs(rep["rhs"] - 1.0 / 3.0) < 1e-10
    assert rep["averaging"] == "tail"
    assert rep["passed"]


def test_weighted_hardy_exponential_closed_forms():
    rep = weighted_hardy_check(lambda x: math.exp(-x), 2.0, 1.5)
    lhs_exact = 16.0 * math.gamma(2.5) / 2.0 ** 2.5
    rhs_exact = math.gamma(0.5) / 2.0 ** 0.5
    assert abs(rep["lhs"] - lhs_exact) < 1e-8
    assert abs(rep["rhs"] - rhs_exact) < 1e-8
    assert rep["passed"]


def test_weighted_hardy_validation():
    f = lambda x: 1.0
    with pytest.raises(ValueError):
        weighted_hardy_check(f, 1.0, 2.0, x_max=1.0)
    with pytest.raises(ValueError):
        weighted_hardy_check(f, 2.0, 1.0, x_max=1.0)
    with pytest.raises(ValueError):  # f^p x^eps not integrable on (0, inf)
        weighted_hardy_check(f, 2.0, 2.0)


def test_hardy_sharpness_probe_near_equality():
    rep = hardy_sharpness_probe(2.0, 2.0, 1e-3)
    assert rep["passed"]
    assert abs(rep["ratio"] - 1.0) < 0.05
    assert rep["quad_vs_closed"] < 1e-10
    assert rep["lhs"] >= rep["rhs"]
    rep = hardy_sharpness_probe(1.5, 1.2, 1e-3)
    assert rep["passed"] and abs(rep["ratio"] - 1.0) < 0.05
    with pytest.raises(ValueError):
        hardy_sharpness_probe(2.0, 2.0, 0.6)  # delta outside (0, (eps+1-p)/p)


# ----------------------------------------------------------------------
# ordered-integral comparison lemma
# ----------------------------------------------------------------------

def test_comparison_lemma_constant_profile_is_equality():
    rep = kalaj_lemma_check(lambda x: max(x - 1.0, 0.0), lambda t: t,
                            lambda t: 1.0, 2.0)
    assert abs(rep["scale"] - 1.0) < 1e-10
    assert abs(rep["margin"]) <= ORDERING_TOL
    assert rep["passed"]


def test_comparison_lemma_decreasing_profiles():
    rep = kalaj_lemma_check(lambda x: max(x - 1.0, 0.0), lambda t: t,
                            lambda t: 1.0 - 0.5 * t, 2.0)
    assert rep["passed"] and rep["margin"] > 0.01
    assert abs(rep["normalization_residual"]) <= ORDERING_TOL
    rep = kalaj_lemma_check(lambda x: x * x, lambda t: t * t,
                            lambda t: 1.2 - 0.4 * t, 3.0)
    assert rep["passed"] and rep["margin"] > 0.01


def test_comparison_lemma_errors():
    with pytest.raises(ValueError):  # reference integral diverges
        kalaj_lemma_check(lambda x: x * x, lambda t: t,
                          lambda t: 1.0 - 0.5 * t, 2.0)
    with pytest.raises(ValueError):  # calibrated side diverges
        kalaj_lemma_check(lambda x: x, lambda t: t,
                          lambda t: 1.0 / t, 2.0)
    with pytest.raises(ValueError):  # psi must increase
        kalaj_lemma_check(lambda x: x, lambda t: 1.0 - t,
                          lambda t: 1.0, 2.0)
    with pytest.raises(ValueError):  # g must decrease
        kalaj_lemma_check(lambda x: x, lambda t: t,
                          lambda t: 1.0 + t, 2.0)
    with pytest.raises(ValueError):  # g must be positive
        kalaj_lemma_check(lambda x: x, lambda t: t,
                          lambda t: -1.0, 2.0)
