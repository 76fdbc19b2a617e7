"""Polynomials, JSON round trip, level functions, and the maximizer."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chball.holo import (
    PolynomialFunction,
    LevelFunction,
    poly_to_json,
    poly_from_json,
    save_poly,
    load_poly,
)
from chball.holo import test_family as make_family

EVAL_TOL = 1e-13
GRAD_TOL = 5e-6
MAX_TOL = 5e-9


def _rand_points(n, m=32, seed=1, rmax=0.9):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    Z *= (rng.uniform(0.05, rmax, m) / np.linalg.norm(Z, axis=1))[:, None]
    return Z


def test_polynomial_evaluate_against_direct():
    f = PolynomialFunction(2, {(0, 0): 1.0 - 2.0j, (1, 0): 0.5, (2, 1): 3.0j})
    Z = _rand_points(2)
    direct = (1.0 - 2.0j) + 0.5 * Z[:, 0] + 3.0j * Z[:, 0] ** 2 * Z[:, 1]
    assert np.max(np.abs(f.evaluate(Z) - direct)) < EVAL_TOL


def test_polynomial_merges_and_drops_zero_terms():
    f = PolynomialFunction(1, {(1,): 1.0, (0,): 0.0})
    assert (0,) not in f.terms
    g = PolynomialFunction(1, {(2,): 1.0 + 1.0j})
    h = g + g.scaled(-1.0)
    assert h.terms == {}
    assert np.all(h.evaluate(_rand_points(1)) == 0.0)


def test_partial_derivative_exact():
    f = PolynomialFunction(2, {(2, 1): 2.0, (0, 3): 1.0j})
    fx = f.partial(0)
    assert fx.terms == {(1, 1): 4.0 + 0.0j}
    fy = f.partial(1)
    assert fy.terms == {(2, 0): 2.0 + 0.0j, (0, 2): 3.0j}


def test_dilate_scales_coefficients_by_degree():
    f = PolynomialFunction(1, {(0,): 1.0, (1,): 2.0, (3,): -1.0})
    g = f.dilate(0.5)
    assert g.terms[(0,)] == 1.0
    assert g.terms[(1,)] == 1.0
    assert g.terms[(3,)] == -0.125
    with pytest.raises(ValueError):
        f.dilate(1.5)


def test_json_round_trip_is_exact_and_stable(tmp_path):
    f = PolynomialFunction(2, {(1, 0): 0.25 - 1.5j, (0, 2): 3.0, (2, 2): -1e-9j})
    doc = poly_to_json(f)
    g = poly_from_json(doc)
    assert g.n == f.n and g.terms == f.terms
    p = tmp_path / "poly.json"
    save_poly(f, p)
    h = load_poly(p)
    assert h.terms == f.terms
    # serialized form is deterministic
    save_poly(h, tmp_path / "poly2.json")
    assert (tmp_path / "poly.json").read_bytes() == (tmp_path / "poly2.json").read_bytes()


def test_json_malformed_rejected():
    with pytest.raises(ValueError):
        poly_from_json({"n": 1})
    with pytest.raises(ValueError):
        poly_from_json({"n": 1, "terms": [{"exponents": [0]}]})


def test_level_function_values():
    f = PolynomialFunction.coordinate(0, 2)
    u = LevelFunction(f=f, a=2.0, b=1.0)
    Z = _rand_points(2, seed=3)
    r2 = np.sum(np.abs(Z) ** 2, axis=1)
    expected = np.abs(Z[:, 0]) ** 2 * (1 - r2)
    assert np.max(np.abs(u.evaluate(Z) - expected)) < EVAL_TOL


def test_level_function_rejects_bad_exponents():
    f = PolynomialFunction.constant(1.0, 1)
    with pytest.raises(ValueError):
        LevelFunction(f=f, a=0.0, b=1.0)
    with pytest.raises(ValueError):
        LevelFunction(f=f, a=1.0, b=-0.5)


def test_level_gradient_matches_finite_differences():
    f = PolynomialFunction(2, {(1, 0): 1.0, (0, 2): 0.5 - 0.25j, (0, 0): 0.3})
    u = LevelFunction(f=f, a=1.7, b=0.9)
    Z = _rand_points(2, m=16, seed=5, rmax=0.8)
    G = u.gradient(Z)
    from chball.geometry import finite_difference_gradient

    G_fd = finite_difference_gradient(u.evaluate, Z)
    assert np.max(np.abs(G - G_fd)) < GRAD_TOL


def test_level_gradient_finite_at_zero_of_f():
    # u = |z|^2 (1-|z|^2): gradient at 0 exists and is 0
    f = PolynomialFunction.coordinate(0, 1)
    u = LevelFunction(f=f, a=2.0, b=1.0)
    G = u.gradient(np.zeros((1, 1), dtype=complex))
    assert np.all(np.isfinite(G))
    assert np.max(np.abs(G)) < 1e-8


def test_max_value_radial_oracle():
    # u = |z1|^a (1-|z|^2)^b peaks at r^2 = a/(a+2b) on the z1-axis
    for n in [1, 2]:
        for a, b in [(2.0, 1.0), (1.0, 2.5), (3.0, 0.5)]:
            u = LevelFunction(f=PolynomialFunction.coordinate(0, n), a=a, b=b)
            r2 = a / (a + 2 * b)
            exact = r2 ** (a / 2) * (1 - r2) ** b
            assert math.isclose(u.max_value(), exact, rel_tol=MAX_TOL)


def test_max_value_constant_poly():
    u = LevelFunction(f=PolynomialFunction.constant(2.0, 2), a=1.0, b=1.0)
    assert math.isclose(u.max_value(), 2.0, rel_tol=MAX_TOL)
    assert np.linalg.norm(u.argmax()) < 1e-4


def test_support_radius_certifies_threshold():
    f = PolynomialFunction(1, {(0,): 0.5, (2,): 0.5})
    u = LevelFunction(f=f, a=1.0, b=2.0)
    thr = 1e-6
    r = u.support_radius_for(thr)
    assert 0 < r < 1
    # on a dense shell just outside r the value must be below thr
    rr = np.linspace(r, 1 - 1e-9, 200)
    vals = u.evaluate(rr[:, None].astype(complex))
    assert np.all(vals <= thr * (1 + 1e-12))


@settings(max_examples=25)
@given(st.floats(min_value=0.1, max_value=3.0), st.floats(min_value=0.1, max_value=3.0))
def test_support_radius_value_hits_threshold(a, b):
    f = PolynomialFunction.constant(1.0, 1)
    u = LevelFunction(f=f, a=a, b=b)
    r = u.support_radius_for(0.25)
    if r > 0:
        val = (1 - r * r) ** b
        assert math.isclose(val, 0.25, rel_tol=1e-9)


def test_family_constants_and_coordinates():
    cs = make_family("constants", n=3)
    assert len(cs) == 1 and cs[0].terms == {(0, 0, 0): 1.0 + 0.0j}
    zs = make_family("coordinates", n=2)
    assert [f.terms for f in zs] == [{(1, 0): 1.0 + 0.0j}, {(0, 1): 1.0 + 0.0j}]


def test_family_random_poly_deterministic():
    f1 = make_family("random_poly", n=2, seed=9, degree=2, count=3)
    f2 = make_family("random_poly", n=2, seed=9, degree=2, count=3)
    assert [p.terms for p in f1] == [p.terms for p in f2]
    f3 = make_family("random_poly", n=2, seed=10, degree=2, count=3)
    assert [p.terms for p in f3] != [p.terms for p in f1]
    for p in f1:
        assert p.degree <= 2
        assert all(abs(c) <= 1.0 + 1e-12 for c in p.terms.values())


def test_family_dilates_and_validation():
    ds = make_family("dilates", n=1, lambdas=(0.5,))
    assert len(ds) == 1
    with pytest.raises(ValueError):
        make_family("dilates", n=1, lambdas=(1.0,))
    with pytest.raises(ValueError):
        make_family("no_such_family", n=1)
