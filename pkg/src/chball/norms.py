"""Hardy and weighted Bergman norms of holomorphic polynomials.

Normalizations: sigma is the uniform probability measure on the sphere,
and the weighted volume measure carries the constant
c_alpha = Gamma(alpha) / (n! Gamma(alpha - n)) that makes it a
probability measure on the ball for every alpha > n.  With these
choices ||1|| = 1 in every space, and as alpha decreases to n the
weighted norms of a fixed polynomial increase to its Hardy norm.

The layer coefficient k_alpha = alpha * c_alpha is the constant
appearing in the layer-cake form of the p = r * alpha weighted norm;
both closed forms are kept and cross-checked in the tests.

Monte Carlo estimates reuse the common direction streams from the
integrate module, so norm gaps between spaces are computed on shared
randomness and carry much smaller error than either norm alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, betaln

from .geometry import ScalarField
from .holo import PolynomialFunction
from .integrate import (
    IntegralEstimate,
    McConfig,
    exact_sphere_monomial,
    integrate_ball_weighted,
    integrate_sphere,
)

__all__ = [
    "SpaceParams",
    "bergman_coefficient",
    "layer_coefficient",
    "hardy_norm",
    "bergman_norm",
    "exact_hardy_norm_p2",
    "exact_bergman_norm_p2",
    "monomial_bergman_norm_1d",
    "pointwise_bound_check",
    "contraction_chain_check",
    "hardy_limit_check",
]

# deterministic floor added to 3-sigma statistical tolerances; radial
# integrands have no direction variance, so pure stderr would be zero
ABS_FLOOR = 1e-8


@dataclass(frozen=True)
class SpaceParams:
    """Parameters of a Hardy ('hardy', p) or weighted space ('bergman', p, alpha)."""

    kind: str
    p: float
    alpha: float = None

    def __post_init__(self):
        if self.kind not in ("hardy", "bergman"):
            raise ValueError("kind must be 'hardy' or 'bergman'")
        if not (self.p > 0):
            raise ValueError("exponent p must be positive")
        if self.kind == "bergman" and self.alpha is None:
            raise ValueError("weighted space needs alpha")


def bergman_coefficient(alpha: float, n: int) -> float:
    """c_alpha = Gamma(alpha) / (n! Gamma(alpha - n)), alpha > n."""
    if alpha <= n:
        raise ValueError("weight parameter alpha must exceed the dimension")
    return math.exp(gammaln(alpha) - gammaln(n + 1) - gammaln(alpha - n))


def layer_coefficient(alpha: float, n: int) -> float:
    """k_alpha = (alpha - n) Gamma(alpha+1) / (n! Gamma(alpha-n+1)).

    Equals alpha * c_alpha; kept in its own closed form because the
    layer-cake identities are stated with this constant.
    """
    if alpha <= n:
        raise ValueError("weight parameter alpha must exceed the dimension")
    return (alpha - n) * math.exp(gammaln(alpha + 1) - gammaln(n + 1) - gammaln(alpha - n + 1))


def _power_root(est: IntegralEstimate, p: float, scale: float = 1.0) -> IntegralEstimate:
    """(scale * est)^(1/p) with delta-method stderr."""
    m = scale * est.value
    if m <= 0:
        return IntegralEstimate(0.0, 0.0, est.samples, est.method)
    v = m ** (1.0 / p)
    se = scale * est.stderr * v / (p * m)
    return IntegralEstimate(v, se, est.samples, est.method)


def hardy_norm(f: PolynomialFunction, p: float, cfg: McConfig) -> IntegralEstimate:
    """||f||_{H^p} = (int_S |f|^p dsigma)^(1/p) for a polynomial."""
    if p <= 0:
        raise ValueError("exponent p must be positive")
    phi = ScalarField(n=f.n, evaluate=lambda Z: np.abs(f.evaluate(Z)) ** p)
    return _power_root(integrate_sphere(phi, cfg), p)


def bergman_norm(f: PolynomialFunction, p: float, alpha: float, cfg: McConfig) -> IntegralEstimate:
    """||f||_{A^p_alpha} with the probability normalization c_alpha."""
    if p <= 0:
        raise ValueError("exponent p must be positive")
    c = bergman_coefficient(alpha, f.n)
    phi = ScalarField(n=f.n, evaluate=lambda Z: np.abs(f.evaluate(Z)) ** p)
    raw = integrate_ball_weighted(phi, exponent=alpha - f.n - 1.0, cfg=cfg)
    return _power_root(raw, p, scale=c)


def exact_hardy_norm_p2(f: PolynomialFunction) -> float:
    """||f||_{H^2} from monomial orthogonality on the sphere."""
    total = 0.0
    for e, c in f.terms.items():
        total += abs(c) ** 2 * exact_sphere_monomial(e, e, f.n).value
    return math.sqrt(total)


def exact_bergman_norm_p2(f: PolynomialFunction, alpha: float) -> float:
    """||f||_{A^2_alpha} from orthogonality and radial Beta integrals."""
    n = f.n
    c = bergman_coefficient(alpha, n)
    total = 0.0
    for e, coefv in f.terms.items():
        k = sum(e)
        radial = n * math.exp(betaln(n + k, alpha - n))
        total += abs(coefv) ** 2 * c * radial * exact_sphere_monomial(e, e, n).value
    return math.sqrt(total)


def monomial_bergman_norm_1d(m: int, p: float, alpha: float) -> float:
    """||z^m||_{A^p_alpha} on the disk: ((alpha-1) B(mp/2+1, alpha-1))^(1/p)."""
    if m < 0 or p <= 0 or alpha <= 1:
        raise ValueError("need m >= 0, p > 0, alpha > 1")
    val = (alpha - 1.0) * math.exp(betaln(0.5 * m * p + 1.0, alpha - 1.0))
    return val ** (1.0 / p)


def pointwise_bound_check(
    f: PolynomialFunction, space: SpaceParams, z, cfg: McConfig
) -> dict:
    """Growth bound |f(z)| (1-|z|^2)^kappa <= ||f||, kappa = n/p or alpha/p.

    Returns the bound, the left side, the margin and its stderr-based
    tolerance; margin >= -tol counts as a pass.
    """
    z = np.asarray(z, dtype=complex)
    r2 = float(np.sum(np.abs(z) ** 2))
    if r2 >= 1.0:
        raise ValueError("evaluation point must lie inside the ball")
    if space.kind == "hardy":
        norm = hardy_norm(f, space.p, cfg)
        kappa = f.n / space.p
    else:
        norm = bergman_norm(f, space.p, space.alpha, cfg)
        kappa = space.alpha / space.p
    lhs = abs(complex(f.evaluate(z))) * (1.0 - r2) ** kappa
    tol = 3.0 * norm.stderr + ABS_FLOOR * (1.0 + norm.value)
    margin = norm.value - lhs
    return {
        "lhs": lhs,
        "norm": norm.value,
        "norm_stderr": norm.stderr,
        "margin": margin,
        "tolerance": tol,
        "passed": bool(margin >= -tol),
    }


def contraction_chain_check(
    f: PolynomialFunction, r: float, alphas, cfg: McConfig
) -> dict:
    """Chain ||f||_{A^{r a}_a} nonincreasing in a and dominated by ||f||_{H^{nr}}.

    alphas must be strictly decreasing toward n; all norms share the
    direction stream, so consecutive gaps are strongly correlated and
    the 3-sigma-plus-floor tolerance is conservative.
    """
    n = f.n
    alphas = [float(a) for a in alphas]
    if any(a <= n for a in alphas):
        raise ValueError("all alphas must exceed the dimension n")
    if any(a2 >= a1 for a1, a2 in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    h = hardy_norm(f, n * r, cfg)
    chain = [bergman_norm(f, r * a, a, cfg) for a in alphas]
    scale = 1.0 + h.value
    margins = []
    tolerances = []
    ok = True
    # domination by the Hardy norm, checked against the smallest alpha
    top = chain[-1]
    tolerances.append(3.0 * (h.stderr + top.stderr) + ABS_FLOOR * scale)
    margins.append(h.value - top.value)
    ok &= margins[0] >= -tolerances[0]
    for e1, e2 in zip(chain, chain[1:]):
        # larger alpha first: e1 has larger alpha, so e1 <= e2
        tolerances.append(3.0 * (e1.stderr + e2.stderr) + ABS_FLOOR * scale)
        margins.append(e2.value - e1.value)
        ok &= margins[-1] >= -tolerances[-1]
    return {
        "hardy": h,
        "alphas": alphas,
        "chain": chain,
        "margins": margins,
        "tolerances": tolerances,
        "passed": bool(ok),
    }


def hardy_limit_check(
    f: PolynomialFunction, r: float, alpha: float, cfg: McConfig, gap_tol: float = 5e-2
) -> dict:
    """Near alpha = n the weighted norm reproduces the Hardy norm.

    Compares ||f||_{A^{r alpha}_alpha} with ||f||_{H^{nr}}; passes when
    the relative gap is below gap_tol (plus the statistical allowance).
    Warns in the report when the Monte Carlo noise is comparable to the
    gap budget, since the verdict is then dominated by luck.
    """
    n = f.n
    h = hardy_norm(f, n * r, cfg)
    a = bergman_norm(f, r * alpha, alpha, cfg)
    scale = max(h.value, 1e-300)
    gap = abs(a.value - h.value) / scale
    noise = 3.0 * (h.stderr + a.stderr) / scale
    return {
        "hardy": h,
        "bergman": a,
        "alpha": alpha,
        "relative_gap": gap,
        "noise_level": noise,
        "noisy": bool(noise > 0.5 * gap_tol),
        "passed": bool(gap <= gap_tol + noise),
    }
