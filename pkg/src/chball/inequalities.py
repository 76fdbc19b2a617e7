"""Sharp constants and inequality checkers on the hyperbolic ball.

The module collects the closed special-function constants (the
Aubin-Talenti constant in the unit-volume measure convention, Beta
values, the weight integral behind the supremum embedding) and the
checkers that exercise the inequalities at desk scale: isoperimetric
margins for geodesic balls, the four-regime Sobolev family, a weighted
Hardy inequality with tail averaging, and an ordered-integral
comparison lemma for nonincreasing profiles.

Statistical checks report a margin together with a propagated standard
error; the error of a combination is bounded by the triangle
inequality (sum of |sensitivity| * stderr), which is valid regardless
of correlations between estimates sharing sample directions.
"""

import math
import warnings

import numpy as np
from scipy import integrate as sci
from scipy.optimize import brentq
from scipy.special import gammaln

from .integrate import McConfig, integrate_ball_hyperbolic
from .geometry import geodesic_ball_volume, geodesic_sphere_area
from .rearrange import TruncatedLevelFunction

# pure-quadrature orderings hold up to this absolute/relative slack
ORDERING_TOL = 1e-8
# closed-form algebraic identities
ANALYTIC_RTOL = 1e-12
# supremum representation spot checks
SUP_REP_TOL = 1e-10
# relative floor added to 3 sigma in the Sobolev margins; covers the
# deterministic radial-quadrature error when the statistical spread
# degenerates (radial integrands give identical per-direction values)
MARGIN_FLOOR = 1e-9

_QUAD = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


# ----------------------------------------------------------------------
# special functions
# ----------------------------------------------------------------------

def beta_function(a: float, b: float) -> float:
    """Euler Beta B(a, b) for positive arguments, in log space."""
    if not (a > 0 and b > 0):
        raise ValueError("Beta arguments must be positive")
    return math.exp(gammaln(a) + gammaln(b) - gammaln(a + b))


def sobolev_constant(m: int, p: float) -> float:
    """Sharp constant of the Euclidean Sobolev inequality on R^m.

    Convention: Lebesgue measure normalized so the unit ball has
    volume one, matching the unit-volume measure used for the ball
    integrals.  Under this normalization the p -> 1 limit is exactly
    m, consistent with the m^2 = 4n^2 constant of the refined
    isoperimetric identity.  For 1 < p < m,

        S(m, p) = m^(1/p) ((m-p)/(p-1))^(1-1/p)
                  * (Gamma(m/p) Gamma(1+m-m/p) / Gamma(m))^(1/m),

    evaluated in log space.
    """
    if not (isinstance(m, (int, np.integer)) and m >= 2 and m % 2 == 0):
        raise ValueError("m must be an even integer >= 2 (real dimension)")
    if not (1 <= p < m):
        raise ValueError("the Sobolev exponent requires 1 <= p < m")
    if p == 1:
        return float(m)
    log_s = (
        math.log(m) / p
        + (1.0 - 1.0 / p) * math.log((m - p) / (p - 1.0))
        + (gammaln(m / p) + gammaln(1.0 + m - m / p) - gammaln(m)) / m
    )
    return math.exp(log_s)


def _beta_exponents(n: int, p: float) -> tuple:
    """Beta arguments (P, Q) of the supremum-regime prefactor."""
    P = n - (2 * n - 1) * p / (2.0 * (p - 1.0))
    Q = n / (p - 1.0)
    return P, Q


def sup_norm_prefactor(n: int, p: float) -> float:
    """Constant (1/2) B(P, Q) multiplying the gradient seminorm when
    p exceeds the real dimension 2n."""
    if not p > 2 * n:
        raise ValueError("the supremum regime requires p > 2n")
    P, Q = _beta_exponents(n, p)
    return 0.5 * beta_function(P, Q)


def ell_integral_check(n: int, p: float) -> dict:
    """Verify int_0^inf ell(s)^(-p/(p-1)) ds = n B(P, Q) by quadrature.

    ell(s) = s^((2n-1)/(2n)) (1 + s^(1/n))^(1/2) is the isoperimetric
    weight in volume coordinates.  The substitution u = s^(1/n) turns
    the integral into the literal Beta integrand n u^(P-1) (1+u)^-(P+Q),
    which converges exactly when p > 2n.
    """
    if not p > 2 * n:
        raise ValueError("the weight integral converges only for p > 2n")
    P, Q = _beta_exponents(n, p)
    exact = n * beta_function(P, Q)

    def integrand(u):
        return n * u ** (P - 1.0) * (1.0 + u) ** -(P + Q)

    head, _ = sci.quad(integrand, 0.0, 1.0, **_QUAD)
    tail, _ = sci.quad(integrand, 1.0, np.inf, **_QUAD)
    value = head + tail
    rel = abs(value - exact) / exact
    return {"n": n, "p": p, "quadrature": value, "exact": exact,
            "rel_error": rel, "passed": bool(rel <= ORDERING_TOL)}


def sup_representation_check(a: float, b: float, alpha: float,
                             points: int = 2001) -> dict:
    """(a+b)^alpha = sup over t in [0,1] of t^(1-a) a^a + (1-t)^(1-a) b^a.

    The supremum is attained at t* = a/(a+b); the identity there is
    algebraic and must hold to SUP_REP_TOL, while a grid scan confirms
    no larger value occurs elsewhere.
    """
    if not (a > 0 and b > 0 and 0 < alpha < 1):
        raise ValueError("need a, b > 0 and alpha in (0, 1)")
    exact = (a + b) ** alpha

    def value(t):
        return (t ** (1.0 - alpha) * a ** alpha
                + (1.0 - t) ** (1.0 - alpha) * b ** alpha)

    t_star = a / (a + b)
    at_maximizer = value(t_star)
    grid = np.linspace(0.0, 1.0, points)
    grid_max = float(np.max(value(grid)))
    gap = abs(at_maximizer - exact)
    overshoot = grid_max - exact
    passed = gap <= SUP_REP_TOL * exact and overshoot <= SUP_REP_TOL * exact
    return {"a": a, "b": b, "alpha": alpha, "exact": exact,
            "at_maximizer": at_maximizer, "grid_max": grid_max,
            "gap": gap, "passed": bool(passed)}


# ----------------------------------------------------------------------
# isoperimetric checks for geodesic balls
# ----------------------------------------------------------------------

def isoperimetric_model_check(rho_grid, n: int) -> dict:
    """Margin of per^(2n) >= C vol^(2n-1) on geodesic balls.

    C is the value of the same ratio for the Euclidean unit ball of
    R^(2n) in unnormalized Lebesgue measure (vol = pi^n/n!, surface
    2 pi^n/(n-1)!), so the hyperbolic quantities are scaled to the
    Lebesgue convention as well.  The comparison runs in log space;
    the reported relative margin 1 - rhs/lhs tends to zero as rho -> 0
    because small balls are asymptotically Euclidean.
    """
    rho = np.atleast_1d(np.asarray(rho_grid, dtype=float))
    if np.any(rho <= 0):
        raise ValueError("geodesic radii must be positive")
    omega = math.pi ** n / math.factorial(n)
    vol_e = omega
    per_e = 2.0 * n * omega
    log_c = 2 * n * math.log(per_e) - (2 * n - 1) * math.log(vol_e)
    log_lhs = 2 * n * np.log(omega * geodesic_sphere_area(rho, n))
    log_rhs = log_c + (2 * n - 1) * np.log(omega * geodesic_ball_volume(rho, n))
    rel_margin = -np.expm1(log_rhs - log_lhs)
    with np.errstate(over="ignore"):
        margin = np.exp(log_lhs) * rel_margin
    passed = bool(np.all(rel_margin >= -ANALYTIC_RTOL))
    return {"n": n, "rho": rho.tolist(), "margin": margin.tolist(),
            "relative_margin": rel_margin.tolist(),
            "constant": math.exp(log_c), "passed": passed}


def isoperimetric_refined_check(rho_grid, n: int) -> dict:
    """Exact identity per^2 = 4n^2 (V^((2n-1)/n) + V^2) on geodesic balls."""
    rho = np.atleast_1d(np.asarray(rho_grid, dtype=float))
    if np.any(rho <= 0):
        raise ValueError("geodesic radii must be positive")
    vol = geodesic_ball_volume(rho, n)
    per = geodesic_sphere_area(rho, n)
    lhs = per ** 2
    rhs = 4.0 * n * n * (vol ** ((2 * n - 1) / n) + vol ** 2)
    rel = np.abs(lhs - rhs) / lhs
    worst = float(np.max(rel))
    return {"n": n, "rho": rho.tolist(), "rel_error": rel.tolist(),
            "worst": worst, "passed": bool(worst <= ANALYTIC_RTOL)}


# ----------------------------------------------------------------------
# the Sobolev family
# ----------------------------------------------------------------------

REGIMES = ("I", "II", "III", "IV")


def _require_regime(regime: str, p: float, n: int):
    m = 2 * n
    if regime == "I":
        ok = p == 1.0
        need = "p = 1"
    elif regime == "II":
        ok = 1.0 < p < 2.0
        need = "1 < p < 2"
    elif regime == "III":
        ok = n >= 2 and 2.0 <= p < m
        need = "n >= 2 and 2 <= p < 2n"
    elif regime == "IV":
        ok = p > m
        need = "p > 2n"
    else:
        raise ValueError(f"unknown regime {regime!r}; expected one of "
                         f"{', '.join(REGIMES)}")
    if not ok:
        raise ValueError(
            f"regime {regime} requires {need}; got p = {p}, n = {n}")


def sobolev_check(u: TruncatedLevelFunction, p: float, regime: str,
                  cfg: McConfig) -> dict:
    """Check one regime of the sharp hyperbolic Sobolev family on u.

    All integrals run against the unit-volume hyperbolic measure with
    the Bergman gradient.  The checked displays, with S = the
    normalized Aubin-Talenti constant and m = 2n:

      I    (int |grad u|)^2  >=  m^2 ||u||_{m/(m-1)}^2 + m^2 ||u||_1^2
      II   int |grad u|^p    >=  (S^2 ||u||_q^2 + (m/p)^2 ||u||_p^2)^(p/2)
      III  int |grad u|^p    >=  S^p ||u||_q^q*(m-p)/m... (see code)
      IV   (1/2) B(P, Q) (int |grad u|^p)^(1/p)  >=  sup u

    with q = mp/(m-p) in II and III.  The margin is lhs - rhs with lhs
    the gradient side; passed means margin >= -(3 stderr + floor).
    """
    n = u.n
    m = 2 * n
    _require_regime(regime, p, n)
    grad = integrate_ball_hyperbolic(u.gradient_energy_field(p), cfg)

    if regime == "I":
        ex = m / (m - 1.0)
        a_est = integrate_ball_hyperbolic(u.power_field(ex), cfg)
        b_est = integrate_ball_hyperbolic(u.power_field(1.0), cfg)
        lhs = grad.value ** 2
        rhs = (m * m * a_est.value ** ((m - 1.0) / n)
               + m * m * b_est.value ** 2)
        stderr = (2.0 * grad.value * grad.stderr
                  + m * m * ((m - 1.0) / n)
                  * a_est.value ** ((m - 1.0) / n - 1.0) * a_est.stderr
                  + 2.0 * m * m * b_est.value * b_est.stderr)
    elif regime in ("II", "III"):
        q = m * p / (m - p)
        s_const = sobolev_constant(m, p)
        c = m / p
        aq = integrate_ball_hyperbolic(u.power_field(q), cfg)
        ap = integrate_ball_hyperbolic(u.power_field(p), cfg)
        lhs = grad.value
        if regime == "II":
            nq2 = aq.value ** (2.0 / q)
            np2 = ap.value ** (2.0 / p)
            base = s_const ** 2 * nq2 + c ** 2 * np2
            rhs = base ** (p / 2.0)
            d_base = (p / 2.0) * base ** (p / 2.0 - 1.0)
            stderr = (grad.stderr
                      + d_base * s_const ** 2 * (2.0 / q)
                      * aq.value ** (2.0 / q - 1.0) * aq.stderr
                      + d_base * c ** 2 * (2.0 / p)
                      * ap.value ** (2.0 / p - 1.0) * ap.stderr)
        else:
            ex = (m - p) / m
            rhs = s_const ** p * aq.value ** ex + c ** p * ap.value
            stderr = (grad.stderr
                      + s_const ** p * ex * aq.value ** (ex - 1.0) * aq.stderr
                      + c ** p * ap.stderr)
    else:  # regime IV
        pref = sup_norm_prefactor(n, p)
        lhs = pref * grad.value ** (1.0 / p)
        rhs = u.sup_value
        stderr = pref * (1.0 / p) * grad.value ** (1.0 / p - 1.0) * grad.stderr

    margin = lhs - rhs
    scale = max(abs(lhs), abs(rhs))
    tol = 3.0 * stderr + MARGIN_FLOOR * scale
    return {"regime": regime, "p": p, "n": n, "lhs": lhs, "rhs": rhs,
            "margin": margin, "stderr": stderr, "tolerance": tol,
            "passed": bool(margin >= -tol)}


# ----------------------------------------------------------------------
# weighted Hardy inequality (tail averaging)
# ----------------------------------------------------------------------

def _checked_quad(fn, lo, hi, what: str) -> float:
    # all integrands passed here are nonnegative, so divergence shows
    # up either as a large reported error or as a negative value (the
    # infinite-interval transform continues polynomial growth to a
    # finite negative number with a vanishing error estimate)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sci.IntegrationWarning)
        value, abserr = sci.quad(fn, lo, hi, **_QUAD)
    bad = (not np.isfinite(value) or value < -1e-10
           or abserr > 1e-6 * max(abs(value), 1.0))
    if bad:
        raise ValueError(f"{what} diverges or fails to converge")
    return value


def _split_quad(fn, x_max, what: str) -> float:
    if math.isfinite(x_max) and x_max <= 1.0:
        return _checked_quad(fn, 0.0, x_max, what)
    return (_checked_quad(fn, 0.0, 1.0, what)
            + _checked_quad(fn, 1.0, x_max, what))


def weighted_hardy_check(f, p: float, eps: float,
                         x_max: float = math.inf) -> dict:
    """Tail-averaged weighted Hardy inequality on (0, x_max).

        (p/(eps+1-p))^p int f^p x^eps dx
            >= int (x^-1 int_x^xmax f dt)^p x^eps dx

    for p > 1 and eps > p - 1.  In this exponent range only the tail
    average has a finite right side (the head average over (0, x)
    diverges at infinity for any f with positive mass, which is why
    the classical statement pairs eps > p - 1 with tail averaging);
    the report records the averaging direction.  x_max must bound the
    support of f so the inner quadrature cannot miss it.
    """
    if not p > 1:
        raise ValueError("Hardy exponent requires p > 1")
    if not eps > p - 1:
        raise ValueError("weight exponent requires eps > p - 1")
    c_p = (p / (eps + 1.0 - p)) ** p

    lhs = c_p * _split_quad(lambda x: float(f(x)) ** p * x ** eps,
                            x_max, "the weighted f^p side")

    def tail_average(x):
        mass, _ = sci.quad(f, x, x_max, **_QUAD)
        return mass / x

    rhs = _split_quad(lambda x: tail_average(x) ** p * x ** eps,
                      x_max, "the averaged side")
    margin = lhs - rhs
    tol = ORDERING_TOL * max(abs(lhs), 1.0)
    return {"p": p, "eps": eps, "constant": c_p, "lhs": lhs, "rhs": rhs,
            "margin": margin, "averaging": "tail",
            "passed": bool(margin >= -tol)}


def hardy_sharpness_probe(p: float, eps: float, delta: float = 1e-3) -> dict:
    """Near-extremal Hardy family f = x^sigma on (0, 1).

    sigma = -(eps+1)/p + delta concentrates the mass at 0; both sides
    blow up like 1/delta and their ratio approaches 1.  The left side
    is exact; the right side is quadrature in u = -log x (where the
    integrand (1 - e^(-au))^p e^(-p delta u) stays bounded; powers of
    x itself would overflow across the ~1/delta decades carrying the
    mass) and is cross-checked against its closed Beta form.
    """
    if not p > 1:
        raise ValueError("Hardy exponent requires p > 1")
    if not eps > p - 1:
        raise ValueError("weight exponent requires eps > p - 1")
    a = (eps + 1.0) / p - 1.0 - delta
    if not 0 < delta < (eps + 1.0 - p) / p:
        raise ValueError("delta must lie in (0, (eps+1-p)/p)")
    c_p = (p / (eps + 1.0 - p)) ** p
    lhs = c_p / (p * delta)

    def integrand(u):
        return (-np.expm1(-a * u)) ** p * math.exp(-p * delta * u)

    value, _ = sci.quad(integrand, 0.0, np.inf, limit=400,
                        epsabs=1e-13, epsrel=1e-12)
    rhs = a ** -p * value
    closed = a ** -(p + 1.0) * beta_function(p * delta / a, p + 1.0)
    ratio = rhs / lhs
    tol = ORDERING_TOL * max(abs(lhs), 1.0)
    return {"p": p, "eps": eps, "delta": delta, "lhs": lhs, "rhs": rhs,
            "ratio": ratio, "closed_form": closed,
            "quad_vs_closed": abs(rhs - closed) / closed,
            "passed": bool(lhs - rhs >= -tol and abs(ratio - 1.0) <= 0.05)}


# ----------------------------------------------------------------------
# ordered-integral comparison for nonincreasing profiles
# ----------------------------------------------------------------------

def _validate_monotone(fn, grid, name: str, increasing: bool):
    vals = np.array([float(fn(x)) for x in grid])
    if np.any(vals < 0):
        raise ValueError(f"{name} must be nonnegative on its range")
    diffs = np.diff(vals)
    slack = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    good = diffs >= -slack if increasing else diffs <= slack
    if not np.all(good):
        word = "nondecreasing" if increasing else "nonincreasing"
        raise ValueError(f"{name} must be {word}")
    return vals


def kalaj_lemma_check(phi, psi, g, alpha: float) -> dict:
    """Ordering of Phi-means against the calibrated power profile.

    After rescaling g so that int_0^1 Phi(lambda g(t) / t^(1/alpha)) dt
    matches int_0^1 Phi(t^(-1/alpha)) dt, the Psi-weighted integral of
    the rescaled profile cannot exceed that of t^(-1/alpha):
    nonincreasing g concentrates the large values of lambda g / t^(1/a)
    at small t where the increasing weight Psi is smallest.

    phi and psi are nonnegative nondecreasing callables, g a positive
    nonincreasing callable on (0, 1).  Raises if the calibration has
    no solution (e.g. bounded phi with too small a range).
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    t_probe = np.linspace(1e-6, 1.0 - 1e-6, 513)
    g_vals = _validate_monotone(g, t_probe, "g", increasing=False)
    if np.any(g_vals <= 0):
        raise ValueError("g must be positive on (0, 1)")
    _validate_monotone(psi, t_probe, "psi", increasing=True)
    x_probe = np.sort(np.concatenate([t_probe ** (-1.0 / alpha),
                                      np.linspace(0.0, 2.0, 41)]))
    _validate_monotone(phi, x_probe, "phi", increasing=True)

    ref = _checked_quad(lambda t: float(phi(t ** (-1.0 / alpha))),
                        0.0, 1.0, "the reference Phi integral")

    def mismatch(lam):
        val = _checked_quad(
            lambda t: float(phi(lam * float(g(t)) * t ** (-1.0 / alpha))),
            0.0, 1.0, "the calibrated Phi integral")
        return val - ref

    lo = hi = 1.0
    for _ in range(80):
        if mismatch(lo) <= 0.0:
            break
        lo *= 0.5
    for _ in range(80):
        if mismatch(hi) >= 0.0:
            break
        hi *= 2.0
    if mismatch(lo) > 0.0 or mismatch(hi) < 0.0:
        raise ValueError("calibration failed: no scaling of g matches "
                         "the reference Phi integral")
    lam = brentq(mismatch, lo, hi, xtol=1e-15, rtol=8.9e-16)
    residual = mismatch(lam)
    if abs(residual) > ORDERING_TOL * max(ref, 1.0):
        raise ValueError("calibration failed: residual "
                         f"{residual:.3e} after root search")

    lhs = _checked_quad(
        lambda t: (float(phi(lam * float(g(t)) * t ** (-1.0 / alpha)))
                   * float(psi(t))),
        0.0, 1.0, "the weighted calibrated integral")
    rhs = _checked_quad(
        lambda t: float(phi(t ** (-1.0 / alpha))) * float(psi(t)),
        0.0, 1.0, "the weighted reference integral")
    margin = rhs - lhs
    tol = ORDERING_TOL * max(1.0, abs(rhs))
    return {"alpha": alpha, "scale": lam, "lhs": lhs, "rhs": rhs,
            "margin": margin, "normalization_residual": residual,
            "passed": bool(margin >= -tol)}
