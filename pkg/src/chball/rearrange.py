"""Decreasing rearrangement and radial symmetrization on the unit ball.

The decreasing rearrangement of a nonnegative field u is the
generalized inverse of its distribution function: ustar(s) is the level
below which the superlevel volume exceeds s.  Composing ustar with the
hyperbolic volume of the centered geodesic ball gives the radial
symmetrization on the ball; composing it with the normalized Euclidean
ball volume ``|z|**(2n)`` gives the Euclidean symmetrization on C^n.

The module stores ustar as a piecewise-linear interpolant through the
measured (volume, level) knots.  That representation makes the two
radial Dirichlet integrals

    euclidean:  (2n)**p * int |ustar'(s)|**p * s**((2n-1)p/2n) ds
    hyperbolic: (2n)**p * int |ustar'(s)|**p * s**((2n-1)p/2n)
                                            * (1 + s**(1/n))**(p/2) ds

exact per segment up to ordinary quadrature of the smooth weights, and
it keeps the symmetrization-energy comparison deterministic on the
1-D side.  Compact support is manufactured by cutting level functions
at a fixed fraction of their maximum, which is what the preservation,
symmetrization-energy, and Sobolev checks consume.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .geometry import ScalarField, BallPoint, bergman_gradient_norm_batch, \
    volume_coordinate, radius_from_volume_coordinate
from .holo import LevelFunction, level_function_field
from .integrate import McConfig, IntegralEstimate, integrate_ball_hyperbolic
from .superlevel import DistributionFunction, default_t_grid, distribution_function, \
    GRID_POINTS, GRID_LO, GRID_TOP

# ----------------------------------------------------------------------
# tolerances and budgets
# ----------------------------------------------------------------------

TRUNCATION_FRACTION = 0.05   # default level cut as a fraction of the sup
SEGMENT_TAIL_CUTOFF = 1e-14  # drop rearrangement segments contributing less
PRESERVE_BUDGET = 1e-2       # relative allowance for ustar interpolation in L^q
EQUIMEASURE_BUDGET = 1e-2    # relative allowance off the rearrangement knots
ENERGY_BUDGET = 5e-3         # relative allowance in the Dirichlet comparison
SUPPORT_BUDGET = 5e-2        # relative envelope for the support-volume limit
IDENTITY_RTOL = 1e-4         # dual-quadrature agreement for the radial identities

_GL_X8, _GL_W8 = leggauss(8)
_GL_X16, _GL_W16 = leggauss(16)

_ANCHOR_NUDGE = 1e-12        # relative step merging a support anchor into a knot


# ----------------------------------------------------------------------
# the rearrangement profile
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DecreasingRearrangement:
    """Piecewise-linear nonincreasing profile ustar on [0, s_end].

    ``s_grid`` is strictly increasing and starts at 0; ``ustar`` holds
    the levels at the knots.  Evaluation beyond the last knot returns
    0, matching a compactly supported source field whose superlevel
    volumes the knots came from.
    """

    s_grid: np.ndarray
    ustar: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        v = np.asarray(self.ustar, dtype=float)
        if s.shape != v.shape or s.ndim != 1 or s.size < 1:
            raise ValueError("knot arrays must be matching 1-D arrays")
        if s[0] != 0.0:
            raise ValueError("the volume grid must start at 0")
        if s.size > 1 and np.any(np.diff(s) <= 0):
            raise ValueError("the volume grid must be strictly increasing")
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("levels must be nonnegative and nonincreasing")
        object.__setattr__(self, "s_grid", s)
        object.__setattr__(self, "ustar", v)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.interp(s, self.s_grid, self.ustar, right=0.0)
        return float(out) if out.ndim == 0 else out

    @property
    def sup_value(self) -> float:
        return float(self.ustar[0])

    @property
    def support_volume(self) -> float:
        """Volume coordinate of the last knot (the support when anchored)."""
        return float(self.s_grid[-1])

    def segments(self):
        """(s_lo, s_hi, slope) arrays of the linear pieces."""
        s = self.s_grid
        v = self.ustar
        if s.size < 2:
            empty = np.empty(0)
            return empty, empty.copy(), empty.copy()
        return s[:-1], s[1:], np.diff(v) / np.diff(s)

    def level_volume(self, t):
        """Exact superlevel volume of the profile: sup{s : ustar(s) > t}."""
        t = np.asarray(t, dtype=float)
        # ustar is nonincreasing, so interpolate on the reversed arrays
        out = np.interp(-t, -self.ustar, self.s_grid,
                        left=0.0, right=self.support_volume)
        out = np.where(t >= self.ustar[0], 0.0, out)
        return float(out) if out.ndim == 0 else out


def decreasing_rearrangement(
    dist: DistributionFunction, support_volume: float = None
) -> DecreasingRearrangement:
    """Generalized inverse of a distribution function as a knot profile.

    Knots are (mu_i, t_i) for the thresholds with positive measured
    volume, anchored at (0, t0).  Ties in mu (flat spots of the
    distribution) keep the largest level, which realizes the
    right-continuous sup-inverse.  When ``support_volume`` is given,
    the profile is anchored to zero there, so evaluation decays
    linearly over the unresolved sliver below the lowest threshold
    instead of stopping at it.
    """
    keep = dist.mu > 0
    if not np.any(keep):
        return DecreasingRearrangement(np.zeros(1), np.zeros(1))
    t = dist.t[keep]
    m = dist.mu[keep]
    # ascending volume = descending threshold; then the top anchor
    s_knots = [0.0]
    v_knots = [float(dist.t0)]
    for si, ti in zip(m[::-1], t[::-1]):
        if ti >= v_knots[-1]:
            continue  # below the sup anchor and strictly decreasing in level
        if si <= s_knots[-1]:
            continue  # tie in measured volume: the earlier (larger) level wins
        s_knots.append(float(si))
        v_knots.append(float(ti))
    if support_volume is not None:
        sv = float(support_volume)
        if sv <= s_knots[-1]:
            sv = s_knots[-1] * (1.0 + _ANCHOR_NUDGE) + _ANCHOR_NUDGE
        s_knots.append(sv)
        v_knots.append(0.0)
    return DecreasingRearrangement(np.array(s_knots), np.array(v_knots))


# ----------------------------------------------------------------------
# symmetrizations
# ----------------------------------------------------------------------

def hyperbolic_symmetrization(ustar: DecreasingRearrangement, z: BallPoint) -> float:
    """Radial symmetrization on the ball: ustar at the geodesic ball volume."""
    return float(ustar(volume_coordinate(z.abs, z.n)))


def euclidean_symmetrization(ustar: DecreasingRearrangement, z) -> float:
    """Euclidean symmetrization on C^n: ustar at the normalized ball volume.

    The argument may lie outside the unit ball; the normalized volume
    of the Euclidean ball of radius ``|z|`` is ``|z|**(2n)``.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("expected a single point of C^n")
    r2 = float(np.sum(np.abs(z) ** 2))
    return float(ustar(r2 ** z.size))


def symmetrized_field(ustar: DecreasingRearrangement, n: int) -> ScalarField:
    """Vectorized ScalarField view of the hyperbolic symmetrization."""
    if n < 1:
        raise ValueError("dimension must be a positive integer")

    def evaluate(Z: np.ndarray) -> np.ndarray:
        r = np.sqrt(np.sum(np.abs(np.asarray(Z, dtype=complex)) ** 2, axis=1))
        return ustar(volume_coordinate(r, n))

    if ustar.ustar[-1] == 0.0:
        hint = radius_from_volume_coordinate(ustar.support_volume, n)
        hint = min(max(hint, 1e-8), 1.0)
    else:
        hint = 1.0
    return ScalarField(n=n, evaluate=evaluate, support_radius_hint=hint,
                       sup_value=ustar.sup_value)


# ----------------------------------------------------------------------
# compactly supported truncations of level functions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedLevelFunction:
    """u = (w - t_cut)_+ for a level function w: compactly supported.

    Level functions vanish only at the boundary, so the checks that
    need compact support cut them at a positive level.  The cut level
    is strictly below the maximum of w, the sup of u is exactly
    ``max w - t_cut``, and the support radius is certified by the
    coefficient-sum bound of w.
    """

    base: LevelFunction
    t_cut: float

    def __post_init__(self):
        if not (0.0 < self.t_cut < self.base.max_value()):
            raise ValueError("the cut level must lie strictly inside (0, max w)")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def sup_value(self) -> float:
        return self.base.max_value() - self.t_cut

    @property
    def support_radius(self) -> float:
        return self.base.support_radius_for(self.t_cut)

    def evaluate(self, Z) -> np.ndarray:
        return np.maximum(self.base.evaluate(Z) - self.t_cut, 0.0)

    def field(self) -> ScalarField:
        return ScalarField(n=self.n, evaluate=self.evaluate,
                           support_radius_hint=self.support_radius,
                           sup_value=self.sup_value)

    def power_field(self, q: float) -> ScalarField:
        """ScalarField for u**q (the L^q integrand against dv_g)."""
        if q <= 0:
            raise ValueError("the integrand power must be positive")

        def evaluate(Z: np.ndarray) -> np.ndarray:
            return self.evaluate(Z) ** q

        return ScalarField(n=self.n, evaluate=evaluate,
                           support_radius_hint=self.support_radius,
                           sup_value=self.sup_value**q)

    def gradient_energy_field(self, p: float) -> ScalarField:
        """ScalarField for |grad_g u|^p, supported on the superlevel set.

        u inherits the gradient of w wherever w exceeds the cut and has
        zero gradient outside, so the integrand is the Bergman gradient
        norm of w to the p-th power times the superlevel indicator.
        """
        if p <= 0:
            raise ValueError("the energy power must be positive")
        w_field = level_function_field(self.base)

        def evaluate(Z: np.ndarray) -> np.ndarray:
            Z = np.asarray(Z, dtype=complex)
            inside = self.base.evaluate(Z) > self.t_cut
            out = np.zeros(Z.shape[0])
            if np.any(inside):
                norms = bergman_gradient_norm_batch(w_field, Z[inside])
                out[inside] = norms**p
            return out

        return ScalarField(n=self.n, evaluate=evaluate,
                           support_radius_hint=self.support_radius)

    def distribution(self, cfg: McConfig, points: int = GRID_POINTS,
                     lo: float = GRID_LO, top: float = GRID_TOP) -> DistributionFunction:
        """Distribution function of u on a logit-spaced grid of its range.

        Thresholds for u translate to thresholds of w shifted by the
        cut, so the superlevel scanner of the level function applies
        unchanged and the result is repackaged over the u-levels.
        """
        tau = default_t_grid(self.sup_value, points=points, lo=lo, top=top)
        d = distribution_function(self.base, cfg, t_grid=self.t_cut + tau)
        return DistributionFunction(tau, d.mu, d.mu_stderr, self.sup_value,
                                    self.n, d.samples)

    def support_volume(self, cfg: McConfig) -> IntegralEstimate:
        """Hyperbolic volume of the support {w > t_cut}."""
        d = distribution_function(self.base, cfg, t_grid=np.array([self.t_cut]))
        return IntegralEstimate(float(d.mu[0]), float(d.mu_stderr[0]),
                                d.samples, "superlevel_scan")


def truncate_level_function(
    w: LevelFunction, fraction: float = TRUNCATION_FRACTION, t_cut: float = None
) -> TruncatedLevelFunction:
    """Cut a level function at ``fraction`` of its maximum (or at t_cut)."""
    if t_cut is None:
        if not (0.0 < fraction < 1.0):
            raise ValueError("the cut fraction must lie in (0, 1)")
        t_cut = fraction * w.max_value()
    return TruncatedLevelFunction(w, float(t_cut))


def rearranged_profile(trunc: TruncatedLevelFunction, cfg: McConfig,
                       points: int = 160):
    """Measure the distribution of a truncation and invert it.

    Returns (distribution, support volume estimate, rearrangement); the
    rearrangement is anchored to zero at the measured support volume.
    """
    dist = trunc.distribution(cfg, points=points)
    support = trunc.support_volume(cfg)
    return dist, support, decreasing_rearrangement(dist, support_volume=support.value)


# ----------------------------------------------------------------------
# radial Dirichlet integrals of piecewise-linear profiles
# ----------------------------------------------------------------------

def _segment_weight_integrals(lo, hi, weight) -> np.ndarray:
    """Gauss-Legendre integrals of a smooth weight over many segments."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_X16[None, :]
    return half * np.sum(weight(nodes) * _GL_W16[None, :], axis=1)


def euclidean_dirichlet(ustar: DecreasingRearrangement, n: int, p: float) -> float:
    """(2n)**p * int |ustar'|**p s**((2n-1)p/2n) ds, exact per segment."""
    lo, hi, slope = ustar.segments()
    if lo.size == 0:
        return 0.0
    beta = (2 * n - 1) * p / (2 * n)
    terms = np.abs(slope) ** p * (hi ** (beta + 1) - lo ** (beta + 1)) / (beta + 1)
    return (2 * n) ** p * float(np.sum(terms))


def hyperbolic_dirichlet(ustar: DecreasingRearrangement, n: int, p: float) -> float:
    """Radial p-Dirichlet energy of the symmetrized profile on the ball.

    Equals the Euclidean form with the extra weight (1 + s**(1/n))**(p/2);
    the smooth weight is integrated by Gauss-Legendre on each linear
    segment of the profile.
    """
    lo, hi, slope = ustar.segments()
    if lo.size == 0:
        return 0.0
    beta = (2 * n - 1) * p / (2 * n)

    def weight(s):
        return s**beta * (1.0 + s ** (1.0 / n)) ** (p / 2.0)

    terms = np.abs(slope) ** p * _segment_weight_integrals(lo, hi, weight)
    total = (2 * n) ** p * float(np.sum(terms))
    # drop nothing, but flag when the last segment still carries weight
    if terms.size and total > 0 and terms[-1] > SEGMENT_TAIL_CUTOFF * total \
            and ustar.ustar[-1] > 0:
        warnings.warn("profile does not reach zero; energy may be truncated",
                      RuntimeWarning)
    return total


# ----------------------------------------------------------------------
# verification: preservation, equimeasurability, symmetrization energy
# ----------------------------------------------------------------------

def preservation_check(trunc: TruncatedLevelFunction, q, cfg: McConfig,
                       rearr: DecreasingRearrangement = None) -> dict:
    """Compare the L^q mass of u with the line integral of its profile.

    For finite q the ball side is int u**q dv_g by the truncated radial
    integrator and the profile side is int ustar(s)**q ds segment by
    segment; they agree up to Monte Carlo noise and the interpolation
    of ustar between knots, so the tolerance is 3*stderr plus a fixed
    relative budget.  q = inf compares the exact sup of u with the top
    knot of the profile.
    """
    if rearr is None:
        _, _, rearr = rearranged_profile(trunc, cfg)
    if q == math.inf:
        lhs = trunc.sup_value
        rhs = rearr.sup_value
        tol = 1e-12 * max(lhs, 1.0)
        gap = abs(lhs - rhs)
        return {"q": "inf", "ball_side": lhs, "profile_side": rhs, "gap": gap,
                "stderr": 0.0, "tolerance": tol, "passed": bool(gap <= tol)}
    q = float(q)
    est = integrate_ball_hyperbolic(trunc.power_field(q), cfg)
    lo, hi, slope = rearr.segments()
    vals = rearr.ustar
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_X8[None, :]
    levels = vals[:-1, None] + slope[:, None] * (nodes - lo[:, None])
    profile_side = float(np.sum(half * np.sum(levels**q * _GL_W8[None, :], axis=1)))
    gap = abs(est.value - profile_side)
    scale = max(abs(est.value), abs(profile_side))
    tol = 3.0 * est.stderr + PRESERVE_BUDGET * scale
    return {"q": q, "ball_side": est.value, "profile_side": profile_side,
            "gap": gap, "stderr": est.stderr, "tolerance": tol,
            "passed": bool(gap <= tol)}


def support_preservation_check(trunc: TruncatedLevelFunction, cfg: McConfig) -> dict:
    """Superlevel volumes of u converge to the support volume as t -> 0.

    Measures vol{u > tau} on a small geometric ladder of levels plus
    the support volume vol{w > t_cut} itself, and asserts that the
    shortfalls shrink along the ladder and end within a fixed relative
    envelope plus noise.
    """
    sup = trunc.sup_value
    taus = sup * np.array([1e-3, 2.5e-4, 6.25e-5])
    d = distribution_function(trunc.base, cfg, t_grid=trunc.t_cut + taus[::-1])
    ladder = d.mu[::-1]  # back to descending tau = ascending volume
    support = trunc.support_volume(cfg)
    gaps = support.value - ladder
    noise = 3.0 * (float(np.max(d.mu_stderr)) + support.stderr)
    shrinking = bool(np.all(np.diff(gaps) <= noise))
    closed = bool(gaps[-1] <= SUPPORT_BUDGET * support.value + noise)
    return {"support_volume": support.value, "support_stderr": support.stderr,
            "levels": taus.tolist(), "level_volumes": ladder.tolist(),
            "gaps": gaps.tolist(), "shrinking": shrinking,
            "envelope": SUPPORT_BUDGET * support.value + noise,
            "passed": bool(shrinking and closed)}


def equimeasurability_check(trunc: TruncatedLevelFunction, cfg: McConfig,
                            rearr: DecreasingRearrangement = None,
                            points: int = 160) -> dict:
    """Distribution of the symmetrized profile matches the measured one.

    The profile's superlevel volumes are exact piecewise-linear
    inverses, so they are compared against fresh measurements of the
    source field at levels offset from the knots (geometric midpoints),
    where agreement is interpolation plus noise rather than identity by
    construction.  The relative budget assumes the profile carries at
    least the default knot density.
    """
    if rearr is None:
        dist = trunc.distribution(cfg, points=points)
        support = trunc.support_volume(cfg)
        rearr = decreasing_rearrangement(dist, support_volume=support.value)
    v = rearr.ustar[rearr.ustar > 0]
    mids = np.sqrt(v[:-1] * v[1:])[::-1]  # ascending levels between the knots
    mids = mids[(mids > 0) & (mids < trunc.sup_value)]
    d = distribution_function(trunc.base, cfg, t_grid=trunc.t_cut + mids)
    profile_mu = rearr.level_volume(mids)
    keep = d.mu > 0
    scale = np.maximum(d.mu, 1e-300)
    rel = np.abs(profile_mu - d.mu) / scale
    noise = 3.0 * d.mu_stderr / scale
    ok = rel[keep] <= noise[keep] + EQUIMEASURE_BUDGET
    worst = float(np.max(rel[keep] - noise[keep])) if np.any(keep) else 0.0
    return {"levels": mids.tolist(), "checked": int(np.sum(keep)),
            "worst_excess": worst, "budget": EQUIMEASURE_BUDGET,
            "passed": bool(np.all(ok))}


def polya_szego_check(trunc: TruncatedLevelFunction, p: float, cfg: McConfig,
                      rearr: DecreasingRearrangement = None) -> dict:
    """Symmetrization does not increase the p-Dirichlet energy.

    The symmetrized side is the deterministic radial energy of the
    measured profile; the source side is the Monte Carlo ball integral
    of |grad_g u|^p over the superlevel set.  Replacing the true profile
    by its piecewise-linear interpolant perturbs the energy at the
    square of the knot spacing; the relative budget covers that, which
    matters in the equality (radial) cases where the noise term is
    negligible.
    """
    if not (1.0 < p < math.inf):
        raise ValueError("the energy power must lie in (1, inf)")
    if rearr is None:
        _, _, rearr = rearranged_profile(trunc, cfg)
    symmetrized = hyperbolic_dirichlet(rearr, trunc.n, p)
    source = integrate_ball_hyperbolic(trunc.gradient_energy_field(p), cfg)
    scale = max(abs(symmetrized), abs(source.value))
    tol = 3.0 * source.stderr + ENERGY_BUDGET * scale
    margin = source.value - symmetrized
    return {"p": p, "symmetrized_energy": symmetrized,
            "source_energy": source.value, "stderr": source.stderr,
            "margin": margin, "tolerance": tol,
            "equality_gap": abs(margin) / scale if scale > 0 else 0.0,
            "passed": bool(margin >= -tol)}


# ----------------------------------------------------------------------
# dual-quadrature identities for the two radial gradient integrals
# ----------------------------------------------------------------------

def _geometric_edges(upper: float, breaks) -> np.ndarray:
    """Panel edges on (0, upper]: halving ladder merged with breakpoints.

    The ladder resolves power-law behavior at both ends of the range;
    breakpoints of piecewise integrands become panel edges so every
    panel sees a smooth integrand.
    """
    edges = {float(upper)}
    x = float(upper)
    while x > upper * 2.0**-48:
        x *= 0.5
        edges.add(x)
    for b in breaks:
        if 0.0 < b < upper:
            edges.add(float(b))
    return np.array(sorted(edges))


def _panel_integral(fn, edges: np.ndarray) -> float:
    """Composite Gauss-Legendre over [0, edges[-1]] with the given edges."""
    lo = np.concatenate([[0.0], edges[:-1]])
    hi = edges
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_X16[None, :]
    vals = fn(nodes.ravel()).reshape(nodes.shape)
    return float(np.sum(half * np.sum(vals * _GL_W16[None, :], axis=1)))


def _profile_functions(profile):
    """Normalize a profile argument to (value, derivative, breakpoints)."""
    if isinstance(profile, DecreasingRearrangement):
        lo, hi, slope = profile.segments()

        def deriv(s):
            s = np.asarray(s, dtype=float)
            idx = np.clip(np.searchsorted(profile.s_grid, s, side="right") - 1,
                          0, max(slope.size - 1, 0))
            inside = (s >= profile.s_grid[0]) & (s < profile.s_grid[-1])
            return np.where(inside, slope[idx] if slope.size else 0.0, 0.0)

        return profile, deriv, profile.s_grid[1:-1].tolist()
    value_fn, deriv_fn = profile
    return value_fn, deriv_fn, []


def radial_gradient_identities_check(profile, p: float, n: int,
                                     s_max: float = None) -> dict:
    """Dual-quadrature test of the two 1-D gradient-integral identities.

    The s-side integrals are

        E_euclidean  = (2n)**p int |ustar'(s)|**p s**((2n-1)p/2n) ds
        E_hyperbolic = E_euclidean with weight (1 + s**(1/n))**(p/2)

    and the space-side counterparts integrate |grad u| of the two
    symmetrizations radially (substituting s = r**(2n) on C^n and
    s = sinh(rho)**(2n) on the ball).  ``profile`` is either a
    DecreasingRearrangement or a pair (value, derivative) of callables;
    in the latter case the integrals run to ``s_max`` (required when
    the hyperbolic integrand is not integrable at infinity, which
    happens for slowly decaying profiles once p <= n).
    """
    if p <= 0 or n < 1:
        raise ValueError("need a positive power and dimension")
    value_fn, deriv_fn, breaks = _profile_functions(profile)
    if isinstance(profile, DecreasingRearrangement):
        upper = profile.support_volume
    else:
        if s_max is None:
            raise ValueError("analytic profiles need an explicit volume cutoff")
        upper = float(s_max)
    beta = (2 * n - 1) * p / (2 * n)
    s_edges = _geometric_edges(upper, breaks)

    def s_integrand(s, weighted: bool):
        d = np.abs(deriv_fn(s)) ** p * s**beta
        if weighted:
            d = d * (1.0 + s ** (1.0 / n)) ** (p / 2.0)
        return d

    e1_s = (2 * n) ** p * _panel_integral(lambda s: s_integrand(s, False), s_edges)
    e2_s = (2 * n) ** p * _panel_integral(lambda s: s_integrand(s, True), s_edges)

    # space side, Euclidean: u(z) = ustar(|z|**(2n)) on C^n, radial in r
    def euclid_integrand(r):
        s = r ** (2 * n)
        grad = np.abs(deriv_fn(s)) * 2 * n * r ** (2 * n - 1)
        return 2 * n * grad**p * r ** (2 * n - 1)

    e1_space = _panel_integral(euclid_integrand, s_edges ** (1.0 / (2 * n)))

    # space side, hyperbolic: u(z) = ustar(sinh(rho)**(2n)), radial in rho
    def hyper_integrand(rho):
        sh, ch = np.sinh(rho), np.cosh(rho)
        s = sh ** (2 * n)
        grad = np.abs(deriv_fn(s)) * 2 * n * sh ** (2 * n - 1) * ch
        return grad**p * 2 * n * sh ** (2 * n - 1) * ch

    e2_space = _panel_integral(hyper_integrand, np.arcsinh(s_edges ** (1.0 / (2 * n))))

    rel1 = abs(e1_s - e1_space) / max(abs(e1_s), 1e-300)
    rel2 = abs(e2_s - e2_space) / max(abs(e2_s), 1e-300)

    # convergence probe for analytic profiles: fit the power of decay of
    # the weighted integrand near the cutoff and estimate the dropped
    # tail integral; compactly supported profiles are exact as written
    converged = True
    if not isinstance(profile, DecreasingRearrangement):
        probe = upper * np.array([0.5, 1.0])
        dens = np.abs(deriv_fn(probe * (1 - 1e-9))) ** p \
            * probe**beta * (1 + probe ** (1.0 / n)) ** (p / 2.0)
        if dens[1] > 0:
            decay = math.log2(max(dens[0], 1e-300) / dens[1])
            if decay <= 1.0:
                converged = False
            else:
                tail_estimate = dens[1] * upper / (decay - 1.0)
                converged = tail_estimate <= 1e-4 * max(e2_s, 1e-300)
        if not converged:
            warnings.warn("hyperbolic energy integrand has not decayed at "
                          "the volume cutoff; the comparison is truncated",
                          RuntimeWarning)
    return {"p": p, "n": n, "volume_cutoff": upper,
            "euclidean_line": e1_s, "euclidean_space": e1_space,
            "hyperbolic_line": e2_s, "hyperbolic_space": e2_space,
            "rel_gap_euclidean": rel1, "rel_gap_hyperbolic": rel2,
            "converged": converged,
            "passed": bool(rel1 <= IDENTITY_RTOL and rel2 <= IDENTITY_RTOL)}
