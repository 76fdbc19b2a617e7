"""Verification records: every module battery reduced to margin/tolerance.

A VerificationRecord states one checked claim in a uniform shape: a
stable id, a human-readable claim, a digest of the inputs that produced
it, a margin, a tolerance, and the pass flag, which is *defined* as
margin >= -tolerance (the constructor enforces the equivalence, so a
record can never claim a pass its numbers do not support).

Margin conventions, used consistently by every builder here:

* ordering checks report the actual slack (lhs - rhs style) as the
  margin with a 3-sigma-plus-floor tolerance;
* identity/error checks report margin = -error with tolerance = budget,
  so the invariant reads error <= budget;
* compound checks (several sub-margins with heterogeneous tolerances)
  report margin = min(sub_margin + sub_tolerance) with tolerance 0,
  which is exactly the conjunction of the sub-checks.

The builders return one list of records per (suite, dimension) pair;
ids embed the dimension so a full run has globally unique, sortable
ids.  Runtime is carried on the record but excluded from the report
digest and serialization (see the suite module) so reruns stay
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from . import holo
from .geometry import (
    ScalarField,
    geodesic_ball_volume,
    geodesic_sphere_area,
    volume_coordinate,
    radius_from_volume_coordinate,
    invariant_laplacian_batch,
)
from .holo import LevelFunction, PolynomialFunction, log_level_field
from .integrate import McConfig, integrate_ball_stratified
from .inequalities import (
    ANALYTIC_RTOL,
    ORDERING_TOL,
    SUP_REP_TOL,
    ell_integral_check,
    hardy_sharpness_probe,
    isoperimetric_model_check,
    isoperimetric_refined_check,
    kalaj_lemma_check,
    sobolev_check,
    sobolev_constant,
    sup_representation_check,
    weighted_hardy_check,
)
from .norms import (
    SpaceParams,
    contraction_chain_check,
    hardy_limit_check,
    pointwise_bound_check,
)
from .rearrange import (
    EQUIMEASURE_BUDGET,
    IDENTITY_RTOL,
    DecreasingRearrangement,
    decreasing_rearrangement,
    equimeasurability_check,
    hyperbolic_symmetrization,
    polya_szego_check,
    preservation_check,
    radial_gradient_identities_check,
    rearranged_profile,
    support_preservation_check,
    truncate_level_function,
)
from .superlevel import (
    DistributionFunction,
    differential_inequality_check,
    distribution_function,
    extremal_functional_check,
    monotone_functional,
    monotonicity_check,
    weak_type_check,
)
from .geometry import BallPoint

__all__ = [
    "VerificationRecord",
    "make_record",
    "geometry_records",
    "norms_records",
    "superlevel_records",
    "rearrange_records",
    "inequalities_records",
    "SUITES",
]

# mc-volume battery: geodesic radii and the dual precision requirement.
# The relative-stderr target is contracted at the reference sample count;
# at other budgets it scales by sqrt(reference / budget), which pins the
# estimator's variance constant rather than a budget-dependent number.
VOLUME_RADII = (0.4, 0.8, 1.2, 1.6, 2.0)
VOLUME_REL_STDERR = 1e-3
VOLUME_REF_SAMPLES = 200_000

LAPLACE_TOL = 1e-4
DERIVATIVE_TOL = 1e-7
ROUNDTRIP_TOL = 1e-13
FIXED_POINT_TOL = 1e-10
EXTREMAL_BUDGET = 5e-3
HARDY_RATIO_BAND = 5e-2
LIMIT_GAP_TOL = 1e-8


@dataclass(frozen=True)
class VerificationRecord:
    """One checked claim with its margin, tolerance, and pass flag."""

    check_id: str
    claim: str
    inputs_digest: str
    margin: float
    tolerance: float
    passed: bool
    runtime: float

    def __post_init__(self):
        if not (math.isfinite(self.margin) and math.isfinite(self.tolerance)):
            raise ValueError("margin and tolerance must be finite")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.passed != (self.margin >= -self.tolerance):
            raise ValueError("pass flag must equal margin >= -tolerance")


def _digest(inputs: dict) -> str:
    blob = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def make_record(
    check_id: str,
    claim: str,
    inputs: dict,
    margin: float,
    tolerance: float,
    runtime: float = 0.0,
) -> VerificationRecord:
    margin = float(margin)
    tolerance = float(tolerance)
    return VerificationRecord(
        check_id=check_id,
        claim=claim,
        inputs_digest=_digest(inputs),
        margin=margin,
        tolerance=tolerance,
        passed=bool(margin >= -tolerance),
        runtime=float(runtime),
    )


def _run(records: list, check_id: str, claim: str, inputs: dict, fn) -> None:
    """Time fn() -> (margin, tolerance) and append the record."""
    t0 = time.perf_counter()
    margin, tolerance = fn()
    records.append(
        make_record(check_id, claim, inputs, margin, tolerance, time.perf_counter() - t0)
    )


def _ball_indicator(n: int, rho: float) -> ScalarField:
    rc = math.tanh(rho)
    return ScalarField(
        n=n,
        evaluate=lambda Z, rc=rc: (np.linalg.norm(Z, axis=1) < rc).astype(float),
        support_radius_hint=rc,
    )


def _battery_poly(n: int) -> PolynomialFunction:
    return PolynomialFunction.coordinate(0, n) + PolynomialFunction.constant(0.5, n)


# ----------------------------------------------------------------------
# geometry suite
# ----------------------------------------------------------------------

def geometry_records(n: int, cfg: McConfig) -> list:
    records = []
    base = {"n": n, "seed": cfg.seed, "samples": cfg.sphere_samples}

    def volume_mc():
        worst_band = math.inf
        worst_rel = 0.0
        for rho in VOLUME_RADII:
            est = integrate_ball_stratified(_ball_indicator(n, rho), cfg)
            exact = math.sinh(rho) ** (2 * n)
            worst_band = min(worst_band, 3.0 * est.stderr - abs(est.value - exact))
            worst_rel = max(worst_rel, est.stderr / est.value)
        target = VOLUME_REL_STDERR * math.sqrt(
            VOLUME_REF_SAMPLES / cfg.sphere_samples
        )
        # two records share one computation; precision filed separately
        records.append(
            make_record(
                f"geometry/volume-mc-precision/n={n}",
                "stratified volume estimates resolve 0.1% relative error "
                "at the reference sample count",
                dict(base, radii=list(VOLUME_RADII)),
                target - worst_rel,
                0.0,
            )
        )
        return worst_band, 0.0

    _run(
        records,
        f"geometry/volume-mc/n={n}",
        "Monte Carlo hyperbolic volume of geodesic balls matches sinh(rho)^(2n)",
        dict(base, radii=list(VOLUME_RADII)),
        volume_mc,
    )

    def area_derivative():
        rho = np.linspace(0.1, 2.0, 20)
        h = 1e-3
        # fourth-order stencil: the third-derivative term of the plain
        # central difference is O(1/rho^2) relative near zero
        diff = (
            -geodesic_ball_volume(rho + 2 * h, n)
            + 8 * geodesic_ball_volume(rho + h, n)
            - 8 * geodesic_ball_volume(rho - h, n)
            + geodesic_ball_volume(rho - 2 * h, n)
        ) / (12 * h)
        area = geodesic_sphere_area(rho, n)
        rel = np.max(np.abs(diff - area) / area)
        return -float(rel), DERIVATIVE_TOL

    _run(
        records,
        f"geometry/area-is-volume-derivative/n={n}",
        "geodesic sphere area equals the radial derivative of ball volume",
        dict(base, h=1e-3),
        area_derivative,
    )

    def roundtrip():
        r = np.linspace(0.01, 0.99, 99)
        back = radius_from_volume_coordinate(volume_coordinate(r, n), n)
        return -float(np.max(np.abs(back - r))), ROUNDTRIP_TOL

    _run(
        records,
        f"geometry/volume-coordinate-roundtrip/n={n}",
        "volume coordinate and its inverse compose to the identity",
        base,
        roundtrip,
    )

    def laplacian():
        worst = 0.0
        polys = holo.test_family("random_poly", n=n, seed=cfg.seed, degree=2, count=5)
        for k, f in enumerate(polys):
            u = LevelFunction(f=f, a=1.3, b=0.7)
            rng = np.random.default_rng(cfg.seed + 17 * k)
            Z = rng.standard_normal((600, n)) + 1j * rng.standard_normal((600, n))
            Z *= (rng.uniform(0.05, 0.85, 600) / np.linalg.norm(Z, axis=1))[:, None]
            # the identity holds away from zeros of f, where log u is smooth
            Z = Z[np.abs(f.evaluate(Z)) > 0.05 * f.coeff_abs_sum()][:200]
            vals = invariant_laplacian_batch(log_level_field(u), Z)
            worst = max(worst, float(np.max(np.abs(vals + 4 * n * u.b))))
        return -worst, LAPLACE_TOL

    _run(
        records,
        f"geometry/laplacian-log-identity/n={n}",
        "invariant Laplacian of log(|f|^a (1-|z|^2)^b) equals -4nb",
        dict(base, polynomials=5, points=200),
        laplacian,
    )
    return records


# ----------------------------------------------------------------------
# norms suite
# ----------------------------------------------------------------------

def norms_records(n: int, cfg: McConfig) -> list:
    records = []
    f = _battery_poly(n)
    base = {"n": n, "seed": cfg.seed, "samples": cfg.sphere_samples, "f": "z1+0.5"}
    r = 2.0

    def layer_cake():
        from .superlevel import layer_cake_bergman

        rep = layer_cake_bergman(f, r, n + 1.5, cfg)
        return -abs(rep["gap"]), rep["tolerance"]

    _run(
        records,
        f"norms/layer-cake/n={n}",
        "weighted norm agrees with its layer-cake distribution integral",
        dict(base, r=r, alpha=n + 1.5),
        layer_cake,
    )

    def extremal_power():
        rep = extremal_functional_check("power", n, cfg, s=n + 2.0)
        return -rep["relative_gap"], EXTREMAL_BUDGET

    _run(
        records,
        f"norms/layer-cake-extremal-power/n={n}",
        "power functional of the extremal distribution matches its Beta closed form",
        dict(base, s=n + 2.0),
        extremal_power,
    )

    def extremal_relu():
        rep = extremal_functional_check("relu", n, cfg, c=0.3)
        return -rep["relative_gap"], EXTREMAL_BUDGET

    _run(
        records,
        f"norms/layer-cake-extremal-relu/n={n}",
        "hinge functional of the extremal distribution matches reference quadrature",
        dict(base, c=0.3),
        extremal_relu,
    )

    z = np.zeros(n, dtype=complex)
    z[0] = 0.3

    def pointwise(space):
        rep = pointwise_bound_check(f, space, z, cfg)
        return rep["margin"], rep["tolerance"]

    _run(
        records,
        f"norms/pointwise-bound-hardy/n={n}",
        "|f(z)| (1-|z|^2)^(n/p) is dominated by the Hardy norm",
        dict(base, p=2.0, z="0.3 e1"),
        lambda: pointwise(SpaceParams("hardy", 2.0)),
    )
    _run(
        records,
        f"norms/pointwise-bound-bergman/n={n}",
        "|f(z)| (1-|z|^2)^(alpha/p) is dominated by the weighted norm",
        dict(base, p=2.0, alpha=n + 1.0, z="0.3 e1"),
        lambda: pointwise(SpaceParams("bergman", 2.0, n + 1.0)),
    )

    def chain():
        rep = contraction_chain_check(f, r, (n + 2.0, n + 1.0, n + 0.5), cfg)
        # conjunction over consecutive pairs, each with its own 3-sigma
        # tolerance: min(margin_i + tol_i) >= 0 is exactly "all pairs pass"
        worst = min(m + t for m, t in zip(rep["margins"], rep["tolerances"]))
        return worst, 0.0

    _run(
        records,
        f"norms/contraction-chain/n={n}",
        "weighted norms decrease along alpha and sit below the Hardy norm",
        dict(base, r=r, alphas=[n + 2.0, n + 1.0, n + 0.5]),
        chain,
    )

    def limit():
        rep = hardy_limit_check(f, r, n + 0.01, cfg)
        return -rep["relative_gap"], HARDY_RATIO_BAND + rep["noise_level"]

    _run(
        records,
        f"norms/hardy-limit/n={n}",
        "weighted norm near the critical weight reproduces the Hardy norm",
        dict(base, r=r, alpha=n + 0.01),
        limit,
    )
    return records


# ----------------------------------------------------------------------
# superlevel suite
# ----------------------------------------------------------------------

def _battery_levels(n: int) -> list:
    f = _battery_poly(n)
    return [LevelFunction(f=f, a=2.0, b=1.0), LevelFunction(f=f, a=1.5, b=1.2)]


def superlevel_records(n: int, cfg: McConfig) -> list:
    records = []
    base = {"n": n, "seed": cfg.seed, "samples": cfg.sphere_samples, "f": "z1+0.5"}
    battery = _battery_levels(n)
    one = LevelFunction(f=PolynomialFunction.constant(1.0, n), a=1.0, b=1.0)

    def monotone():
        worst = -math.inf
        for u in battery:
            rep = monotonicity_check(u, cfg)
            worst = max(worst, rep["worst_violation"])
        return -worst, 0.0

    _run(
        records,
        f"superlevel/monotonicity/n={n}",
        "t^(1/b) (mu^(1/n) + 1) is nonincreasing along thresholds",
        dict(base, battery=["a=2 b=1", "a=1.5 b=1.2"]),
        monotone,
    )

    def monotone_extremal():
        rep = monotonicity_check(one, cfg)
        g, sig = rep["functional"].g, rep["functional"].g_stderr
        band = 3.0 * sig + 1e-8 * (1.0 + np.abs(g))
        return float(np.min(band - np.abs(g - 1.0))), 0.0

    _run(
        records,
        f"superlevel/monotonicity-extremal/n={n}",
        "for constant |f| the monotone functional is identically one",
        dict(base, f="1", a=1.0, b=1.0),
        monotone_extremal,
    )

    def weak_type():
        worst = math.inf
        for u in battery:
            rep = weak_type_check(u, cfg)
            worst = min(worst, float(np.min(np.asarray(rep["margins"]) + rep["tolerance"])))
        return worst, 0.0

    _run(
        records,
        f"superlevel/weak-type/n={n}",
        "superlevel volume is bounded by ((M^a/t)^(1/b) - 1)^n",
        dict(base, battery=["a=2 b=1", "a=1.5 b=1.2"]),
        weak_type,
    )

    def weak_type_extremal():
        rep = weak_type_check(one, cfg)
        margins = np.asarray(rep["margins"])
        return float(np.min(rep["tolerance"] - np.abs(margins))), 0.0

    _run(
        records,
        f"superlevel/weak-type-extremal/n={n}",
        "for constant |f| the weak-type bound is an equality",
        dict(base, f="1", a=1.0, b=1.0),
        weak_type_extremal,
    )

    def differential():
        rep = differential_inequality_check(battery[0], cfg)
        return -rep["worst_violation"], 0.0

    _run(
        records,
        f"superlevel/differential-inequality/n={n}",
        "(bt/n) mu' mu^(1/n-1) + mu^(1/n) + 1 <= 0 on resolved thresholds",
        dict(base, a=2.0, b=1.0),
        differential,
    )
    return records


# ----------------------------------------------------------------------
# rearrange suite
# ----------------------------------------------------------------------

def rearrange_records(n: int, cfg: McConfig) -> list:
    records = []
    base = {"n": n, "seed": cfg.seed, "samples": cfg.sphere_samples, "f": "z1+0.5"}
    t_cut = 0.2 if n == 1 else 0.025
    trunc = truncate_level_function(
        LevelFunction(f=_battery_poly(n), a=2.0, b=1.0), t_cut=t_cut
    )
    _, _, rearr = rearranged_profile(trunc, cfg)

    def preservation():
        worst = math.inf
        for q in (1.0, 2.0, 4.0, math.inf):
            rep = preservation_check(trunc, q, cfg, rearr=rearr)
            worst = min(worst, rep["tolerance"] - rep["gap"])
        return worst, 0.0

    _run(
        records,
        f"rearrange/preservation/n={n}",
        "rearrangement preserves L^q masses for q in {1, 2, 4, inf}",
        dict(base, t_cut=t_cut),
        preservation,
    )

    def equimeasure():
        rep = equimeasurability_check(trunc, cfg, rearr=rearr)
        return -rep["worst_excess"], EQUIMEASURE_BUDGET

    _run(
        records,
        f"rearrange/equimeasurability/n={n}",
        "the rearranged profile has the distribution of the source function",
        dict(base, t_cut=t_cut),
        equimeasure,
    )

    def polya_szego():
        worst = math.inf
        for p in (1.5, 2.0, 3.0):
            rep = polya_szego_check(trunc, p, cfg, rearr=rearr)
            worst = min(worst, rep["margin"] + rep["tolerance"])
        return worst, 0.0

    _run(
        records,
        f"rearrange/polya-szego/n={n}",
        "symmetrization does not increase the p-Dirichlet energy",
        dict(base, t_cut=t_cut, powers=[1.5, 2.0, 3.0]),
        polya_szego,
    )

    def support():
        rep = support_preservation_check(trunc, cfg)
        slack = rep["envelope"] - rep["gaps"][-1]
        # a non-shrinking ladder is a failure regardless of the closure slack
        margin = slack if rep["shrinking"] else min(slack, 0.0) - 1.0
        return margin, 0.0

    _run(
        records,
        f"rearrange/support-preservation/n={n}",
        "superlevel volumes converge to the support volume from below",
        dict(base, t_cut=t_cut),
        support,
    )

    def fixed_point():
        # analytic radial case: u = 1 - |z|^2 truncated at t_cut has
        # mu(t) = ((1-t)/t)^n - s_cut built exactly from its knots
        cut = 0.25
        s_cut = ((1.0 - cut) / cut) ** n
        t = np.geomspace(cut * 1.0001, 1.0 - 1e-9, 60)
        mu = ((1.0 - t) / t) ** n
        dist = DistributionFunction(
            t=t - cut, mu=mu, mu_stderr=np.zeros_like(t), t0=1.0 - cut, n=n, samples=0
        )
        prof = decreasing_rearrangement(dist, support_volume=s_cut)
        worst = 0.0
        for s in prof.s_grid[1:-1]:
            r = radius_from_volume_coordinate(s, n)
            z = np.zeros(n, dtype=complex)
            z[0] = r
            val = hyperbolic_symmetrization(prof, BallPoint(z))
            direct = max((1.0 - r * r) - cut, 0.0)
            worst = max(worst, abs(val - direct))
        return -worst, FIXED_POINT_TOL

    _run(
        records,
        f"rearrange/symmetrization-fixed-point/n={n}",
        "radial decreasing functions are fixed points of symmetrization",
        dict(base, profile="1-|z|^2 cut at 0.25"),
        fixed_point,
    )

    def identities():
        p = 2.0 * n + 1.0
        profile = (
            lambda s: (1.0 + np.asarray(s) ** (1.0 / n)) ** -1.0,
            lambda s: -(1.0 / n)
            * np.asarray(s) ** (1.0 / n - 1.0)
            * (1.0 + np.asarray(s) ** (1.0 / n)) ** -2.0,
        )
        rep = radial_gradient_identities_check(profile, p, n, s_max=1e8)
        return -max(rep["rel_gap_euclidean"], rep["rel_gap_hyperbolic"]), IDENTITY_RTOL

    _run(
        records,
        f"rearrange/gradient-identities/n={n}",
        "1-D profile energies match their space-side radial integrals",
        dict(base, p=2 * n + 1.0, s_max=1e8),
        identities,
    )
    return records


# ----------------------------------------------------------------------
# inequalities suite
# ----------------------------------------------------------------------

def inequalities_records(n: int, cfg: McConfig) -> list:
    records = []
    base = {"n": n, "seed": cfg.seed, "samples": cfg.sphere_samples}
    rho_grid = np.geomspace(1e-3, 3.0, 50)

    def refined():
        rep = isoperimetric_refined_check(rho_grid, n)
        return -rep["worst"], ANALYTIC_RTOL

    _run(
        records,
        f"inequalities/isoperimetric-refined/n={n}",
        "squared ball perimeter equals 4n^2 (V^((2n-1)/n) + V^2)",
        dict(base, radii=50),
        refined,
    )

    def model():
        rep = isoperimetric_model_check(rho_grid, n)
        return float(np.min(rep["relative_margin"])), ANALYTIC_RTOL

    _run(
        records,
        f"inequalities/isoperimetric-model/n={n}",
        "geodesic balls beat the Euclidean isoperimetric ratio",
        dict(base, radii=50),
        model,
    )

    trunc = truncate_level_function(
        LevelFunction(f=PolynomialFunction.constant(1.0, n), a=2.0, b=1.0), t_cut=0.2
    )
    regimes = [("I", 1.0), ("II", 1.5), ("IV", 2.0 * n + 2.0)]
    if n >= 2:
        regimes.insert(2, ("III", 2.0))
    for regime, p in regimes:
        def sobolev(regime=regime, p=p):
            rep = sobolev_check(trunc, p, regime, cfg)
            return rep["margin"], rep["tolerance"]

        _run(
            records,
            f"inequalities/sobolev-{regime}/n={n}",
            f"gradient-energy bound in regime {regime} holds on the battery function",
            dict(base, regime=regime, p=p, t_cut=0.2),
            sobolev,
        )

    def limit():
        m = 2 * n
        return -abs(sobolev_constant(m, 1.0 + 1e-11) - m), LIMIT_GAP_TOL

    _run(
        records,
        f"inequalities/sobolev-constant-limit/n={n}",
        "the sharp gradient constant tends to 2n as p tends to 1",
        dict(base, eps=1e-11),
        limit,
    )

    def ell():
        rep = ell_integral_check(n, 2.0 * n + 1.5)
        return -rep["rel_error"], LIMIT_GAP_TOL

    _run(
        records,
        f"inequalities/ell-integral/n={n}",
        "the layer integral evaluates to n times its Beta closed form",
        dict(base, p=2 * n + 1.5),
        ell,
    )

    def sup_rep():
        rng = np.random.default_rng(cfg.seed)
        worst = 0.0
        for _ in range(5):
            a, b = rng.uniform(0.1, 5.0, 2)
            alpha = rng.uniform(0.05, 0.95)
            rep = sup_representation_check(a, b, alpha)
            worst = max(
                worst,
                rep["gap"] / rep["exact"],
                (rep["grid_max"] - rep["exact"]) / rep["exact"],
            )
        return -worst, SUP_REP_TOL

    _run(
        records,
        f"inequalities/sup-representation/n={n}",
        "(a+b)^alpha equals the sup of its split concave envelope",
        dict(base, trials=5),
        sup_rep,
    )

    def hardy_indicator():
        rep = weighted_hardy_check(
            lambda x: 1.0 if 0.0 < x < 1.0 else 0.0, 2.0, 2.0, x_max=1.0
        )
        return rep["margin"], ORDERING_TOL * max(abs(rep["lhs"]), 1.0)

    _run(
        records,
        f"inequalities/hardy-weighted-indicator/n={n}",
        "weighted tail-average bound holds for the unit indicator",
        dict(base, p=2.0, eps=2.0),
        hardy_indicator,
    )

    def hardy_exponential():
        rep = weighted_hardy_check(lambda x: math.exp(-x), 2.0, 1.5)
        return rep["margin"], ORDERING_TOL * max(abs(rep["lhs"]), 1.0)

    _run(
        records,
        f"inequalities/hardy-weighted-exponential/n={n}",
        "weighted tail-average bound holds for exponential decay",
        dict(base, p=2.0, eps=1.5),
        hardy_exponential,
    )

    def hardy_sharp():
        rep = hardy_sharpness_probe(2.0, 2.0, delta=1e-3)
        ordering = (rep["lhs"] - rep["rhs"]) / max(abs(rep["lhs"]), 1.0)
        return min(ordering, HARDY_RATIO_BAND - abs(rep["ratio"] - 1.0)), 0.0

    _run(
        records,
        f"inequalities/hardy-sharpness/n={n}",
        "the near-extremal power probe approaches equality within 5%",
        dict(base, p=2.0, eps=2.0, delta=1e-3),
        hardy_sharp,
    )

    def kalaj_equality():
        rep = kalaj_lemma_check(lambda x: max(x - 1.0, 0.0), lambda t: t, lambda t: 1.0, 2.0)
        return ORDERING_TOL * max(1.0, abs(rep["rhs"])) - abs(rep["margin"]), 0.0

    _run(
        records,
        f"inequalities/kalaj-equality/n={n}",
        "the comparison lemma is an equality for the constant profile",
        dict(base, alpha=2.0),
        kalaj_equality,
    )

    def kalaj_ordering():
        worst = math.inf
        for phi, psi, g, alpha in (
            (lambda x: max(x - 1.0, 0.0), lambda t: t, lambda t: 1.0 - 0.5 * t, 2.0),
            (lambda x: x * x, lambda t: t * t, lambda t: 1.2 - 0.4 * t, 3.0),
        ):
            rep = kalaj_lemma_check(phi, psi, g, alpha)
            worst = min(worst, rep["margin"] + ORDERING_TOL * max(1.0, abs(rep["rhs"])))
        return worst, 0.0

    _run(
        records,
        f"inequalities/kalaj-ordering/n={n}",
        "calibrated decreasing profiles obey the comparison lemma ordering",
        dict(base, instances=2),
        kalaj_ordering,
    )
    return records


SUITES = {
    "geometry": geometry_records,
    "norms": norms_records,
    "superlevel": superlevel_records,
    "rearrange": rearrange_records,
    "inequalities": inequalities_records,
}
