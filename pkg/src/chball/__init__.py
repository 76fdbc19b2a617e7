"""Numerical toolkit for unit-ball geometry, holomorphic function norms,
superlevel-set distribution functions, symmetric rearrangements, and the
inequality battery built on them.

Modules
-------
geometry     geodesic radius/volume/area maps, invariant gradient and Laplacian
holo         polynomial test functions and |f|^a (1-|z|^2)^b level fields
integrate    seeded Monte Carlo / quadrature engines on sphere and ball
norms        Hardy and weighted Bergman norms with exact small cases
superlevel   distribution functions, monotone functionals, layer-cake checks
rearrange    decreasing rearrangement and radial symmetrizations
inequalities isoperimetric, Sobolev-type, Hardy, and majorization checks
checks       the verification battery producing VerificationRecord lists
suite        one-shot runner with canonical JSON/CSV reports
cli          command-line front end (chball)
"""

from .geometry import (
    BallPoint,
    ScalarField,
    geodesic_radius,
    geodesic_ball_volume,
    geodesic_sphere_area,
    volume_coordinate,
    radius_from_volume_coordinate,
    bergman_gradient_norm,
    invariant_laplacian,
)
from .holo import PolynomialFunction, LevelFunction, test_family
from .integrate import (
    McConfig,
    IntegralEstimate,
    integrate_sphere,
    integrate_ball,
    integrate_ball_weighted,
    integrate_ball_hyperbolic,
    integrate_ball_stratified,
)
from .norms import SpaceParams, hardy_norm, bergman_norm
from .superlevel import (
    DistributionFunction,
    distribution_function,
    monotone_functional,
    weak_type_bound,
)
from .rearrange import (
    DecreasingRearrangement,
    decreasing_rearrangement,
    hyperbolic_symmetrization,
    truncate_level_function,
)
from .inequalities import sobolev_constant
from .checks import SUITES, VerificationRecord, make_record
from .suite import ConfigError, SuiteConfig, run_suite, dump_curves

__version__ = "0.1.0"

__all__ = [
    "BallPoint",
    "ScalarField",
    "geodesic_radius",
    "geodesic_ball_volume",
    "geodesic_sphere_area",
    "volume_coordinate",
    "radius_from_volume_coordinate",
    "bergman_gradient_norm",
    "invariant_laplacian",
    "PolynomialFunction",
    "LevelFunction",
    "test_family",
    "McConfig",
    "IntegralEstimate",
    "integrate_sphere",
    "integrate_ball",
    "integrate_ball_weighted",
    "integrate_ball_hyperbolic",
    "integrate_ball_stratified",
    "SpaceParams",
    "hardy_norm",
    "bergman_norm",
    "DistributionFunction",
    "distribution_function",
    "monotone_functional",
    "weak_type_bound",
    "DecreasingRearrangement",
    "decreasing_rearrangement",
    "hyperbolic_symmetrization",
    "truncate_level_function",
    "sobolev_constant",
    "SUITES",
    "VerificationRecord",
    "make_record",
    "ConfigError",
    "SuiteConfig",
    "run_suite",
    "dump_curves",
    "__version__",
]
