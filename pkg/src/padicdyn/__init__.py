"""Exact arithmetic for non-archimedean polynomial dynamics.

The package computes p-adic valuations, Newton polygons, Berkovich disc
points and their seminorms, filled-Julia membership certificates, a
slope-based height-gap criterion, certified canonical heights, and
height-gap bound tables — all over exact rational arithmetic.
"""

from .berkovich import (
    BoundedCertified,
    BoundedUpTo,
    DiscPoint,
    Escaped,
    MaxPointResult,
    disc_point_from_json_dict,
    escape_threshold,
    filled_julia_membership,
    good_reduction,
    leq,
    max_point,
    noncontainment_witness,
    pushforward,
    seminorm,
    verdict_to_json_dict,
)
from .bogomolov import (
    BogomolovCertificate,
    Verdict,
    certificate_from_json_dict,
    check_criterion,
    check_criterion_abstract,
)
from .bounds import (
    BoundRow,
    bound_table,
    bounds_to_csv,
    find_crossover,
    lcm_list,
    lcm_range,
    pottmeyer_bound,
    verify_lcm_exponential_bound,
)
from .cli import PolynomialSyntaxError, main, parse_polynomial, run
from .heights import (
    SURVEY_DISCLAIMER,
    HeightResult,
    LocalContribution,
    PreperiodicityCertificate,
    SurveyRecord,
    SurveyReport,
    archimedean_escape_rate,
    canonical_height,
    is_preperiodic,
    local_escape_rate,
    survey,
    survey_to_csv,
    weil_height,
)
from .newton import (
    NewtonPolygon,
    Segment,
    newton_polygon,
    polygon_from_json_dict,
    root_valuations,
)
from .polynomial import RationalPoly, format_polynomial
from .primes import factorize, is_prime
from .valuation import (
    INF,
    Place,
    PreconditionError,
    Valuation,
    as_fraction,
    in_value_group,
    is_finite,
    reduce_mod_prime_power,
    val,
)

__version__ = "0.1.0"

__all__ = [
    "BogomolovCertificate",
    "BoundRow",
    "BoundedCertified",
    "BoundedUpTo",
    "DiscPoint",
    "Escaped",
    "HeightResult",
    "INF",
    "LocalContribution",
    "MaxPointResult",
    "NewtonPolygon",
    "Place",
    "PolynomialSyntaxError",
    "PreconditionError",
    "PreperiodicityCertificate",
    "RationalPoly",
    "SURVEY_DISCLAIMER",
    "Segment",
    "SurveyRecord",
    "SurveyReport",
    "Valuation",
    "Verdict",
    "archimedean_escape_rate",
    "as_fraction",
    "bound_table",
    "bounds_to_csv",
    "canonical_height",
    "certificate_from_json_dict",
    "check_criterion",
    "check_criterion_abstract",
    "disc_point_from_json_dict",
    "escape_threshold",
    "factorize",
    "filled_julia_membership",
    "find_crossover",
    "format_polynomial",
    "good_reduction",
    "in_value_group",
    "is_finite",
    "is_preperiodic",
    "is_prime",
    "lcm_list",
    "lcm_range",
    "leq",
    "local_escape_rate",
    "main",
    "max_point",
    "newton_polygon",
    "noncontainment_witness",
    "parse_polynomial",
    "polygon_from_json_dict",
    "pottmeyer_bound",
    "pushforward",
    "reduce_mod_prime_power",
    "root_valuations",
    "run",
    "seminorm",
    "survey",
    "survey_to_csv",
    "val",
    "verdict_to_json_dict",
    "verify_lcm_exponential_bound",
    "weil_height",
]
