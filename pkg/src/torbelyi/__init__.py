"""torbelyi: exact arithmetic for Toroidal Belyi pairs.

Quasi-critical points, ramification indices, divisors, torsion orders and
generated subgroups of Belyi maps on elliptic curves -- all over Q and
quadratic fields Q(sqrt(d)), with no floating point anywhere.
"""

from .belyi import (
    BelyiPair,
    QuasiCriticalReport,
    analyze,
    critical_points,
    decompose_verify,
    fibers,
    group_structure,
    is_belyi,
    subgroup_closure,
)
from .curve import CurvePoint, EllipticCurve, INFINITY, affine
from .divisor import Divisor, div_of_function, line_divisor, principal_check, pullback
from .funcfield import (
    CurveFunction,
    INF,
    ScalarMap,
    parse_curve_function,
    parse_scalar_map,
)
from .isogeny import IsogenyMap, compose_pair, generate_family, isogeny_verify, mul_by_m, verify_main_theorem
from .localseries import LocalChart, PowerSeries, branch_expand, ord_at, ram_index
from .normalize import (
    NormalizationCertificate,
    normalization_certificate,
    quasi_sum,
    translate_map,
    verify_divisor_shapes,
)
from .numfield import FieldElement, Polynomial, QuadraticField, factor_deg_le2, fe_sqrt
from .corpus import CorpusEntry, RunConfig, load_corpus, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "BelyiPair",
    "CorpusEntry",
    "CurveFunction",
    "CurvePoint",
    "Divisor",
    "EllipticCurve",
    "FieldElement",
    "INF",
    "INFINITY",
    "IsogenyMap",
    "LocalChart",
    "NormalizationCertificate",
    "Polynomial",
    "PowerSeries",
    "QuadraticField",
    "QuasiCriticalReport",
    "RunConfig",
    "ScalarMap",
    "affine",
    "analyze",
    "branch_expand",
    "compose_pair",
    "critical_points",
    "decompose_verify",
    "div_of_function",
    "factor_deg_le2",
    "fe_sqrt",
    "fibers",
    "generate_family",
    "group_structure",
    "is_belyi",
    "isogeny_verify",
    "line_divisor",
    "load_corpus",
    "mul_by_m",
    "normalization_certificate",
    "ord_at",
    "parse_curve_function",
    "parse_scalar_map",
    "principal_check",
    "pullback",
    "quasi_sum",
    "ram_index",
    "run_pipeline",
    "subgroup_closure",
    "translate_map",
    "verify_divisor_shapes",
    "verify_main_theorem",
]
