"""Exact engine for Mahler-measure variation series, mirror maps and
their integrality tables over Fermat-type weight systems."""

from .series import LogSeries, Rational, Series, lagrange_coeffs
from .weights import (
    KVector,
    Model,
    aut_order,
    counts,
    enumerate_solutions,
    floor_gap_check,
    floor_gaps,
    to_model,
)
from .mirror import (
    ConvergenceError,
    MahlerMeasure,
    MirrorData,
    PFOperator,
    alpha,
    f_series,
    g0_series,
    gamma,
    h_series,
    local_mirror_map,
    mahler_measure,
    mirror_map,
    multinomial_diag,
    pf2_applicable,
    pf_apply,
    pf_operator,
)
from .inversion import (
    ConsistencyError,
    IntegralityReport,
    LambertTable,
    format_rational,
    g0_expansions,
    integrality_report,
    lambert_invert,
    lambert_series,
    mobius,
    product_check,
    u_series,
    v_series,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ConvergenceError",
    "IntegralityReport",
    "KVector",
    "LambertTable",
    "LogSeries",
    "MahlerMeasure",
    "MirrorData",
    "Model",
    "PFOperator",
    "Rational",
    "Series",
    "alpha",
    "aut_order",
    "counts",
    "enumerate_solutions",
    "f_series",
    "floor_gap_check",
    "floor_gaps",
    "format_rational",
    "g0_expansions",
    "g0_series",
    "gamma",
    "h_series",
    "integrality_report",
    "lagrange_coeffs",
    "lambert_invert",
    "lambert_series",
    "local_mirror_map",
    "mahler_measure",
    "mirror_map",
    "mobius",
    "multinomial_diag",
    "pf2_applicable",
    "pf_apply",
    "pf_operator",
    "product_check",
    "to_model",
    "u_series",
    "v_series",
]
