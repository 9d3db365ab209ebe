"""Delsarte LP certificates, tightness of codes and weak-stability constants."""

from .certificate import (
    Certificate,
    CertificateRejected,
    catalog_certificate,
    certificate_to_json,
    cross_polytope_polynomial,
    e8_polynomial,
    expansion_from_json,
    leech_polynomial,
    load_certificate,
    save_certificate,
    simplex_polynomial,
    verify_certificate,
)
from .constants import (
    Enclosure,
    WeakStabilityConstants,
    max_slope,
    min_max_abs,
    poly_max,
    weak_stability_constants,
)
from .sums import (
    SAlphaReport,
    TightnessReport,
    component_sums,
    linearization_coefficients,
    lp_slack,
    s_alpha_sums,
    second_derivative_bound,
    tightness_report,
)

__all__ = [
    "Certificate",
    "CertificateRejected",
    "Enclosure",
    "SAlphaReport",
    "TightnessReport",
    "WeakStabilityConstants",
    "catalog_certificate",
    "certificate_to_json",
    "component_sums",
    "cross_polytope_polynomial",
    "e8_polynomial",
    "expansion_from_json",
    "leech_polynomial",
    "linearization_coefficients",
    "load_certificate",
    "lp_slack",
    "max_slope",
    "min_max_abs",
    "poly_max",
    "s_alpha_sums",
    "save_certificate",
    "second_derivative_bound",
    "simplex_polynomial",
    "tightness_report",
    "verify_certificate",
    "weak_stability_constants",
]
