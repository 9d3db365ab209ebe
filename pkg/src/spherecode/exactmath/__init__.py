"""Exact rational polynomial arithmetic, Gegenbauer bases and Sturm certification."""

from .gegenbauer import (
    GegenbauerExpansion,
    expand,
    from_jacobi_scale,
    gegenbauer_eval,
    gegenbauer_float,
    gegenbauer_monomial,
    jacobi_scale,
    reconstruct,
    to_jacobi_scale,
)
from .poly import MonomialPoly, as_fraction, poly_gcd
from .serial import poly_from_json, poly_to_json, rat_str
from .sturm import (
    Root,
    RootList,
    SignVerdict,
    isolate_distinct_roots,
    nonpositive_on_interval,
    real_roots_with_multiplicity,
    square_free_decomposition,
    sturm_sequence,
)

__all__ = [
    "GegenbauerExpansion",
    "MonomialPoly",
    "Root",
    "RootList",
    "SignVerdict",
    "as_fraction",
    "expand",
    "from_jacobi_scale",
    "jacobi_scale",
    "to_jacobi_scale",
    "gegenbauer_eval",
    "gegenbauer_float",
    "gegenbauer_monomial",
    "isolate_distinct_roots",
    "nonpositive_on_interval",
    "poly_from_json",
    "poly_gcd",
    "poly_to_json",
    "rat_str",
    "real_roots_with_multiplicity",
    "reconstruct",
    "square_free_decomposition",
    "sturm_sequence",
]
