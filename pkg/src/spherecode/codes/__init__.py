"""Catalog constructions, Gram access and the streamed inner-product census."""

from .catalog import (
    CATALOG_NAMES,
    E8_REFS,
    LEECH_REFS,
    ExactModel,
    SphericalCode,
    UnknownCodeError,
    cross_polytope,
    e8_roots,
    generate,
    leech_minimal,
    parse_name,
    simplex,
)
from .census import (
    Census,
    census,
    common_neighbor_count,
    gram_entry,
    iter_dot_blocks,
    max_offdiag,
    partners,
    value_histogram,
)
from .io import census_csv, dumps_code, loads_code, read_code, write_code
from .leech import enumerate_leech_minimal, golay_codewords, in_golay, leech_member, leech_minimal_vectors

__all__ = [
    "CATALOG_NAMES",
    "Census",
    "E8_REFS",
    "ExactModel",
    "LEECH_REFS",
    "SphericalCode",
    "UnknownCodeError",
    "census",
    "census_csv",
    "common_neighbor_count",
    "cross_polytope",
    "dumps_code",
    "e8_roots",
    "enumerate_leech_minimal",
    "generate",
    "golay_codewords",
    "gram_entry",
    "in_golay",
    "iter_dot_blocks",
    "leech_member",
    "leech_minimal",
    "leech_minimal_vectors",
    "loads_code",
    "max_offdiag",
    "parse_name",
    "partners",
    "read_code",
    "simplex",
    "value_histogram",
    "write_code",
]
