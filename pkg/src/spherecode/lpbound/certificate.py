"""Delsarte LP certificates: exact verification, catalog instances, JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..exactmath import (
    GegenbauerExpansion,
    MonomialPoly,
    RootList,
    as_fraction,
    expand,
    from_jacobi_scale,
    nonpositive_on_interval,
    rat_str,
    real_roots_with_multiplicity,
    reconstruct,
    to_jacobi_scale,
)


class CertificateRejected(ValueError):
    """A certificate condition failed; ``witness`` is a point or index when one exists."""

    def __init__(self, condition: str, witness=None):
        self.condition = condition
        self.witness = witness
        msg = condition if witness is None else f"{condition} (witness: {_fmt(witness)})"
        super().__init__(msg)


def _fmt(w) -> str:
    if isinstance(w, Fraction):
        return f"{rat_str(w)} ~ {float(w):.6g}"
    return str(w)


@dataclass(frozen=True)
class Certificate:
    dim: int
    s: Fraction
    expansion: GegenbauerExpansion
    poly: MonomialPoly
    roots: RootList
    m: int
    bound: Fraction

    @property
    def f0(self) -> Fraction:
        return self.expansion.f0

    @property
    def k(self) -> int:
        return self.expansion.k


def verify_certificate(d: int, e: GegenbauerExpansion, s) -> Certificate:
    """Check f0 > 0, f_i >= 0 and f <= 0 on [-1, s], all in exact arithmetic."""
    s = as_fraction(s)
    if e.dim != d:
        raise CertificateRejected(f"expansion is for dimension {e.dim}, not {d}")
    if not -1 <= s < 1:
        raise CertificateRejected("threshold s must lie in [-1, 1)", s)
    if e.k < 1:
        raise CertificateRejected("degenerate certificate: degree k must be at least 1")
    if e.f0 <= 0:
        raise CertificateRejected("f0 must be positive", e.f0)
    for i, c in enumerate(e.coeffs[1:], start=1):
        if c < 0:
            raise CertificateRejected(f"coefficient f_{i} is negative", c)
    f = reconstruct(e)
    if s > -1:
        verdict = nonpositive_on_interval(f, -1, s)
        if not verdict:
            raise CertificateRejected(f"f is positive somewhere on [-1, {rat_str(s)}]", verdict.witness)
    elif f(Fraction(-1)) > 0:
        raise CertificateRejected("f(-1) is positive", Fraction(-1))
    roots = real_roots_with_multiplicity(f, -1, s)
    return Certificate(d, s, e, f, roots, roots.max_multiplicity, f(Fraction(1)) / e.f0)


# catalog certificates


def e8_polynomial() -> MonomialPoly:
    h = Fraction(1, 2)
    return MonomialPoly.from_roots([-1, -h, -h, 0, 0, h], scale=Fraction(320, 3))


def leech_polynomial() -> MonomialPoly:
    h, q = Fraction(1, 2), Fraction(1, 4)
    return MonomialPoly.from_roots([-1, -h, -h, -q, -q, 0, 0, q, q, h], scale=Fraction(1490944, 15))


def cross_polytope_polynomial(d: int) -> MonomialPoly:
    # t(t + 1) = 1/d + Q_1 + (d-1)/d Q_2
    return MonomialPoly.from_roots([-1, 0])


def simplex_polynomial(d: int) -> MonomialPoly:
    return MonomialPoly([Fraction(1, d), 1])


def catalog_certificate(name: str) -> Certificate:
    """Certificate for a tight catalog code: e8_roots, leech_minimal,
    cross_polytope(d), simplex(d) (the regular (d+1)-point simplex)."""
    from ..codes.catalog import parse_name

    base, args = parse_name(name)
    if base == "e8_roots":
        return verify_certificate(8, expand(8, e8_polynomial()), Fraction(1, 2))
    if base == "leech_minimal":
        return verify_certificate(24, expand(24, leech_polynomial()), Fraction(1, 2))
    if base == "cross_polytope":
        d = args[0]
        return verify_certificate(d, expand(d, cross_polytope_polynomial(d)), Fraction(0))
    if base == "simplex":
        d, n = args
        if n != d + 1:
            raise ValueError("only the regular (d+1)-point simplex has a catalog certificate")
        return verify_certificate(d, expand(d, simplex_polynomial(d)), Fraction(-1, d))
    raise ValueError(f"no catalog certificate for {name!r}")


# JSON


def certificate_to_json(cert: Certificate, normalization: str = "unit") -> dict:
    coeffs = cert.expansion.coeffs if normalization == "unit" else to_jacobi_scale(cert.expansion)
    return {"dim": cert.dim, "s": rat_str(cert.s), "coeffs": [rat_str(c) for c in coeffs],
            "normalization": normalization}


def _parse(c) -> Fraction:
    if isinstance(c, float):
        raise ValueError(f"coefficient {c!r} is a float; write it as \"p/q\"")
    if isinstance(c, str) and ("." in c or "e" in c.lower()):
        raise ValueError(f"coefficient {c!r} is not a p/q rational")
    return as_fraction(c)


def expansion_from_json(obj: dict) -> tuple[GegenbauerExpansion, Fraction]:
    d = int(obj["dim"])
    coeffs = [_parse(c) for c in obj["coeffs"]]
    norm = obj.get("normalization", "unit")
    if norm == "unit":
        e = GegenbauerExpansion(d, tuple(coeffs))
    elif norm == "jacobi":
        e = from_jacobi_scale(d, coeffs)
    else:
        raise ValueError(f"unknown normalization {norm!r}")
    return e, _parse(obj["s"])


def load_certificate(path, s_override: Optional[Fraction] = None) -> Certificate:
    e, s = expansion_from_json(json.loads(Path(path).read_text()))
    if s_override is not None:
        s = as_fraction(s_override)
    return verify_certificate(e.dim, e, s)


def save_certificate(path, cert: Certificate, normalization: str = "unit") -> None:
    Path(path).write_text(json.dumps(certificate_to_json(cert, normalization), indent=2) + "\n")
