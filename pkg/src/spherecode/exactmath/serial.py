"""JSON form of polynomials: exact "p/q" strings, never decimals."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .gegenbauer import GegenbauerExpansion
from .poly import MonomialPoly, as_fraction


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def poly_to_json(p: Union[MonomialPoly, GegenbauerExpansion], dim: int | None = None) -> dict:
    if isinstance(p, GegenbauerExpansion):
        return {"basis": "gegenbauer", "dim": p.dim, "coeffs": [rat_str(c) for c in p.coeffs]}
    return {"basis": "monomial", "dim": dim, "coeffs": [rat_str(c) for c in p.coeffs]}


def poly_from_json(obj: dict) -> Union[MonomialPoly, GegenbauerExpansion]:
    basis = obj.get("basis", "monomial")
    coeffs = [_parse_rational(c) for c in obj["coeffs"]]
    if basis == "gegenbauer":
        return GegenbauerExpansion(int(obj["dim"]), tuple(coeffs))
    if basis == "monomial":
        return MonomialPoly(coeffs)
    raise ValueError(f"unknown basis {basis!r}")


def _parse_rational(c) -> Fraction:
    if isinstance(c, float):
        raise ValueError(f"coefficient {c!r} is a float; write it as \"p/q\"")
    if isinstance(c, str) and ("." in c or "e" in c.lower()):
        raise ValueError(f"coefficient {c!r} is not a p/q rational")
    return as_fraction(c)
