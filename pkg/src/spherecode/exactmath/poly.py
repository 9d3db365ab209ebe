"""Univariate polynomials with exact rational coefficients (power basis)."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction. Floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class MonomialPoly:
    """p(t) = sum(coeffs[i] * t**i); immutable, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([as_fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("MonomialPoly is immutable")

    # construction helpers

    @classmethod
    def constant(cls, c) -> "MonomialPoly":
        return cls([c])

    @classmethod
    def t(cls) -> "MonomialPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable, scale=1) -> "MonomialPoly":
        """scale * prod(t - r) with multiplicity given by repetition in ``roots``."""
        p = cls.constant(scale)
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, MonomialPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([Fraction(other)])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        return "MonomialPoly(" + (" + ".join(terms) or "0") + ")"

    # arithmetic

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return MonomialPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return MonomialPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MonomialPoly([c * other for c in self.coeffs])
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return MonomialPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return MonomialPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MonomialPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        c = as_fraction(c)
        return MonomialPoly([x / c for x in self.coeffs])

    def divmod(self, other: "MonomialPoly") -> tuple["MonomialPoly", "MonomialPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if self.degree < dq:
            return MonomialPoly(), self
        quot = [Fraction(0)] * (self.degree - dq + 1)
        for k in range(self.degree - dq, -1, -1):
            q = rem[k + dq] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return MonomialPoly(quot), MonomialPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "MonomialPoly":
        return MonomialPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "MonomialPoly":
        return self / self.leading if self.coeffs else self

    # evaluation

    def __call__(self, t):
        """Exact Horner evaluation for rationals; float evaluation otherwise."""
        if isinstance(t, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        if isinstance(t, str):
            return self(as_fraction(t))
        return self.eval_float(t)

    def eval_float(self, t):
        """Vectorised float evaluation (numpy arrays welcome)."""
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc if acc.ndim else float(acc)

    # integer view used by the Sturm machinery

    def primitive(self) -> tuple[Fraction, tuple[int, ...]]:
        """Return (content, integer coefficients) with self == content * ints,
        ints primitive with positive leading coefficient."""
        if not self.coeffs:
            return Fraction(0), ()
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), tuple(i // g for i in ints)

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)


def _lift(x) -> MonomialPoly:
    if isinstance(x, MonomialPoly):
        return x
    return MonomialPoly.constant(x)


def poly_gcd(a: MonomialPoly, b: MonomialPoly) -> MonomialPoly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()
