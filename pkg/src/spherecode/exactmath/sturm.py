"""Exact real-root isolation and sign certification via Sturm sequences.

All work happens on primitive integer polynomials so that evaluating a sign at
a rational point p/q is a single homogeneous integer Horner pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, floor, ceil
from functools import reduce
from typing import Optional

from .poly import MonomialPoly, as_fraction, poly_gcd

IntPoly = tuple[int, ...]

REFINE_WIDTH = Fraction(1, 10**30)


def _sign_at(g: IntPoly, x: Fraction) -> int:
    """sign(g(x)) for integer coefficients g (low -> high)."""
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for c in reversed(g):
        acc = acc * p + c * qpow
        qpow *= q
    # acc == q**deg * g(x)
    return (acc > 0) - (acc < 0)


def _content(a: list[int]) -> int:
    return reduce(gcd, a, 0)


def _prem_signed(a: IntPoly, b: IntPoly) -> list[int]:
    """|lc(b)|^e * (a mod b), computed with integer pseudo-division."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(a) - len(b) + 1
    if steps <= 0:
        return r
    for k in range(len(a) - len(b), -1, -1):
        coef = r[k + db]
        r = [x * lb for x in r]
        if coef:
            for j in range(db + 1):
                r[k + j] -= coef * b[j]
        r.pop()
    if lb < 0 and steps % 2 == 1:
        r = [-x for x in r]
    while r and r[-1] == 0:
        r.pop()
    return r


def sturm_sequence(g: IntPoly) -> list[IntPoly]:
    """Sturm chain g, g', -rem, ... with positive content stripping."""
    seq = [tuple(g)]
    d = [i * c for i, c in enumerate(g)][1:]
    if not d:
        return seq
    c = _content(d)
    seq.append(tuple(x // c for x in d))
    while True:
        r = _prem_signed(seq[-2], seq[-1])
        if not r:
            break
        c = _content(r)
        seq.append(tuple(-x // c for x in r))
        if len(r) == 1:
            break
    return seq


def _variations(seq: list[IntPoly], x: Fraction) -> int:
    v = 0
    last = 0
    for g in seq:
        s = _sign_at(g, x)
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


@dataclass(frozen=True)
class Root:
    """A real root: exact when lo == hi, else the unique root lies in (lo, hi)."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Optional[Fraction]:
        return self.lo if self.exact else None

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class RootList:
    entries: tuple[Root, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def max_multiplicity(self) -> int:
        return max((r.multiplicity for r in self.entries), default=0)

    def as_pairs(self) -> list[tuple]:
        """[(Fraction or (lo, hi), multiplicity)]."""
        return [((r.value if r.exact else (r.lo, r.hi)), r.multiplicity) for r in self.entries]


class _Isolator:
    """Root isolation for one square-free primitive integer polynomial."""

    def __init__(self, g: IntPoly):
        self.g = g
        self.seq = sturm_sequence(g)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct roots in (lo, hi]."""
        return _variations(self.seq, lo) - _variations(self.seq, hi)

    def sign(self, x: Fraction) -> int:
        return _sign_at(self.g, x)

    def isolate(self, a: Fraction, b: Fraction) -> list[Root]:
        out: list[Root] = []
        if len(self.g) <= 1:
            return out
        if self.sign(a) == 0:
            out.append(Root(a, a))
        stack = [(a, b, _variations(self.seq, a), _variations(self.seq, b))]
        while stack:
            lo, hi, vlo, vhi = stack.pop()
            n = vlo - vhi
            if n == 0:
                continue
            if n == 1:
                if self.sign(hi) == 0:
                    out.append(Root(hi, hi))
                else:
                    out.append(self._clean(lo, hi))
                continue
            mid = (lo + hi) / 2
            vmid = _variations(self.seq, mid)
            stack.append((lo, mid, vlo, vmid))
            stack.append((mid, hi, vmid, vhi))
        out.sort(key=lambda r: r.lo)
        return [self._try_rational(r) for r in out]

    def _clean(self, lo: Fraction, hi: Fraction) -> Root:
        # the root is in (lo, hi); make sure lo itself is not a (different) root
        while self.sign(lo) == 0:
            mid = (lo + hi) / 2
            if self.sign(mid) == 0:
                return Root(mid, mid)
            if self.count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return Root(lo, hi)

    def _try_rational(self, r: Root) -> Root:
        """A rational root p/q of a primitive integer poly has q | lead, so
        lead * root is an integer; shrink until at most one candidate remains."""
        if r.exact:
            return r
        lead = abs(self.g[-1])
        lo, hi = self.narrow(r.lo, r.hi, Fraction(1, 2 * lead))
        for m in range(floor(lo * lead), ceil(hi * lead) + 1):
            x = Fraction(m, lead)
            if lo < x < hi and self.sign(x) == 0:
                return Root(x, x)
        return Root(lo, hi)

    def narrow(self, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
        """Bisect (lo, hi) holding one simple root with sign change until width."""
        slo = self.sign(lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = self.sign(mid)
            if s == 0:
                return mid, mid
            if s == slo:
                lo = mid
            else:
                hi = mid
        return lo, hi


def square_free_decomposition(p: MonomialPoly) -> list[tuple[MonomialPoly, int]]:
    """Yun's algorithm over Q: p = c * prod(a_i ** i) with a_i square-free, coprime."""
    if p.degree < 1:
        return []
    f = p.monic()
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f // a0
    c = df // a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def square_free_part(p: MonomialPoly) -> MonomialPoly:
    if p.degree < 1:
        return p
    return (p // poly_gcd(p, p.derivative())).monic()


def real_roots_with_multiplicity(p: MonomialPoly, a, b, width: Fraction = REFINE_WIDTH) -> RootList:
    """All real roots of ``p`` in [a, b] with exact multiplicities.

    Rational roots come back exact; irrational ones as isolating intervals of
    width below ``width``.
    """
    a, b = as_fraction(a), as_fraction(b)
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root list")
    if a > b:
        raise ValueError("empty interval")
    roots: list[Root] = []
    for factor, mult in square_free_decomposition(p):
        iso = _Isolator(factor.primitive()[1])
        for r in iso.isolate(a, b):
            if not r.exact:
                lo, hi = iso.narrow(r.lo, r.hi, width)
                r = Root(lo, hi)
            roots.append(Root(r.lo, r.hi, mult))
    roots.sort(key=lambda r: r.lo)
    return RootList(tuple(roots))


def isolate_distinct_roots(p: MonomialPoly, a, b) -> list[Root]:
    """Distinct roots of p in [a, b], isolated but not refined (multiplicity 1)."""
    a, b = as_fraction(a), as_fraction(b)
    if p.degree < 1:
        return []
    iso = _Isolator(square_free_part(p).primitive()[1])
    return iso.isolate(a, b)


@dataclass(frozen=True)
class SignVerdict:
    holds: bool
    witness: Optional[Fraction] = None

    def __bool__(self):
        return self.holds


def nonpositive_on_interval(p: MonomialPoly, a, b) -> SignVerdict:
    """Decide exactly whether p(t) <= 0 for every t in [a, b].

    Between consecutive isolated roots the sign is constant, so it is enough to
    test a, b, the (non-root) ends of every isolating interval and one point in
    every gap between intervals.
    """
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if p.is_zero():
        return SignVerdict(True)
    roots = isolate_distinct_roots(p, a, b)
    samples = [a]
    prev = a
    for r in roots:
        if r.lo > prev:
            samples.append((prev + r.lo) / 2)
        if not r.exact:
            samples.extend((r.lo, r.hi))
        prev = r.hi
    if b > prev:
        samples.append((prev + b) / 2)
    samples.append(b)
    for x in samples:
        if p(x) > 0:
            return SignVerdict(False, x)
    return SignVerdict(True)
