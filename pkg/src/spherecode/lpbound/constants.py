"""Weak-stability constants of a certificate by exact critical-point analysis.

Extrema of polynomials on an interval are found among the endpoints and the
real roots of the derivative. Rational critical points are evaluated exactly.
Irrational ones are isolated to width 1e-30 and evaluated on the isolating
interval with a derivative bound, so every reported value comes with a
rational enclosure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactmath import MonomialPoly, Root, as_fraction, real_roots_with_multiplicity
from .certificate import Certificate


@dataclass(frozen=True)
class Enclosure:
    """lo <= value <= hi; exact when lo == hi. ``at`` locates the extremum."""

    lo: Fraction
    hi: Fraction
    at: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.hi if self.exact else (self.lo + self.hi) / 2)


def _lipschitz(p: MonomialPoly, lo: Fraction, hi: Fraction) -> Fraction:
    """Upper bound for |p'| on [lo, hi]."""
    r = max(abs(lo), abs(hi), Fraction(1))
    return sum((abs(c) * r ** j for j, c in enumerate(p.derivative().coeffs)), Fraction(0))


def _value_at_root(p: MonomialPoly, root: Root) -> Enclosure:
    if root.exact:
        v = p(root.lo)
        return Enclosure(v, v, root.lo)
    ends = (p(root.lo), p(root.hi))
    slack = _lipschitz(p, root.lo, root.hi) * (root.hi - root.lo)
    return Enclosure(min(ends) - slack, max(ends) + slack, root.midpoint())


def _critical_points(p: MonomialPoly, a: Fraction, b: Fraction) -> list[Root]:
    dp = p.derivative()
    if dp.is_zero():
        return []
    return [r for r in real_roots_with_multiplicity(dp, a, b)]


def poly_max(p: MonomialPoly, a, b) -> Enclosure:
    """Enclosure of max p on [a, b]."""
    a, b = as_fraction(a), as_fraction(b)
    cands = [Enclosure(p(a), p(a), a), Enclosure(p(b), p(b), b)]
    cands += [_value_at_root(p, r) for r in _critical_points(p, a, b)]
    best_lo = max(c.lo for c in cands)
    best_hi = max(c.hi for c in cands)
    at = max(cands, key=lambda c: c.hi).at
    return Enclosure(best_lo, best_hi, at)


def slope_polynomial(f: MonomialPoly, s: Fraction) -> tuple[MonomialPoly, bool]:
    """(g, exact) with g = f / (t - s) when f(s) = 0.

    When f(s) < 0 the quotient (f - f(s)) / (t - s) is returned instead; it
    dominates f / (t - s) for t > s, so maxima computed from it are upper
    bounds. ``exact`` is False in that case.
    """
    fs = f(s)
    q, rem = (f - fs).divmod(MonomialPoly([-s, 1]))
    assert rem.is_zero()
    return q, fs == 0


def max_slope(f: MonomialPoly, s, upper) -> Enclosure:
    """max of f(t) / (t - s) on [s, upper]."""
    s = as_fraction(s)
    g, _ = slope_polynomial(f, s)
    return poly_max(g, s, as_fraction(upper))


def minimal_root_above(f: MonomialPoly, s: Fraction) -> Fraction:
    """The minimal root of f in (s, 1), else 1. Irrational roots resolve to the
    upper end of their isolating interval."""
    for r in real_roots_with_multiplicity(f, s, 1):
        if r.lo > s or (not r.exact and r.hi > s):
            if r.exact and r.lo == 1:
                break
            return r.lo if r.exact else r.hi
    return Fraction(1)


def _cofactors(f: MonomialPoly, roots) -> list[MonomialPoly]:
    out = []
    for r in roots:
        lin = MonomialPoly([-r.lo, 1]) ** r.multiplicity
        q, rem = f.divmod(lin)
        assert rem.is_zero()
        out.append(q)
    return out


def min_max_abs(polys: list[MonomialPoly], a=-1, b=1) -> Enclosure:
    """Enclosure of min over t in [a, b] of max_j |h_j(t)|.

    The minimum of the upper envelope occurs at an endpoint, at a critical
    point of some h_j, or where two of the |h_j| cross.
    """
    a, b = as_fraction(a), as_fraction(b)
    points: list[Root] = [Root(a, a), Root(b, b)]
    for h in polys:
        points += _critical_points(h, a, b)
    for h1, h2 in itertools.combinations(polys, 2):
        for diff in (h1 - h2, h1 + h2):
            if not diff.is_zero() and diff.degree >= 1:
                points += list(real_roots_with_multiplicity(diff, a, b))
    best = None
    for r in points:
        vals = []
        for h in polys:
            e = _value_at_root(h, r)
            lo = Fraction(0) if e.lo <= 0 <= e.hi else min(abs(e.lo), abs(e.hi))
            vals.append((lo, max(abs(e.lo), abs(e.hi))))
        enc = Enclosure(max(v[0] for v in vals), max(v[1] for v in vals), r.midpoint())
        if best is None or enc.hi < best.hi:
            best = enc
    return best


@dataclass(frozen=True)
class WeakStabilityConstants:
    m: int
    r: Fraction
    M: float
    Mprime: float
    K: float
    eps_count: float
    eps_geom: Fraction
    M_enclosure: Enclosure
    Mprime_enclosure: Enclosure
    M_full: Enclosure  # max of f(t)/(t - s) on [s, 1]
    slope_exact: bool  # False when f(s) != 0 and a dominating quotient was used

    def as_dict(self) -> dict:
        return {"m": self.m, "r": self.r, "M": self.M, "Mprime": self.Mprime, "K": self.K,
                "eps_count": self.eps_count, "eps_geom": self.eps_geom,
                "M_full": float(self.M_full), "M_full_exact": self.M_full.exact}


def weak_stability_constants(cert: Certificate, N=None) -> WeakStabilityConstants:
    """Constants r, M, M', K and the admissible epsilon ranges for ``cert``.

    M is taken on [s, (s + r)/2] and M' as the min over [-1, 1] of
    max_j |f(t) / (t - x_j)^{m_j}| over the roots x_j of f in [-1, s].
    """
    N = cert.bound if N is None else as_fraction(N)
    f, s = cert.poly, cert.s
    r = minimal_root_above(f, s)
    g, slope_exact = slope_polynomial(f, s)
    M_enc = poly_max(g, s, (s + r) / 2)
    M_full = poly_max(g, s, Fraction(1))
    if all(x.exact for x in cert.roots):
        Mp_enc = min_max_abs(_cofactors(f, cert.roots))
    else:
        Mp_enc = _min_max_abs_numeric(f, cert.roots)
    M = float(M_enc.hi)
    Mp = float(Mp_enc.lo) if Mp_enc.lo > 0 else float(Mp_enc)
    if M <= 0 or Mp <= 0:
        raise ValueError("degenerate certificate: M and M' must be positive")
    Nf = float(N)
    K = max((Nf * Nf - Nf - 1) * M / Mp, 1.0)
    eps_count = float(cert.f0 / (N * M_enc.hi))
    return WeakStabilityConstants(cert.m, r, M, Mp, K, eps_count, (r - s) / 2, M_enc, Mp_enc, M_full, slope_exact)


def _min_max_abs_numeric(f: MonomialPoly, roots) -> Enclosure:
    """Fallback for irrational roots: dense grid plus local refinement in floats."""
    fc = f.float_coeffs()[::-1]
    hs = []
    for r in roots:
        q = fc
        for _ in range(r.multiplicity):
            q, _ = np.polydiv(q, np.array([1.0, -float(r)]))
        hs.append(q)
    t = np.linspace(-1, 1, 200001)
    phi = np.max([np.abs(np.polyval(h, t)) for h in hs], axis=0)
    v = Fraction(float(phi.min()))
    return Enclosure(v, v, Fraction(float(t[phi.argmin()])))
