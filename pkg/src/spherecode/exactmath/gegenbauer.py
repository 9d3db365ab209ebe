"""Gegenbauer polynomials Q_i for S^{d-1}, normalised so that Q_i(1) = 1.

Orthogonal on [-1, 1] for the weight (1 - t^2)^((d-3)/2). For d = 2 they are
the Chebyshev polynomials T_i, for d = 3 the Legendre polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .poly import MonomialPoly, as_fraction


def _check_dim(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


def gegenbauer_eval(d: int, i: int, t) -> Fraction:
    """Q_i(t) by the three-term recursion, exactly.

    The recursion step is applied from i = 1 onwards (Q_2 needs it).
    """
    _check_dim(d)
    if i < 0:
        raise ValueError("degree must be non-negative")
    t = as_fraction(t)
    prev, cur = Fraction(1), t
    if i == 0:
        return prev
    for k in range(1, i):
        prev, cur = cur, ((2 * k + d - 2) * t * cur - k * prev) / (k + d - 2)
    return cur


@lru_cache(maxsize=None)
def _gegenbauer_table(d: int, n: int) -> tuple[MonomialPoly, ...]:
    t = MonomialPoly.t()
    table = [MonomialPoly.constant(1), t]
    for k in range(1, n):
        nxt = (t * table[k] * (2 * k + d - 2) - table[k - 1] * k) / (k + d - 2)
        table.append(nxt)
    return tuple(table[: n + 1])


def gegenbauer_monomial(d: int, i: int) -> MonomialPoly:
    """Power-basis coefficients of Q_i in dimension d."""
    _check_dim(d)
    if i < 0:
        raise ValueError("degree must be non-negative")
    return _gegenbauer_table(d, max(i, 1))[i]


@dataclass(frozen=True)
class GegenbauerExpansion:
    """f = sum(coeffs[i] * Q_i) for the dimension ``dim``."""

    dim: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        _check_dim(self.dim)
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))

    @property
    def k(self) -> int:
        return len(self.coeffs) - 1

    @property
    def f0(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __call__(self, t):
        return reconstruct(self)(t)


def expand(d: int, p: MonomialPoly) -> GegenbauerExpansion:
    """Gegenbauer coefficients of ``p`` by back-substitution from the top degree."""
    _check_dim(d)
    if p.is_zero():
        return GegenbauerExpansion(d, (Fraction(0),))
    n = p.degree
    basis = _gegenbauer_table(d, max(n, 1))
    rem = p
    coeffs = [Fraction(0)] * (n + 1)
    for i in range(n, -1, -1):
        if rem.degree == i:
            c = rem.leading / basis[i].leading
            coeffs[i] = c
            rem = rem - basis[i] * c
    assert rem.is_zero()
    return GegenbauerExpansion(d, tuple(coeffs))


def reconstruct(e: GegenbauerExpansion) -> MonomialPoly:
    basis = _gegenbauer_table(e.dim, max(e.k, 1))
    out = MonomialPoly()
    for c, q in zip(e.coeffs, basis):
        if c:
            out = out + q * c
    return out


def jacobi_scale(d: int, i: int) -> Fraction:
    """P_i(1) for the Jacobi polynomial P_i^(a,a), a = (d-3)/2, i.e. binom(i+a, i).

    P_i^(a,a) = jacobi_scale(d, i) * Q_i, so a coefficient listed against the
    Jacobi normalisation equals the unit-normalised one divided by this factor.
    """
    _check_dim(d)
    a = Fraction(d - 3, 2)
    out = Fraction(1)
    for j in range(1, i + 1):
        out = out * (a + j) / j
    return out


def to_jacobi_scale(e: GegenbauerExpansion) -> tuple[Fraction, ...]:
    return tuple(c / jacobi_scale(e.dim, i) for i, c in enumerate(e.coeffs))


def from_jacobi_scale(d: int, coeffs) -> GegenbauerExpansion:
    return GegenbauerExpansion(d, tuple(as_fraction(c) * jacobi_scale(d, i) for i, c in enumerate(coeffs)))


def gegenbauer_float(d: int, n: int, t):
    """Q_0..Q_n evaluated in floating point at ``t`` (array allowed).

    Returns a list of arrays shaped like ``t``. Used for Gram-matrix sums of
    float-mode codes where exact arithmetic is not available.
    """
    import numpy as np

    _check_dim(d)
    t = np.asarray(t, dtype=float)
    out = [np.ones_like(t), t.copy()]
    for k in range(1, n):
        out.append(((2 * k + d - 2) * t * out[k] - k * out[k - 1]) / (k + d - 2))
    return out[: n + 1]
