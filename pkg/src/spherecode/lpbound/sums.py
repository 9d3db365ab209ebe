"""LP slack, Gegenbauer component sums, tightness reports and S_alpha statistics.

Exact-model codes go through the exact value histogram, so every sum is a
Fraction. Float codes stream Gram blocks and return floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from ..codes.catalog import SphericalCode
from ..codes.census import census, iter_dot_blocks, max_offdiag, value_histogram
from ..exactmath import GegenbauerExpansion, gegenbauer_eval, gegenbauer_float, gegenbauer_monomial, reconstruct
from .certificate import Certificate

Scalar = Union[Fraction, float]


def _check_dim(c: SphericalCode, d: int) -> None:
    if c.dim != d:
        raise ValueError(f"dimension mismatch: code lives in {c.dim}, expansion is for {d}")


def _float_block_sum(c: SphericalCode, fn) -> float:
    total = 0.0
    for _, block in iter_dot_blocks(c):
        total += float(np.sum(fn(block)))
    return total


def lp_slack(c: SphericalCode, e: GegenbauerExpansion, threads: int = 1) -> Scalar:
    """N f(1) + sum_{x != y} f(<x, y>) - N^2 f0."""
    _check_dim(c, e.dim)
    f = reconstruct(e)
    N = c.N
    if c.is_exact:
        hist = value_histogram(c, threads)
        total = N * f(Fraction(1)) + sum(n * f(v) for v, n in hist.items())
        return total - N * N * e.f0
    total = _float_block_sum(c, f.eval_float)
    return total - N * N * float(e.f0)


def component_sums(c: SphericalCode, e_or_k: Union[GegenbauerExpansion, int], threads: int = 1,
                   d: Optional[int] = None) -> list[Scalar]:
    """sum_{x, y} Q_i(<x, y>) over all ordered pairs (diagonal included), i = 1..k."""
    if isinstance(e_or_k, GegenbauerExpansion):
        d, k = e_or_k.dim, e_or_k.k
    else:
        k, d = int(e_or_k), d if d is not None else c.dim
    _check_dim(c, d)
    N = c.N
    if c.is_exact:
        hist = value_histogram(c, threads)
        return [N + sum(n * gegenbauer_eval(d, i, v) for v, n in hist.items()) for i in range(1, k + 1)]
    sums = [0.0] * k
    for _, block in iter_dot_blocks(c):
        q = gegenbauer_float(d, k, block)
        for i in range(1, k + 1):
            sums[i - 1] += float(q[i].sum())
    return sums


@dataclass(frozen=True)
class TightnessReport:
    lp_slack: Optional[Scalar]
    component_sums: tuple
    is_tight: bool
    applicable: bool
    max_offdiag: Scalar
    exact: bool
    n_points: int
    bound: Fraction
    reason: str = ""


def _is_zero(x: Scalar, scale: float, tol: float) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol * scale


def tightness_report(c: SphericalCode, cert: Certificate, threads: int = 1, tol: float = 1e-9) -> TightnessReport:
    """Slack and component sums of ``c`` against ``cert``.

    The report is inapplicable when some inner product exceeds the
    certificate threshold. Float codes use |x| <= tol * N^2 as zero.
    """
    _check_dim(c, cert.dim)
    mo = max_offdiag(c, threads) if c.N > 1 else Fraction(-1)
    over = mo > cert.s if c.is_exact else float(mo) > float(cert.s) + 1e-12
    if over:
        return TightnessReport(None, (), False, False, mo, c.is_exact, c.N, cert.bound,
                               reason=f"max inner product {float(mo):.6g} exceeds s = {cert.s}")
    slack = lp_slack(c, cert.expansion, threads)
    sums = tuple(component_sums(c, cert.expansion, threads))
    scale = float(c.N) ** 2 * max(1.0, float(max(abs(x) for x in cert.expansion.coeffs)))
    tight = _is_zero(slack, scale, tol) and all(_is_zero(x, float(c.N) ** 2, tol) for x in sums)
    return TightnessReport(slack, sums, tight, True, mo, c.is_exact, c.N, cert.bound)


# S_alpha statistics and the first-order expansion of the component sums


def gegenbauer_derivative_at(d: int, i: int, alpha) -> Scalar:
    q = gegenbauer_monomial(d, i).derivative()
    return q(alpha) if isinstance(alpha, (int, Fraction)) else q.eval_float(float(alpha))


def linearization_coefficients(d: int, refs: Sequence, k: int = 4) -> list[list[Scalar]]:
    """Rows i = 1..k of Q_i'(alpha) over the reference values."""
    return [[gegenbauer_derivative_at(d, i, a) for a in refs] for i in range(1, k + 1)]


def second_derivative_bound(d: int, i: int) -> Fraction:
    """max |Q_i''| on [-1, 1].

    Derivatives of Q_i are positive multiples of Gegenbauer polynomials of a
    larger parameter, which peak in absolute value at the endpoints.
    """
    q2 = gegenbauer_monomial(d, i).derivative().derivative()
    return max(abs(q2(Fraction(1))), abs(q2(Fraction(-1))))


@dataclass(frozen=True)
class SAlphaReport:
    reference_values: tuple
    counts: tuple
    S: tuple
    max_deviation: float
    base: tuple  # N + sum_alpha count * Q_i(alpha)
    linearized: tuple  # sum_alpha Q_i'(alpha) S_alpha
    component_sums: tuple
    residual_bounds: tuple  # N^2 c_i h^2, plus a rounding allowance for float codes
    coefficients: list = field(repr=False, default_factory=list)

    @property
    def residuals(self) -> tuple:
        return tuple(cs - b - lin for cs, b, lin in zip(self.component_sums, self.base, self.linearized))


def s_alpha_sums(c: SphericalCode, reference_values: Sequence | None = None, tol: float = 0.1,
                 k: int = 4, threads: int = 1) -> SAlphaReport:
    """S_alpha = sum over ordered pairs in bucket alpha of (<x, y> - alpha)."""
    refs = tuple(reference_values if reference_values is not None else c.reference_values)
    cen = census(c, refs, tol=tol, threads=threads)
    if cen.catch_all:
        i, j = cen.stray_pair if cen.stray_pair else (None, None)
        raise ValueError(f"{cen.catch_all} pair(s) fall outside every bucket; first stray pair ({i}, {j})")
    d, N = c.dim, c.N
    S = cen.deviation_sums
    coeffs = linearization_coefficients(d, refs, k)
    lin, base = [], []
    for i in range(1, k + 1):
        row = coeffs[i - 1]
        lin.append(sum(q * s for q, s in zip(row, S)) if c.is_exact else
                   float(sum(float(q) * float(s) for q, s in zip(row, S))))
        b = N + sum(n * gegenbauer_eval(d, i, a) if isinstance(a, (int, Fraction)) else
                    n * gegenbauer_float(d, i, float(a))[i] for n, a in zip(cen.counts, refs))
        base.append(b if c.is_exact else float(b))
    h = max(cen.max_deviation, default=0.0)
    sums = component_sums(c, k, threads, d=d)
    # float sums of N^2 terms of size at most 1 carry roughly N^2 * machine-epsilon of rounding
    rounding = 0.0 if c.is_exact else 64.0 * float(N) ** 2 * np.finfo(float).eps
    bounds = tuple(float(N) ** 2 * float(second_derivative_bound(d, i)) * h * h + rounding
                   for i in range(1, k + 1))
    return SAlphaReport(refs, cen.counts, S, h, tuple(base), tuple(lin), tuple(sums), bounds, coeffs)
