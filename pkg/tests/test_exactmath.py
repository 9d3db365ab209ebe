from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherecode.exactmath import (
    GegenbauerExpansion,
    MonomialPoly,
    as_fraction,
    expand,
    from_jacobi_scale,
    gegenbauer_eval,
    gegenbauer_float,
    gegenbauer_monomial,
    jacobi_scale,
    nonpositive_on_interval,
    poly_from_json,
    poly_gcd,
    poly_to_json,
    real_roots_with_multiplicity,
    reconstruct,
    square_free_decomposition,
    to_jacobi_scale,
)
from spherecode.lpbound import e8_polynomial, leech_polynomial

from oracles import E8_LISTED, E8_UNIT, LEECH_LISTED

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)
small_polys = st.lists(rationals, min_size=1, max_size=6).map(MonomialPoly)


# polynomial arithmetic


def test_as_fraction_rejects_floats():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/4") == F(3, 4)


def test_poly_basic_ops():
    t = MonomialPoly.t()
    p = (t + 1) * (t - 1)
    assert p == MonomialPoly([-1, 0, 1])
    assert p.degree == 2
    q, r = p.divmod(t - 1)
    assert q == t + 1 and r.is_zero()
    assert p(F(1, 2)) == F(-3, 4)
    assert p.derivative() == MonomialPoly([0, 2])
    assert (t**3).leading == 1


def test_poly_is_immutable():
    p = MonomialPoly([1, 2])
    with pytest.raises(AttributeError):
        p.coeffs = (F(3),)


def test_float_evaluation_vectorised():
    p = MonomialPoly([1, 0, 1])
    np.testing.assert_allclose(p(np.array([0.0, 1.0, 2.0])), [1, 2, 5])


@given(small_polys, small_polys)
def test_divmod_identity(a, b):
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(small_polys, small_polys)
def test_gcd_divides_both(a, b):
    if a.is_zero() or b.is_zero():
        return
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()


# Gegenbauer


def test_legendre_and_chebyshev():
    t = MonomialPoly.t()
    assert gegenbauer_monomial(3, 2) == (t * t * 3 - 1) / 2
    assert gegenbauer_monomial(3, 3) == (t**3 * 5 - t * 3) / 2
    assert gegenbauer_monomial(2, 3) == t**3 * 4 - t * 3


@pytest.mark.parametrize("d", [2, 3, 8, 24])
def test_unit_normalisation(d):
    for i in range(12):
        assert gegenbauer_eval(d, i, 1) == 1
        assert gegenbauer_monomial(d, i)(F(1)) == 1


@pytest.mark.parametrize("d", [3, 5, 8])
def test_orthogonality_numeric(d):
    # Gauss-Jacobi by dense quadrature on the weight (1 - t^2)^((d-3)/2)
    x, w = np.polynomial.legendre.leggauss(200)
    w = w * (1 - x * x) ** ((d - 3) / 2)
    q = gegenbauer_float(d, 5, x)
    for i in range(6):
        for j in range(i):
            assert abs(np.sum(w * q[i] * q[j])) < 1e-6


def test_eval_matches_monomial():
    for d in (4, 8, 24):
        for i in range(8):
            assert gegenbauer_eval(d, i, F(1, 3)) == gegenbauer_monomial(d, i)(F(1, 3))


@settings(max_examples=50)
@given(st.integers(2, 30), small_polys)
def test_expand_reconstruct_roundtrip(d, p):
    assert reconstruct(expand(d, p)) == p


def test_e8_expansion_unit_and_listed():
    e = expand(8, e8_polynomial())
    assert e.coeffs == E8_UNIT
    assert to_jacobi_scale(e) == E8_LISTED
    assert from_jacobi_scale(8, E8_LISTED) == e


def test_leech_expansion_listed():
    e = expand(24, leech_polynomial())
    assert to_jacobi_scale(e) == LEECH_LISTED
    assert e.f0 == 1
    assert sum(e.coeffs) == 196560  # f(1) = sum f_i under Q_i(1) = 1


def test_jacobi_scale_values():
    assert jacobi_scale(3, 4) == 1  # Legendre is already unit at 1
    assert jacobi_scale(8, 1) == F(7, 2)  # a = 5/2, binom(a + 1, 1)


def test_bad_dimension():
    with pytest.raises(ValueError):
        gegenbauer_eval(1, 2, 0)
    with pytest.raises(ValueError):
        GegenbauerExpansion(1, (1,))


# Sturm certification


def test_e8_roots_and_multiplicities():
    roots = real_roots_with_multiplicity(e8_polynomial(), -1, 1)
    assert roots.as_pairs() == [(F(-1), 1), (F(-1, 2), 2), (F(0), 2), (F(1, 2), 1)]
    assert roots.max_multiplicity == 2


def test_leech_roots():
    roots = real_roots_with_multiplicity(leech_polynomial(), -1, 1)
    assert roots.as_pairs() == [(F(-1), 1), (F(-1, 2), 2), (F(-1, 4), 2), (F(0), 2), (F(1, 4), 2), (F(1, 2), 1)]


def test_irrational_root_isolated():
    roots = real_roots_with_multiplicity(MonomialPoly([-2, 0, 1]), 0, 2)
    (r,) = roots
    assert not r.exact and r.multiplicity == 1
    assert r.hi - r.lo < F(1, 10**30)
    assert r.lo * r.lo < 2 < r.hi * r.hi


def test_nonpositive_verdicts():
    f = e8_polynomial()
    assert nonpositive_on_interval(f, -1, F(1, 2))
    v = nonpositive_on_interval(f, -1, F(3, 4))
    assert not v and F(1, 2) < v.witness < F(3, 4) and f(v.witness) > 0
    sq = MonomialPoly([0, 0, 1])
    assert not nonpositive_on_interval(sq, -1, 1)
    assert nonpositive_on_interval(-sq, -1, 1)


def test_square_free_decomposition():
    t = MonomialPoly.t()
    p = (t - 1) * (t + 2) ** 3
    parts = {m: f for f, m in square_free_decomposition(p)}
    assert parts[1] == t - 1 and parts[3] == t + 2


@settings(max_examples=60)
@given(st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=9), min_size=1, max_size=5))
def test_root_recovery_from_product(roots):
    p = MonomialPoly.from_roots(roots, scale=3)
    found = real_roots_with_multiplicity(p, -1, 1)
    expected = sorted({r: roots.count(r) for r in roots}.items())
    assert found.as_pairs() == expected


@settings(max_examples=60)
@given(small_polys)
def test_root_count_matches_numpy(p):
    if p.degree < 1:
        return
    found = real_roots_with_multiplicity(p, -2, 2)
    numeric = np.roots(p.float_coeffs()[::-1])
    # compare distinct real roots away from the interval ends
    real = sorted({round(float(z.real), 6) for z in numeric if abs(z.imag) < 1e-7 and -1.99 < z.real < 1.99})
    mine = sorted({round(float(r), 6) for r in found if -1.99 < float(r) < 1.99})
    if all(abs(a - b) > 1e-4 for a in real for b in real if a != b):
        assert len(mine) == len(real)


# serialisation


def test_json_roundtrip_exact():
    e = expand(8, e8_polynomial())
    obj = poly_to_json(e)
    assert obj["coeffs"][4] == "133/2"
    assert poly_from_json(obj) == e
    p = MonomialPoly([F(1, 3), 0, -2])
    assert poly_from_json(poly_to_json(p)) == p


def test_json_rejects_floats():
    with pytest.raises(ValueError):
        poly_from_json({"basis": "monomial", "coeffs": [0.5]})
    with pytest.raises(ValueError):
        poly_from_json({"basis": "monomial", "coeffs": ["0.5"]})
