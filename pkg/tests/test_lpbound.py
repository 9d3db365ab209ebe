import json
from fractions import Fraction as F

import numpy as np
import pytest

from spherecode.codes import LEECH_REFS, SphericalCode, generate
from spherecode.exactmath import GegenbauerExpansion, expand, gegenbauer_float, reconstruct
from spherecode.lpbound import (
    CertificateRejected,
    catalog_certificate,
    certificate_to_json,
    component_sums,
    e8_polynomial,
    expansion_from_json,
    linearization_coefficients,
    load_certificate,
    lp_slack,
    max_slope,
    min_max_abs,
    poly_max,
    s_alpha_sums,
    save_certificate,
    tightness_report,
    verify_certificate,
    weak_stability_constants,
)
from spherecode.perturb import perturb_code

from oracles import LEECH_LINEARIZATION_LISTED


def direct_slack(c, e):
    """Brute-force oracle: N f(1) + sum_{x != y} f(<x,y>) - N^2 f0 in floats."""
    G = c.points @ c.points.T
    f = reconstruct(e)
    return float(np.sum(f.eval_float(G))) - c.N**2 * float(e.f0)


# certificates


def test_e8_certificate(e8_cert):
    assert e8_cert.bound == 240 and e8_cert.m == 2 and e8_cert.f0 == 1


def test_leech_certificate(leech_cert):
    assert leech_cert.bound == 196560 and leech_cert.m == 2


def test_rejects_threshold_three_quarters():
    with pytest.raises(CertificateRejected) as exc:
        verify_certificate(8, expand(8, e8_polynomial()), F(3, 4))
    w = exc.value.witness
    assert F(1, 2) < w < F(3, 4)
    assert e8_polynomial()(w) > 0


@pytest.mark.parametrize("coeffs,needle", [
    ((0, 1), "f0"),
    ((1, -1, 1), "f_1"),
    ((1,), "degree"),
])
def test_rejections_name_condition(coeffs, needle):
    with pytest.raises(CertificateRejected, match=needle):
        verify_certificate(3, GegenbauerExpansion(3, coeffs), F(0))


def test_rejects_dimension_mismatch():
    with pytest.raises(CertificateRejected):
        verify_certificate(4, expand(8, e8_polynomial()), F(1, 2))


@pytest.mark.parametrize("d", [2, 3, 5, 9])
def test_cross_polytope_and_simplex_certificates(d):
    cp = catalog_certificate(f"cross_polytope({d})")
    assert cp.bound == 2 * d and cp.m == 1
    sx = catalog_certificate(f"simplex({d},{d + 1})")
    assert sx.bound == d + 1


def test_certificate_json_roundtrip(tmp_path, leech_cert):
    for norm in ("unit", "jacobi"):
        path = tmp_path / f"{norm}.json"
        save_certificate(path, leech_cert, norm)
        back = load_certificate(path)
        assert back.expansion == leech_cert.expansion and back.bound == 196560
    obj = certificate_to_json(leech_cert)
    obj["coeffs"][0] = 1.0
    with pytest.raises(ValueError):
        expansion_from_json(obj)


def test_load_with_threshold_override(tmp_path, e8_cert):
    path = tmp_path / "e8.json"
    path.write_text(json.dumps(certificate_to_json(e8_cert)))
    with pytest.raises(CertificateRejected):
        load_certificate(path, F(3, 4))


# slack and component sums


def test_e8_slack_and_sums(e8, e8_cert):
    assert lp_slack(e8, e8_cert.expansion) == 0
    assert component_sums(e8, e8_cert.expansion) == [0] * 6


def test_cross_polytope_slack_positive():
    c = generate("cross_polytope(3)")
    e = expand(3, e8_polynomial())
    slack = lp_slack(c, e)
    assert isinstance(slack, F) and slack > 0
    assert float(slack) == pytest.approx(direct_slack(c, e), rel=1e-12)


def test_single_point_sums():
    c = generate("simplex(4,1)")
    e = expand(4, e8_polynomial())
    assert component_sums(c, e) == [1] * e.k


def test_dimension_mismatch(e8):
    with pytest.raises(ValueError):
        lp_slack(e8, expand(3, e8_polynomial()))


def test_slack_nonnegative_random_codes():
    rng = np.random.default_rng(20261017)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        N = int(rng.integers(1, 25))
        X = rng.standard_normal((N, d))
        c = SphericalCode.from_points(X)
        k = int(rng.integers(1, 7))
        coeffs = [F(int(rng.integers(-3, 4)))] + [F(int(rng.integers(0, 5)), int(rng.integers(1, 4))) for _ in range(k)]
        e = GegenbauerExpansion(d, tuple(coeffs))
        assert lp_slack(c, e) >= -1e-9 * N * N
        sums = component_sums(c, e)
        assert min(sums) >= -1e-9 * N * N


def test_float_component_sums_match_direct():
    c = generate("icosahedron")
    G = c.gram()
    q = gegenbauer_float(3, 5, G)
    assert component_sums(c, 5) == pytest.approx([float(q[i].sum()) for i in range(1, 6)], abs=1e-9)
    # the icosahedron is a spherical 5-design
    assert max(abs(x) for x in component_sums(c, 5)) < 1e-9


# tightness


def test_tightness_reports(e8, e8_cert):
    assert tightness_report(e8, e8_cert).is_tight
    sub = e8.subset(range(239))
    rep = tightness_report(sub, e8_cert)
    assert rep.applicable and not rep.is_tight
    assert float(rep.lp_slack) == pytest.approx(direct_slack(sub, e8_cert.expansion), rel=1e-12)


def test_tightness_inapplicable_above_threshold():
    rep = tightness_report(generate("icosahedron"), catalog_certificate("cross_polytope(3)"))
    assert not rep.applicable and not rep.is_tight


@pytest.mark.parametrize("name", ["cross_polytope(4)", "simplex(5,6)", "kissing(7)"])
def test_other_tight_codes(name):
    c = generate(name)
    if name.startswith("kissing"):
        return  # no catalog certificate; covered by census tests
    assert tightness_report(c, catalog_certificate(name)).is_tight


def test_float_code_tightness(e8, e8_cert):
    fl = SphericalCode.from_points(e8.points)
    rep = tightness_report(fl, e8_cert)
    assert rep.is_tight and not rep.exact


# weak-stability constants


def _grid_checks(cert, w):
    f = cert.poly
    s, r = float(cert.s), float(w.r)
    t = np.linspace(s + 1e-9, (s + r) / 2, 20001)
    assert w.M == pytest.approx(float(np.max(f.eval_float(t) / (t - s))), rel=1e-6)
    grid = np.linspace(-1, 1, 200001)
    roots = np.array([float(r) for r in cert.roots])
    grid = grid[np.min(np.abs(grid[:, None] - roots[None, :]), axis=1) > 1e-7]
    phi = np.max([np.abs(f.eval_float(grid) / (grid - float(r)) ** r.multiplicity) for r in cert.roots], axis=0)
    assert w.Mprime <= float(np.min(phi)) * (1 + 1e-9)
    assert w.Mprime == pytest.approx(float(np.min(phi)), rel=1e-4)


def test_e8_constants(e8_cert):
    w = weak_stability_constants(e8_cert, 240)
    assert w.m == 2 and w.r == 1
    assert w.eps_count >= 5e-6
    assert w.M_full.exact and w.M_full.hi == 480
    assert w.K >= 1 and w.Mprime > 0
    assert w.K == pytest.approx((240**2 - 240 - 1) * w.M / w.Mprime)
    assert w.eps_geom == F(1, 4)
    _grid_checks(e8_cert, w)


def test_leech_constants(leech_cert):
    w = weak_stability_constants(leech_cert, 196560)
    assert w.m == 2 and w.eps_count >= 1e-11
    assert w.M_full.exact and w.M_full.hi == 393120
    _grid_checks(leech_cert, w)


def test_cross_polytope_constants():
    cert = catalog_certificate("cross_polytope(5)")
    w = weak_stability_constants(cert)
    assert w.m == 1 and w.r == 1
    assert w.M == pytest.approx(1.5)  # t + 1 on [0, 1/2]


def test_poly_max_irrational_critical_point():
    # 1 - (t^2 - 1/2)^2 has its maxima at t = +-1/sqrt(2)
    from spherecode.exactmath import MonomialPoly
    p = MonomialPoly([F(3, 4), 0, 1, 0, -1])
    enc = poly_max(p, 0, 1)
    assert enc.lo <= 1 <= enc.hi and enc.hi - enc.lo < F(1, 10**25)


def test_min_max_abs_simple():
    from spherecode.exactmath import MonomialPoly
    # max(|t|, |1 - t|) is smallest at t = 1/2
    enc = min_max_abs([MonomialPoly([0, 1]), MonomialPoly([1, -1])])
    assert enc.exact and enc.hi == F(1, 2)


def test_max_slope_on_full_interval(e8_cert):
    assert max_slope(e8_cert.poly, F(1, 2), 1).hi == 480


# S_alpha


def test_s_alpha_exact_codes_vanish(e8):
    rep = s_alpha_sums(e8)
    assert all(x == 0 for x in rep.S)
    assert all(x == 0 for x in rep.linearized)


def test_s_alpha_perturbed_e8(e8):
    eps = 1e-4
    p = perturb_code(e8, eps, "tangent_noise", 3)
    rep = s_alpha_sums(p, tuple(float(a) for a in e8.reference_values), tol=0.1, k=4)
    N = e8.N
    i_half = 3
    assert abs(rep.S[i_half]) <= (N * N - N) * eps
    for res, bound in zip(rep.residuals, rep.residual_bounds):
        assert abs(res) <= bound


def test_s_alpha_stray_pair(e8):
    with pytest.raises(ValueError, match="stray"):
        s_alpha_sums(e8, (F(-1), F(0), F(1, 2)))


def test_leech_linearization_against_listing():
    mine = linearization_coefficients(24, LEECH_REFS, 4)
    listed = LEECH_LINEARIZATION_LISTED
    diffs = [(i, j) for i in range(4) for j in range(6) if mine[i][j] != listed[i][j]]
    # the printed table has a -3 for -3/23 at S_0 and swapped signs at +-1/4 in the last row
    assert diffs == [(2, 3), (3, 2), (3, 4)]
    assert mine[2][3] == F(-3, 23)
    assert mine[3][2] == -listed[3][2] and mine[3][4] == -listed[3][4]
