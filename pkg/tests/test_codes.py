from fractions import Fraction as F

import numpy as np
import pytest

from spherecode.codes import (
    E8_REFS,
    LEECH_REFS,
    SphericalCode,
    UnknownCodeError,
    census,
    census_csv,
    common_neighbor_count,
    dumps_code,
    generate,
    golay_codewords,
    gram_entry,
    in_golay,
    leech_member,
    leech_minimal_vectors,
    loads_code,
    max_offdiag,
    partners,
    read_code,
    value_histogram,
    write_code,
)
from spherecode.codes.census import antipodal_representatives, pair_values

from oracles import E8_PER_POINT

# Golay code


def test_golay_weight_enumerator():
    w = golay_codewords().sum(axis=1)
    counts = {k: int((w == k).sum()) for k in np.unique(w)}
    assert counts == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


def test_golay_membership_test():
    cw = golay_codewords()
    assert in_golay(cw).all()
    flipped = cw[1:50].copy()
    flipped[:, 3] ^= 1
    assert not in_golay(flipped).any()


# Leech minimal shell


def test_leech_shell_count_and_norm():
    Z = leech_minimal_vectors().astype(np.int64)
    assert Z.shape == (196560, 24)
    assert (np.einsum("ij,ij->i", Z, Z) == 32).all()
    assert leech_member(Z).all()
    assert len({row.tobytes() for row in Z}) == 196560


def test_leech_shape_counts():
    Z = leech_minimal_vectors()
    nz = (Z != 0).sum(axis=1)
    # 1104 of shape (4^2, 0^22), 97152 of shape (2^8, 0^16), 98304 of shape (3, 1^23)
    assert int((nz == 2).sum()) == 1104
    assert int((nz == 8).sum()) == 97152
    assert int((nz == 24).sum()) == 98304


def test_leech_member_rejects_short_and_odd():
    v = np.zeros(24, dtype=np.int64)
    v[0] = 4
    assert not leech_member(v)[0]
    w = np.zeros(24, dtype=np.int64)
    w[:4] = 2  # weight-4 support is not a Golay word
    assert not leech_member(w)[0]
    u = np.ones(24, dtype=np.int64)
    u[0] = 3  # (3, 1^23): sum 26, not 4 mod 8
    assert not leech_member(u)[0]
    u[0] = -3  # (-3, 1^23): sum 20 = 4 mod 8, a minimal vector
    assert leech_member(u)[0]


def test_leech_cache_roundtrip(tmp_path):
    a = leech_minimal_vectors(tmp_path)
    assert (tmp_path / "leech_minimal_int8.npy").exists()
    b = leech_minimal_vectors(tmp_path)
    assert np.array_equal(a, b)


# catalog


@pytest.mark.parametrize("name,N,d", [
    ("simplex(3,4)", 4, 3), ("cross_polytope(5)", 10, 5), ("ngon(7)", 7, 2), ("icosahedron", 12, 3),
    ("cell600", 120, 4), ("e8_roots", 240, 8), ("kissing(7)", 56, 7), ("kissing(6)", 27, 6),
    ("kissing(5)", 16, 5),
])
def test_catalog_sizes_and_units(name, N, d):
    c = generate(name)
    assert (c.N, c.dim) == (N, d)
    np.testing.assert_allclose(np.linalg.norm(c.points, axis=1), 1, atol=1e-12)
    G = c.gram()
    np.testing.assert_allclose(c.points @ c.points.T, G, atol=1e-12)


@pytest.mark.parametrize("name", ["simplex(4,5)", "cross_polytope(3)", "icosahedron", "cell600", "e8_roots",
                                  "kissing(7)", "kissing(6)", "kissing(5)", "ngon(6)"])
def test_catalog_inner_product_sets(name):
    c = generate(name)
    vals = pair_values(c)
    refs = np.array(sorted(float(a) for a in c.reference_values))
    assert np.allclose(vals, refs, atol=1e-9)
    assert float(max_offdiag(c)) == pytest.approx(float(c.threshold), abs=1e-12)


def test_kissing_from_leech():
    assert generate("kissing(23)").N == 4600
    assert generate("kissing(22)").N == 891


def test_e8_exact_model():
    c = generate("e8_roots")
    assert c.is_exact and c.exact.n0 == 8
    assert set(np.unique(c.integer_gram())) == {-8, -4, 0, 4, 8}
    assert gram_entry(c, 0, 0) == 1


def test_unknown_names():
    for bad in ("nope", "simplex(3)", "kissing(9)", "simplex(3,9)", "e8_roots(2)"):
        with pytest.raises(UnknownCodeError):
            generate(bad)


def test_rejects_non_unit_rows():
    with pytest.raises(ValueError):
        SphericalCode(2, np.array([[1.0, 0.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        SphericalCode(1, np.array([[1.0]]))


# census


def test_e8_census(e8):
    cen = census(e8)
    assert cen.exact and cen.row_uniform and cen.catch_all == 0
    assert cen.per_point == E8_PER_POINT
    assert cen.counts == (240, 13440, 30240, 13440)
    assert cen.total == 240 * 239


def test_census_float_matches_exact(e8):
    fl = SphericalCode.from_points(e8.points, reference_values=tuple(float(a) for a in E8_REFS))
    a, b = census(e8), census(fl, tol=1e-6)
    assert a.counts == b.counts and b.catch_all == 0
    assert max(b.max_deviation) < 1e-12


def test_census_thread_determinism():
    c = generate("cell600")
    a = census(c, threads=1)
    b = census(c, threads=4)
    assert a == b


def test_census_catch_all_and_stray(e8):
    cen = census(e8, (F(-1), F(0), F(1, 2)))
    assert cen.catch_all == 13440
    i, j = cen.stray_pair
    assert gram_entry(e8, i, j) == F(-1, 2)


def test_census_non_uniform_subset(e8):
    cen = census(e8.subset(range(239)))
    assert not cen.row_uniform and cen.per_point is None
    assert cen.total == 239 * 238


def test_census_float_catch_all():
    c = generate("icosahedron")
    cen = census(c, (-1.0, 0.0), tol=0.1)
    assert cen.catch_all == 120
    assert cen.stray_pair is not None


def test_value_histogram_antipodal_halving(e8):
    assert antipodal_representatives(e8) is not None
    assert antipodal_representatives(generate("simplex(3,4)")) is None
    assert value_histogram(e8) == {F(-1): 240, F(-1, 2): 13440, F(0): 30240, F(1, 2): 13440}


def test_census_derives_refs_for_exact_files(e8):
    c = loads_code(dumps_code(e8))
    assert c.reference_values is None
    assert census(c).counts == (240, 13440, 30240, 13440)


def test_common_neighbors_e8(e8):
    for k in partners(e8, 0, 0)[:20]:
        assert common_neighbor_count(e8, 0, int(k), F(1, 2)) == 12


def test_gram_entry_bounds(e8):
    with pytest.raises(IndexError):
        gram_entry(e8, 0, 240)


def test_max_offdiag_needs_two_points():
    with pytest.raises(ValueError):
        max_offdiag(generate("simplex(3,1)"))


# file formats


def test_code_file_roundtrip(tmp_path):
    for name in ("e8_roots", "icosahedron", "simplex(3,4)", "kissing(6)"):
        c = generate(name)
        path = tmp_path / "c.txt"
        write_code(path, c)
        back = read_code(path)
        assert back.is_exact == c.is_exact
        np.testing.assert_allclose(back.gram(), c.gram(), atol=1e-14)


def test_census_csv(e8):
    text = census_csv(census(e8))
    lines = text.strip().splitlines()
    assert lines[0] == "alpha,count,max_deviation"
    assert lines[1].startswith("-1/1,240")
    assert lines[-1].startswith("other,0")
