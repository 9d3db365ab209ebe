"""Extended binary Golay code and the Leech lattice minimal shell.

Coordinates are scaled so that minimal Leech vectors are integer vectors of
squared norm 32 (the usual 1/sqrt(8) normalisation dropped).
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from pathlib import Path

import numpy as np

LEECH_N = 196560
LEECH_NORM = 32


@lru_cache(maxsize=None)
def golay_generator() -> np.ndarray:
    """12 x 24 generator [I | B]; B is the 11 x 11 quadratic-residue circulant
    (non-residues and the diagonal set) bordered by a row and column of ones."""
    qr = {(x * x) % 11 for x in range(1, 11)}
    circ = np.array([[0 if (j - i) % 11 in qr else 1 for j in range(11)] for i in range(11)], dtype=np.uint8)
    border = np.zeros((12, 12), dtype=np.uint8)
    border[0, 1:] = 1
    border[1:, 0] = 1
    border[1:, 1:] = circ
    return np.hstack([np.eye(12, dtype=np.uint8), border])


@lru_cache(maxsize=None)
def golay_codewords() -> np.ndarray:
    """All 4096 codewords as a (4096, 24) uint8 array, message order."""
    msgs = np.array(list(itertools.product((0, 1), repeat=12)), dtype=np.int64)
    return ((msgs @ golay_generator().astype(np.int64)) % 2).astype(np.uint8)


def in_golay(words: np.ndarray) -> np.ndarray:
    """Syndrome test for rows of a (..., 24) 0/1 array. The code is self-dual,
    so [B^T | I] is a parity-check matrix for G = [I | B]."""
    words = np.asarray(words, dtype=np.int64) & 1
    border = golay_generator()[:, 12:].astype(np.int64)
    syndrome = (words[..., :12] @ border + words[..., 12:]) % 2
    return ~syndrome.any(axis=-1)


def leech_member(x: np.ndarray) -> np.ndarray:
    """Membership in the (sqrt 8 scaled) Leech lattice for integer rows.

    x is in the lattice iff all coordinates share a parity m, the word
    ((x_i - m) / 2 mod 2) lies in the Golay code and sum(x) = 4m (mod 8).
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.int64))
    m = x[:, :1] & 1
    same_parity = ((x & 1) == m).all(axis=1)
    word = ((x - m) // 2) & 1
    sums_ok = (x.sum(axis=1) - 4 * m[:, 0]) % 8 == 0
    return same_parity & in_golay(word) & sums_ok


def _shape_44() -> np.ndarray:
    rows = []
    for i, j in itertools.combinations(range(24), 2):
        for si, sj in itertools.product((4, -4), repeat=2):
            v = np.zeros(24, dtype=np.int8)
            v[i], v[j] = si, sj
            rows.append(v)
    return np.array(rows)


def _shape_2_8() -> np.ndarray:
    # supports of the (2^8, 0^16) shape must be octads for the Golay test to
    # pass at all, so candidates are octads x all 256 sign patterns
    cw = golay_codewords()
    octads = cw[cw.sum(axis=1) == 8]
    signs = np.array(list(itertools.product((1, -1), repeat=8)), dtype=np.int8)
    out = np.zeros((len(octads) * len(signs), 24), dtype=np.int8)
    k = 0
    for oc in octads:
        idx = np.flatnonzero(oc)
        block = np.zeros((len(signs), 24), dtype=np.int8)
        block[:, idx] = 2 * signs
        out[k:k + len(signs)] = block
        k += len(signs)
    return out


def _shape_3_1() -> np.ndarray:
    # the +-1 pattern is forced mod 4 by a Golay word; both signs of the 3 are
    # offered and the membership test keeps one of them
    cw = golay_codewords().astype(np.int8)
    base = 1 - 2 * cw  # +1 off the word, -1 on it
    out = np.empty((len(cw) * 24 * 2, 24), dtype=np.int8)
    k = 0
    for p in range(24):
        for three in (3, -3):
            block = base.copy()
            block[:, p] = three
            out[k:k + len(cw)] = block
            k += len(cw)
    return out


def enumerate_leech_minimal() -> np.ndarray:
    """The 196560 minimal vectors, enumerated by shape and filtered through
    :func:`leech_member`."""
    parts = []
    for cand in (_shape_44(), _shape_2_8(), _shape_3_1()):
        keep = leech_member(cand)
        parts.append(cand[keep])
    vecs = np.concatenate(parts).astype(np.int8)
    if len(vecs) != LEECH_N:
        raise RuntimeError(f"Leech enumeration produced {len(vecs)} vectors, expected {LEECH_N}")
    return vecs


def leech_minimal_vectors(cache_dir: str | os.PathLike | None = None) -> np.ndarray:
    """Memoised minimal vectors; SPHERECODE_CACHE names an on-disk cache."""
    cache_dir = cache_dir or os.environ.get("SPHERECODE_CACHE")
    if cache_dir:
        path = Path(cache_dir) / "leech_minimal_int8.npy"
        if path.exists():
            vecs = np.load(path)
            if vecs.shape == (LEECH_N, 24) and (np.einsum("ij,ij->i", vecs.astype(np.int64), vecs.astype(np.int64)) == LEECH_NORM).all():
                return vecs
        vecs = _cached_enumeration()
        path.parent.mkdir(parents=True, exist_ok=True)
        np.save(path, vecs)
        return vecs
    return _cached_enumeration()


@lru_cache(maxsize=1)
def _cached_enumeration() -> np.ndarray:
    vecs = enumerate_leech_minimal()
    vecs.setflags(write=False)
    return vecs
