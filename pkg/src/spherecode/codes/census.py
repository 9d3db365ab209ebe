"""Streamed inner-product statistics over all ordered pairs of a code.

Nothing here materialises the N x N Gram matrix: rows are processed in
blocks and the per-block histograms are reduced in block order, so results
do not depend on the thread schedule.
"""

from __future__ import annotations

import math
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .catalog import Scalar, SphericalCode

DEFAULT_CAP = 0.1
_BLOCK_ENTRIES = 1 << 24


@dataclass(frozen=True)
class Census:
    reference_values: tuple
    counts: tuple[int, ...]
    catch_all: int
    max_deviation: tuple[float, ...]
    n_points: int
    exact: bool
    row_uniform: bool
    per_point: Optional[tuple[int, ...]] = None
    stray_pair: Optional[tuple[int, int]] = None
    deviation_sums: Optional[tuple] = None

    @property
    def total(self) -> int:
        return sum(self.counts) + self.catch_all

    def count(self, alpha) -> int:
        return self.counts[self._index(alpha)]

    def _index(self, alpha) -> int:
        for k, a in enumerate(self.reference_values):
            if a == alpha or (not self.exact and abs(float(a) - float(alpha)) < 1e-12):
                return k
        raise KeyError(alpha)

    def as_dict(self) -> dict:
        return dict(zip(self.reference_values, self.counts))


def _check_refs(refs: Sequence) -> tuple:
    refs = tuple(refs)
    if any(float(b) <= float(a) for a, b in zip(refs, refs[1:])):
        raise ValueError("reference values must be strictly increasing")
    return refs


def _block_rows(c: SphericalCode) -> int:
    return max(1, min(c.N, _BLOCK_ENTRIES // max(c.N, 1)))


def _exact_matrix(c: SphericalCode) -> tuple[np.ndarray, np.dtype]:
    Z = c.exact.Z
    bound = int(np.abs(Z).max()) ** 2 * Z.shape[1]
    if bound < 2**24:
        return Z.astype(np.float32), np.float32
    if bound < 2**53:
        return Z.astype(np.float64), np.float64
    return Z.astype(np.int64), np.int64


def iter_dot_blocks(c: SphericalCode, rows: int | None = None) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, block) with block = integer (exact) or float dots of rows start.. vs all."""
    rows = rows or _block_rows(c)
    if c.exact is not None:
        Z, _ = _exact_matrix(c)
        for start in range(0, c.N, rows):
            yield start, np.rint(Z[start:start + rows] @ Z.T).astype(np.int64)
    else:
        X = c.points
        for start in range(0, c.N, rows):
            yield start, X[start:start + rows] @ X.T


def _map_blocks(fn, c: SphericalCode, threads: int, rows: int | None = None):
    rows = rows or _block_rows(c)
    starts = list(range(0, c.N, rows))
    if threads <= 1 or len(starts) == 1:
        return [fn(s, min(s + rows, c.N)) for s in starts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: fn(s, min(s + rows, c.N)), starts))


_REPS_CACHE: "weakref.WeakKeyDictionary[SphericalCode, Optional[np.ndarray]]" = weakref.WeakKeyDictionary()


def antipodal_representatives(c: SphericalCode) -> Optional[np.ndarray]:
    """Indices of one point from each antipodal pair, or None when the exact
    model is not closed under negation. Row -x of the Gram matrix is the
    negation of row x, so histograms only need these rows."""
    if c.exact is None:
        return None
    if c in _REPS_CACHE:
        return _REPS_CACHE[c]
    Z = np.ascontiguousarray(c.exact.Z, dtype=np.int64)
    nz = Z != 0
    first = Z[np.arange(len(Z)), nz.argmax(axis=1)]
    reps = np.flatnonzero(first > 0)
    out = None
    if 2 * len(reps) == len(Z) and (first != 0).all():
        keys = {row.tobytes() for row in Z}
        if len(keys) == len(Z) and all((-Z[i]).tobytes() in keys for i in reps):
            out = reps
    _REPS_CACHE[c] = out
    return out


def _map_rows(fn, rows: np.ndarray, threads: int, block: int):
    chunks = [rows[k:k + block] for k in range(0, len(rows), block)]
    if threads <= 1 or len(chunks) == 1:
        return [fn(ch) for ch in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def census(c: SphericalCode, reference_values: Sequence | None = None, tol: float = DEFAULT_CAP,
           threads: int = 1) -> Census:
    """Histogram of <x_i, x_j>, i != j, against ``reference_values``.

    Exact mode compares integer dot products with alpha * n0 exactly and
    ignores ``tol``. Float mode assigns each value to its nearest reference
    and routes deviations above ``tol`` to the catch-all bucket. An exact code
    without reference values uses the distinct values it actually has.
    """
    if reference_values is None and not c.reference_values and c.exact is not None and c.N > 1:
        reference_values = sorted(value_histogram(c, threads))
    refs = _check_refs(reference_values if reference_values is not None else (c.reference_values or ()))
    if c.exact is not None:
        return _census_exact(c, refs, threads)
    return _census_float(c, refs, tol, threads)


def _census_exact(c: SphericalCode, refs: tuple, threads: int) -> Census:
    n0 = c.exact.n0
    Z, dtype = _exact_matrix(c)
    width = 2 * n0 + 1
    N = c.N
    reps = antipodal_representatives(c)
    rows = reps if reps is not None else np.arange(N)

    def work(idx):
        dots = Z[idx] @ Z.T
        if dtype != np.int64:
            dots = dots.astype(np.int32)  # exact small integers already
        dots += n0
        dots += (np.arange(len(idx), dtype=dots.dtype) * width)[:, None]
        hist = np.bincount(dots.ravel(), minlength=len(idx) * width).reshape(len(idx), width)
        hist[:, 2 * n0] -= 1  # the diagonal <x, x> = n0
        return hist

    ref_bins = []
    for a in refs:
        a = Fraction(a)
        v = a * n0
        ref_bins.append(int(v) + n0 if v.denominator == 1 and -n0 <= v <= n0 else None)

    total_hist = np.zeros(width, dtype=np.int64)
    first_row = None
    uniform = True
    for hist in _map_rows(work, rows, threads, _block_rows(c)):
        total_hist += hist.sum(axis=0)
        mirror = None
        if reps is not None:
            # the row of -x is the reversed row of x; off the diagonal that
            # moves the antipode to value -n0 and drops the self pair
            mirror = hist[:, ::-1].copy()
            mirror[:, 0] += 1
            mirror[:, 2 * n0] -= 1
            total_hist += mirror.sum(axis=0)
        if first_row is None:
            first_row = hist[0].copy()
        if uniform and not ((hist == first_row).all() and (mirror is None or (mirror == first_row).all())):
            uniform = False
    if c not in _HIST_CACHE:
        _HIST_CACHE[c] = {Fraction(v - n0, n0): int(n) for v, n in enumerate(total_hist) if n}
    counts = [int(total_hist[b]) if b is not None else 0 for b in ref_bins]
    catch = int(total_hist.sum()) - sum(counts)
    stray = _find_stray_exact(c, [b - n0 for b in ref_bins if b is not None]) if catch else None
    per_point = None
    if uniform:
        per_point = tuple(int(first_row[b]) if b is not None else 0 for b in ref_bins)
    return Census(refs, tuple(counts), catch, tuple(0.0 for _ in refs), N, True, uniform, per_point, stray,
                  tuple(Fraction(0) for _ in refs))


_HIST_CACHE: "weakref.WeakKeyDictionary[SphericalCode, dict]" = weakref.WeakKeyDictionary()


def value_histogram(c: SphericalCode, threads: int = 1) -> dict:
    """Exact mode only: {Fraction inner product: ordered off-diagonal pair count}.

    Memoised per code object; for the Leech shell this is the expensive pass.
    """
    if c.exact is None:
        raise ValueError("value_histogram needs an exact model")
    hit = _HIST_CACHE.get(c)
    if hit is not None:
        return hit
    n0 = c.exact.n0
    Z, dtype = _exact_matrix(c)
    width = 2 * n0 + 1
    reps = antipodal_representatives(c)
    rows = reps if reps is not None else np.arange(c.N)

    def work(idx):
        dots = Z[idx] @ Z.T
        if dtype != np.int64:
            dots = dots.astype(np.int32)
        dots += n0
        return np.bincount(dots.ravel(), minlength=width)

    total = np.zeros(width, dtype=np.int64)
    for h in _map_rows(work, rows, threads, _block_rows(c)):
        total += h
        if reps is not None:
            total += h[::-1]
    total[2 * n0] -= c.N
    out = {Fraction(v - n0, n0): int(n) for v, n in enumerate(total) if n}
    _HIST_CACHE[c] = out
    return out


def _find_stray_exact(c: SphericalCode, allowed: list[int]) -> Optional[tuple[int, int]]:
    allowed_arr = np.array(allowed + [c.exact.n0], dtype=np.int64)
    for start, block in iter_dot_blocks(c):
        bad = ~np.isin(block, allowed_arr)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return int(start + i), int(j)
    # duplicated points show up as off-diagonal n0 values
    for start, block in iter_dot_blocks(c):
        hits = np.argwhere(block == c.exact.n0)
        for i, j in hits:
            if start + i != j:
                return int(start + i), int(j)
    return None


def _census_float(c: SphericalCode, refs: tuple, tol: float, threads: int) -> Census:
    X = c.points
    N = c.N
    r = np.array([float(a) for a in refs])
    R = len(r)
    mids = (r[1:] + r[:-1]) / 2 if R > 1 else np.array([])

    def work(lo, hi):
        dots = X[lo:hi] @ X.T
        rows = np.arange(hi - lo)
        if R:
            bucket = np.searchsorted(mids, dots, side="right")
            dev = np.abs(dots - r[bucket])
            bucket = np.where(dev > tol, R, bucket)
        else:
            bucket = np.full(dots.shape, R)
            dev = np.zeros(dots.shape)
        bucket[rows, rows + lo] = R + 1  # diagonal
        hist = np.bincount((bucket + (rows * (R + 2))[:, None]).ravel(), minlength=(hi - lo) * (R + 2))
        hist = hist.reshape(hi - lo, R + 2)
        maxdev = np.zeros(R)
        devsum = np.zeros(R)
        for k in range(R):
            m = bucket == k
            if m.any():
                maxdev[k] = dev[m].max()
                # pairwise summation keeps the signed sums reproducible
                devsum[k] = (dots[m] - r[k]).sum()
        stray = None
        if hist[:, R].any():
            i, j = np.argwhere(bucket == R)[0]
            stray = (int(lo + i), int(j))
        return hist[:, : R + 1], maxdev, devsum, stray

    counts = np.zeros(R + 1, dtype=np.int64)
    maxdev = np.zeros(R)
    devsum = np.zeros(R)
    first_row = None
    uniform = True
    stray = None
    for hist, md, ds, st in _map_blocks(work, c, threads):
        counts += hist.sum(axis=0)
        maxdev = np.maximum(maxdev, md)
        devsum += ds
        if first_row is None:
            first_row = hist[0].copy()
        if uniform and not (hist == first_row).all():
            uniform = False
        if stray is None and st is not None:
            stray = st
    per_point = tuple(int(x) for x in first_row[:R]) if uniform else None
    return Census(refs, tuple(int(x) for x in counts[:R]), int(counts[R]), tuple(float(x) for x in maxdev),
                  N, False, uniform, per_point, stray, tuple(float(x) for x in devsum))


def gram_entry(c: SphericalCode, i: int, j: int) -> Scalar:
    """Exact rational when the code has an exact model, else a float dot product."""
    if not (0 <= i < c.N and 0 <= j < c.N):
        raise IndexError(f"index out of range for a code with {c.N} points")
    if c.exact is not None:
        return c.exact.gram(i, j)
    return float(c.points[i] @ c.points[j])


def _row_dots(c: SphericalCode, i: int) -> np.ndarray:
    if c.exact is not None:
        Z = c.exact.Z.astype(np.int64)
        return Z @ Z[i]
    return c.points @ c.points[i]


def _matches(c: SphericalCode, dots: np.ndarray, value, tol: float) -> np.ndarray:
    if c.exact is not None:
        v = Fraction(value) * c.exact.n0
        if v.denominator != 1:
            return np.zeros(len(dots), dtype=bool)
        return dots == int(v)
    return np.abs(dots - float(value)) <= tol


def common_neighbor_count(c: SphericalCode, i: int, j: int, value, tol: float = 1e-9) -> int:
    """#{k : <x_i, x_k> and <x_j, x_k> both equal ``value`` (within tol in float mode)}."""
    if i == j:
        raise ValueError("need two distinct points")
    both = _matches(c, _row_dots(c, i), value, tol) & _matches(c, _row_dots(c, j), value, tol)
    both[[i, j]] = False
    return int(both.sum())


def partners(c: SphericalCode, i: int, value, tol: float = 1e-9) -> np.ndarray:
    """Indices k != i with <x_i, x_k> equal to ``value``."""
    hit = _matches(c, _row_dots(c, i), value, tol)
    hit[i] = False
    return np.flatnonzero(hit)


def max_offdiag(c: SphericalCode, threads: int = 1) -> Scalar:
    """max over i != j of <x_i, x_j>; exact rational in exact mode."""
    if c.N < 2:
        raise ValueError("max_offdiag needs at least two points")
    exact = c.exact is not None
    Zf = _exact_matrix(c)[0] if exact else c.points

    def work(lo, hi):
        dots = Zf[lo:hi] @ Zf.T
        rows = np.arange(hi - lo)
        dots[rows, rows + lo] = -np.inf
        return dots.max()

    best = max(_map_blocks(work, c, threads))
    if exact:
        return Fraction(int(round(float(best))), c.exact.n0)
    return float(best)


def pair_values(c: SphericalCode) -> np.ndarray:
    """Sorted distinct off-diagonal inner products (floats); small codes only."""
    G = c.gram()
    iu = np.triu_indices(c.N, 1)
    return np.unique(np.round(G[iu], 12))
