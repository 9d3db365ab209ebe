"""Spherical code container and the catalog of optimal configurations."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .leech import LEECH_NORM, leech_minimal_vectors

Scalar = Union[Fraction, float]


class UnknownCodeError(ValueError):
    pass


@dataclass(frozen=True)
class ExactModel:
    """Integer coordinates sharing one squared norm: points = rows of Z / sqrt(n0).

    Z may live in an ambient space wider than the code's dimension (cross
    sections of E8 / Leech, simplices); Gram entries are what matter.
    """

    Z: np.ndarray
    n0: int

    def __post_init__(self):
        Z = np.array(self.Z, dtype=np.int64)
        norms = np.einsum("ij,ij->i", Z, Z)
        if not (norms == self.n0).all():
            raise ValueError("exact model rows do not share the squared norm n0")
        Z.setflags(write=False)
        object.__setattr__(self, "Z", Z)

    def dot(self, i: int, j: int) -> int:
        return int(self.Z[i] @ self.Z[j])

    def gram(self, i: int, j: int) -> Fraction:
        return Fraction(self.dot(i, j), self.n0)


@dataclass(frozen=True, eq=False)
class SphericalCode:
    dim: int
    points: np.ndarray
    exact: Optional[ExactModel] = None
    label: str = ""
    threshold: Optional[Scalar] = None
    reference_values: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"points must be N x {self.dim}")
        if len(pts) < 1:
            raise ValueError("a code needs at least one point")
        if self.dim < 2:
            raise ValueError("dimension must be >= 2")
        if self.exact is None and not np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12, rtol=0):
            raise ValueError("rows are not unit vectors (tolerance 1e-12)")
        if self.exact is not None and len(self.exact.Z) != len(pts):
            raise ValueError("exact model and float points disagree in size")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __len__(self):
        return self.N

    @classmethod
    def from_exact(cls, Z, n0: int, dim: int, label: str = "", **kw) -> "SphericalCode":
        model = ExactModel(Z, n0)
        pts = _float_coordinates(model, dim)
        return cls(dim, pts, model, label, **kw)

    @classmethod
    def from_points(cls, points, label: str = "", normalize: bool = True, **kw) -> "SphericalCode":
        pts = np.asarray(points, dtype=np.float64)
        if normalize:
            pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        return cls(pts.shape[1], pts, None, label, **kw)

    def subset(self, idx, label: str | None = None) -> "SphericalCode":
        idx = np.asarray(idx)
        exact = ExactModel(self.exact.Z[idx], self.exact.n0) if self.exact else None
        return SphericalCode(self.dim, self.points[idx], exact, label or f"{self.label}[subset]",
                             self.threshold, self.reference_values)

    def gram(self) -> np.ndarray:
        """Dense float Gram matrix (exact models are used when available)."""
        if self.exact is not None:
            Z = self.exact.Z.astype(np.float64)
            return (Z @ Z.T) / self.exact.n0
        return self.points @ self.points.T

    def integer_gram(self) -> np.ndarray:
        if self.exact is None:
            raise ValueError("code has no exact model")
        return self.exact.Z @ self.exact.Z.T


def _float_coordinates(model: ExactModel, dim: int) -> np.ndarray:
    Z = model.Z.astype(np.float64) / math.sqrt(model.n0)
    D = Z.shape[1]
    if D == dim:
        return Z
    # orthonormal coordinates on the row space, padded to the code dimension
    _, s, vt = np.linalg.svd(Z, full_matrices=False)
    rank = int((s > 1e-9 * s[0]).sum())
    if rank > dim:
        raise ValueError(f"exact model spans {rank} dimensions, more than {dim}")
    coords = Z @ vt[:rank].T
    out = np.zeros((len(Z), dim))
    out[:, :rank] = coords
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


# catalog constructions


def simplex(d: int, N: int) -> SphericalCode:
    if not 1 <= N <= d + 1:
        raise UnknownCodeError(f"simplex needs 1 <= N <= d+1, got d={d}, N={N}")
    if N == 1:
        Z = np.zeros((1, d), dtype=np.int64)
        Z[0, 0] = 1
        return SphericalCode.from_exact(Z, 1, d, f"simplex({d},{N})", threshold=None, reference_values=())
    Z = N * np.eye(N, dtype=np.int64) - 1
    s = Fraction(-1, N - 1)
    return SphericalCode.from_exact(Z, N * (N - 1), d, f"simplex({d},{N})", threshold=s, reference_values=(s,))


def cross_polytope(d: int) -> SphericalCode:
    Z = np.vstack([np.eye(d, dtype=np.int64), -np.eye(d, dtype=np.int64)])
    return SphericalCode.from_exact(Z, 1, d, f"cross_polytope({d})", threshold=Fraction(0),
                                    reference_values=(Fraction(-1), Fraction(0)))


def ngon(N: int) -> SphericalCode:
    if N < 2:
        raise UnknownCodeError("ngon needs N >= 2")
    ang = 2 * np.pi * np.arange(N) / N
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    refs = tuple(sorted({round(math.cos(2 * math.pi * j / N), 15) for j in range(1, N // 2 + 1)}))
    return SphericalCode(2, pts, None, f"ngon({N})", threshold=math.cos(2 * math.pi / N), reference_values=refs)


def icosahedron() -> SphericalCode:
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for a, b in itertools.product((1, -1), repeat=2):
        for k in range(3):
            v = [0.0, a * 1.0, b * phi]
            pts.append(v[-k:] + v[:-k] if k else v)
    pts = np.array(pts) / math.sqrt(1 + phi * phi)
    r5 = 1 / math.sqrt(5)
    return SphericalCode(3, pts, None, "icosahedron", threshold=r5, reference_values=(-1.0, -r5, r5))


def _even_permutations(n: int):
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        if inv % 2 == 0:
            yield p


def cell600() -> SphericalCode:
    """The 120 unit quaternions of the binary icosahedral group."""
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for i in range(4):
        for s in (1, -1):
            v = [0.0] * 4
            v[i] = s
            pts.append(v)
    for signs in itertools.product((0.5, -0.5), repeat=4):
        pts.append(list(signs))
    base = (phi / 2, 0.5, 1 / (2 * phi), 0.0)
    for p in _even_permutations(4):
        for signs in itertools.product((1, -1), repeat=3):
            v = [0.0] * 4
            for slot, (val, sg) in enumerate(zip(base[:3], signs)):
                v[p[slot]] = val * sg
            pts.append(v)
    pts = np.array(pts)
    refs = (-1.0, -(1 + math.sqrt(5)) / 4, -0.5, (1 - math.sqrt(5)) / 4, 0.0,
            (math.sqrt(5) - 1) / 4, 0.5, (1 + math.sqrt(5)) / 4)
    return SphericalCode(4, pts, None, "cell600", threshold=(1 + math.sqrt(5)) / 4, reference_values=refs)


def _e8_integer() -> np.ndarray:
    rows = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            rows.append(v)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            rows.append(list(signs))
    return np.array(rows, dtype=np.int64)


E8_REFS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2))
LEECH_REFS = (Fraction(-1), Fraction(-1, 2), Fraction(-1, 4), Fraction(0), Fraction(1, 4), Fraction(1, 2))


def e8_roots() -> SphericalCode:
    """240 roots of E8 doubled to integers (squared norm 8)."""
    return SphericalCode.from_exact(_e8_integer(), 8, 8, "e8_roots", threshold=Fraction(1, 2),
                                    reference_values=E8_REFS)


def leech_minimal() -> SphericalCode:
    Z = leech_minimal_vectors()
    model = ExactModel.__new__(ExactModel)
    # the enumeration already guarantees squared norm 32 on every row
    object.__setattr__(model, "Z", Z)
    object.__setattr__(model, "n0", LEECH_NORM)
    pts = Z.astype(np.float64) / math.sqrt(LEECH_NORM)
    return SphericalCode(24, pts, model, "leech_minimal", threshold=Fraction(1, 2), reference_values=LEECH_REFS)


# kissing configurations as cross sections of E8 / Leech: the points at
# inner product 1/2 with every anchor of a mutually-1/2 anchor set, projected
# off the anchors' span. For m anchors the projection is (m+1) x - sum(anchors).
_KISSING = {
    7: ("e8", 1, Fraction(1, 3), (Fraction(-1), Fraction(-1, 3), Fraction(1, 3))),
    6: ("e8", 2, Fraction(1, 4), (Fraction(-1, 2), Fraction(1, 4))),
    5: ("e8", 3, Fraction(1, 5), (Fraction(-3, 5), Fraction(1, 5))),
    23: ("leech", 1, Fraction(1, 3), (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(1, 3))),
    22: ("leech", 2, Fraction(1, 4), (Fraction(-1, 2), Fraction(-1, 8), Fraction(1, 4))),
}


def _anchors(Z: np.ndarray, n0: int, m: int) -> list[int]:
    half = n0 // 2
    chosen = [0]
    while len(chosen) < m:
        ok = np.ones(len(Z), dtype=bool)
        for a in chosen:
            ok &= (Z @ Z[a]) == half
        chosen.append(int(np.flatnonzero(ok)[0]))
    return chosen


def cross_section(Z: np.ndarray, n0: int, m: int) -> tuple[np.ndarray, int]:
    anchors = _anchors(Z, n0, m)
    mask = np.ones(len(Z), dtype=bool)
    for a in anchors:
        mask &= (Z @ Z[a]) == n0 // 2
    Y = (m + 1) * Z[mask].astype(np.int64) - Z[anchors].astype(np.int64).sum(axis=0)
    n = int(Y[0] @ Y[0])
    return Y, n


def kissing(d: int) -> SphericalCode:
    if d not in _KISSING:
        raise UnknownCodeError(f"kissing configuration available for d in {sorted(_KISSING)}, got {d}")
    parent, m, s, refs = _KISSING[d]
    if parent == "e8":
        Z, n0 = _e8_integer(), 8
    else:
        Z, n0 = leech_minimal_vectors().astype(np.int64), LEECH_NORM
    Y, n = cross_section(Z, n0, m)
    return SphericalCode.from_exact(Y, n, d, f"kissing({d})", threshold=s, reference_values=refs)


_BUILDERS = {
    "simplex": (simplex, 2),
    "cross_polytope": (cross_polytope, 1),
    "ngon": (ngon, 1),
    "icosahedron": (icosahedron, 0),
    "cell600": (cell600, 0),
    "e8_roots": (e8_roots, 0),
    "leech_minimal": (leech_minimal, 0),
    "kissing": (kissing, 1),
}

CATALOG_NAMES = tuple(_BUILDERS)

_NAME_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def parse_name(name: str) -> tuple[str, tuple[int, ...]]:
    m = _NAME_RE.match(name)
    if not m:
        raise UnknownCodeError(f"cannot parse code name {name!r}")
    base = m.group(1)
    args = tuple(int(a) for a in m.group(2).split(",") if a.strip()) if m.group(2) else ()
    if base not in _BUILDERS:
        raise UnknownCodeError(f"unknown code {base!r}; known: {', '.join(CATALOG_NAMES)}")
    if len(args) != _BUILDERS[base][1]:
        raise UnknownCodeError(f"{base} takes {_BUILDERS[base][1]} integer argument(s)")
    return base, args


def generate(name: str) -> SphericalCode:
    """Build a catalog code, e.g. ``generate("cross_polytope(3)")``."""
    base, args = parse_name(name)
    return _BUILDERS[base][0](*args)
