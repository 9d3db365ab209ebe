"""Spectral tools for strong stability.

Covers a deterministic Jacobi eigensolver, the gap Delta and the constant K
of the square-root perturbation bound, and the explicit aligned square roots
P and Q of two close PSD matrices. It also has near-orthonormal frame repair,
the almost-perpendicular angle bound, and factoring a Gram matrix back into
a code.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .codes.catalog import SphericalCode

OFFDIAG_TOL = 1e-13
MAX_SWEEPS = 60


class RefusedError(ValueError):
    """An input falls outside the regime where the bound is guaranteed."""


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns
    rank: int
    rank_tol: float
    sweeps: int = 0

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if len(self.eigenvalues) else 0.0


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """n - 1 rounds (n even) of n/2 disjoint pairs covering every pair once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def sym_eig(M, tol: float = 1e-12, rank_tol: Optional[float] = None) -> SpectralData:
    """Full eigendecomposition of a symmetric matrix by parallel cyclic Jacobi.

    Each round applies n/2 disjoint rotations at once. Sweeps stop when the
    off-diagonal Frobenius norm drops to 1e-13 times the matrix norm.
    """
    A = np.array(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    scale = max(float(np.max(np.abs(A))) if n else 0.0, 1.0)
    if n and float(np.max(np.abs(A - A.T))) > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    A = (A + A.T) / 2
    V = np.eye(n)
    fro = float(np.linalg.norm(A))
    rounds = _round_robin(n) if n > 1 else []
    sweeps = 0
    while n > 1 and _off(A) > OFFDIAG_TOL * fro and sweeps < MAX_SWEEPS:
        sweeps += 1
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            theta = (A[Q, Q] - A[P, P]) / (2 * apq)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(big, 0.5 / np.where(big, theta, 1.0),
                         np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1)))
            t[theta == 0] = 1.0
            c = 1 / np.sqrt(t * t + 1)
            s = t * c
            Ap, Aq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = c * Ap - s * Aq
            A[:, Q] = s * Ap + c * Aq
            Ap, Aq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * Ap - s[:, None] * Aq
            A[Q, :] = s[:, None] * Ap + c[:, None] * Aq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            Vp, Vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = c * Vp - s * Vq
            V[:, Q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    w, V = w[order], V[:, order]
    norm = float(np.max(np.abs(w))) if n else 0.0
    rt = rank_tol if rank_tol is not None else 1e-10 * max(n, 1) * norm
    return SpectralData(w, V, int(np.sum(w > rt)), rt, sweeps)


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group ascending values whose consecutive differences are <= tol."""
    groups, cur = [], [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            cur.append(i)
        else:
            groups.append(np.array(cur))
            cur = [i]
    groups.append(np.array(cur))
    return groups


def delta_gap(spec: SpectralData) -> float:
    """min of the smallest positive eigenvalue and the gaps between distinct eigenvalues."""
    w = spec.eigenvalues
    pos = w[w > spec.rank_tol]
    if len(pos) == 0:
        raise ValueError("matrix has no positive eigenvalue")
    reps = [float(np.mean(w[g])) for g in _clusters(w, spec.rank_tol)]
    reps = [0.0 if abs(r) <= spec.rank_tol else r for r in reps]
    gaps = [b - a for a, b in zip(reps, reps[1:])]
    return min(gaps + [float(pos.min())])


@dataclass(frozen=True)
class SpectralSummary:
    """What the stability constants need from a Gram matrix."""

    N: int
    norm: float
    Delta: float

    @classmethod
    def of(cls, B) -> "SpectralSummary":
        B = np.asarray(B, dtype=float)
        spec = sym_eig(B)
        return cls(B.shape[0], spec.norm, delta_gap(spec))


def tight_code_spectrum(N: int, d: int) -> SpectralSummary:
    """Gram spectrum of a code with X^T X = (N/d) I: eigenvalue N/d with
    multiplicity d and 0 otherwise, so the norm and the gap both equal N/d."""
    return SpectralSummary(N, N / d, N / d)


def _summary(B) -> SpectralSummary:
    return B if isinstance(B, SpectralSummary) else SpectralSummary.of(B)


def remark_K(B, norm_bound: Optional[float] = None) -> float:
    """85 N^5 max(sqrt(||B||), 1) / Delta with the spectral norm of B.

    ``norm_bound`` replaces ||B|| by a known upper bound when given.
    """
    sm = _summary(B)
    if sm.norm == 0:
        raise ValueError("B is zero")
    if sm.N < 2:
        raise ValueError("need N >= 2")
    nb = sm.norm if norm_bound is None else float(norm_bound)
    return 85 * float(sm.N) ** 5 * max(math.sqrt(nb), 1.0) / sm.Delta


def delta_threshold(N: int, Delta: float) -> float:
    """delta_0 with 14 N^4 delta / Delta < 1 / (2N), i.e. Delta / (28 N^5)."""
    return Delta / (28 * float(N) ** 5)


@dataclass(frozen=True)
class SqrtAlignment:
    P: np.ndarray
    Q: np.ndarray
    F: np.ndarray = field(repr=False)
    delta: float
    Delta: float
    K: float
    distance: float  # ||P - Q||_max
    bound_satisfied: bool
    in_regime: bool = True  # delta < delta_0

    @property
    def margin(self) -> float:
        return self.K * self.delta - self.distance

    def as_dict(self) -> dict:
        return {"delta": self.delta, "Delta": self.Delta, "K": self.K, "distance": self.distance,
                "bound": self.K * self.delta, "margin": self.margin, "bound_satisfied": self.bound_satisfied,
                "in_regime": self.in_regime}


def near_orthonormal_basis(U, eps: Optional[float] = None) -> np.ndarray:
    """Orthonormal rows W close to the near-orthonormal unit rows of U.

    Symmetric orthogonalisation W = (U U^T)^(-1/2) U, computed as the polar
    factor of U. It minimises sum ||u_i - w_i||^2 among orthonormal frames.
    For d unit vectors with |<u_i, u_j>| <= eps < 1/(2d) every row moves by
    at most 2 d eps.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    d = U.shape[0]
    if d < 1 or U.shape[1] < d:
        raise ValueError("need at most as many vectors as coordinates")
    if d >= 2:
        G = U @ U.T
        actual = float(np.max(np.abs(G - np.diag(np.diag(G)))))
        eps = actual if eps is None else float(eps)
        if actual > eps + 1e-15:
            raise RefusedError(f"max |<u_i,u_j>| = {actual:.3g} exceeds eps = {eps:.3g}")
        if eps >= 1 / (2 * d):
            raise RefusedError(f"eps = {eps:.3g} is not below 1/(2d) = {1 / (2 * d):.3g}")
    return _polar(U)


def _polar(U: np.ndarray) -> np.ndarray:
    X, _, Yt = np.linalg.svd(U, full_matrices=False)
    return X @ Yt


def aligned_sqrt_pair(A, B, cluster_tol: Optional[float] = None, strict: bool = True) -> SqrtAlignment:
    """Square roots P of A and Q of B with ||P - Q||_max <= K delta.

    B = M D M^T, and A' = M^T A M has eigenvectors v_i. Each v_i is matched
    to the eigenspace of D it projects onto most. The projections are repaired
    to an orthonormal basis w_i of that eigenspace, F maps w_i to v_i, and then
    P = M F sqrt(D~) F^T M^T and Q = M sqrt(D) M^T. F cancels in P, which is
    the PSD square root of A; it is still built and returned as part of the
    construction.

    With ``strict`` (the default) inputs with delta >= delta_0 are refused.
    ``strict=False`` still builds P and Q and flags ``in_regime=False``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square of the same size")
    N = A.shape[0]
    specB = sym_eig(B)
    if specB.eigenvalues[0] < -specB.rank_tol:
        raise ValueError("B is not positive semidefinite")
    Delta = delta_gap(specB)
    delta = float(np.max(np.abs(A - B)))
    d0 = delta_threshold(N, Delta)
    if delta >= d0 and strict:
        raise RefusedError(f"delta = {delta:.3g} violates 14 N^4 delta / Delta < 1/(2N) (delta_0 = {d0:.3g})")
    M = specB.eigenvectors
    Ap = M.T @ A @ M
    specA = sym_eig((Ap + Ap.T) / 2, rank_tol=specB.rank_tol)
    if specA.rank != specB.rank:
        raise RefusedError(f"rank mismatch: rank(A) = {specA.rank}, rank(B) = {specB.rank}")
    lam = np.clip(specB.eigenvalues, 0, None)
    V = specA.eigenvectors
    groups = _clusters(specB.eigenvalues, Delta / 2 if cluster_tol is None else cluster_tol)
    weight = np.stack([np.sum(V[g, :] ** 2, axis=0) for g in groups])  # (groups, N)
    owner = np.argmax(weight, axis=0)
    W = np.zeros_like(V)
    for gi, g in enumerate(groups):
        cols = np.flatnonzero(owner == gi)
        if len(cols) != len(g):
            raise RefusedError("eigenvectors of A do not split along the eigenspaces of B")
        proj = V[np.ix_(g, cols)]  # coordinates inside the eigenspace
        proj = proj / np.linalg.norm(proj, axis=0, keepdims=True)
        W[np.ix_(g, cols)] = _polar(proj)
    F = V @ W.T
    mu = np.clip(specA.eigenvalues, 0, None)
    P = M @ (V * np.sqrt(mu)) @ V.T @ M.T
    Q = (M * np.sqrt(lam)) @ M.T
    P, Q = (P + P.T) / 2, (Q + Q.T) / 2
    K = remark_K(SpectralSummary(N, specB.norm, Delta))
    dist = float(np.max(np.abs(P - Q)))
    return SqrtAlignment(P, Q, F, delta, Delta, K, dist, dist <= K * delta, delta < d0)


# almost perpendicular vectors


@dataclass(frozen=True)
class AlmostPerp:
    z_perp: np.ndarray
    bound: float
    actual_angle: float
    lambda1: float


def almost_perp_bound(d: int, lambda1: float, delta: float) -> float:
    """(pi/2) sqrt((d - 1) / lambda_1) delta."""
    return math.pi / 2 * math.sqrt((d - 1) / lambda1) * delta


# smallest Gram eigenvalue floor for 23 near-orthogonal Leech neighbours
LEECH_LAMBDA1_FLOOR = 1.0 / (4.0**24 * 13.0**23)


def almost_perp(x, Z, delta: float) -> AlmostPerp:
    """Unit normal to span(Z) nearest to x, with its angle to x and the bound.

    Requires |<x, z_i>| <= delta for all rows z_i and Z of full rank d - 1.
    """
    x = np.asarray(x, dtype=float)
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    d = x.shape[0]
    if Z.shape != (d - 1, d):
        raise ValueError(f"Z must hold d - 1 = {d - 1} vectors of length {d}")
    if np.max(np.abs(Z @ x)) > delta * (1 + 1e-12):
        raise ValueError("some |<x, z_i>| exceeds delta")
    _, sv, vt = np.linalg.svd(Z)
    if sv.min() < 1e-12 * max(sv.max(), 1.0):
        raise ValueError("Z is rank deficient")
    z = vt[-1]
    if z @ x < 0:
        z = -z
    lam1 = float(np.linalg.eigvalsh(Z @ Z.T)[0])
    proj = x - (x @ z) * z
    angle = math.atan2(float(np.linalg.norm(proj)), float(x @ z))
    return AlmostPerp(z, almost_perp_bound(d, lam1, delta), angle, lam1)


# Gram matrix -> code


def principal_minors_vanish(G, d: int, tol: float = 1e-9) -> bool:
    """Diagnostic: all principal minors of size > d are zero (small N only)."""
    G = np.asarray(G, dtype=float)
    N = G.shape[0]
    if N > 12:
        raise ValueError("principal-minor enumeration is limited to N <= 12")
    for k in range(d + 1, N + 1):
        for idx in itertools.combinations(range(N), k):
            if abs(np.linalg.det(G[np.ix_(idx, idx)])) > tol:
                return False
    return True


def factor_code(G, d: int, tol: float = 1e-9, diagnostic: bool = False, label: str = "factored") -> SphericalCode:
    """N unit vectors in R^d whose Gram matrix is G."""
    G = np.asarray(G, dtype=float)
    N = G.shape[0]
    if np.max(np.abs(np.diag(G) - 1)) > tol:
        raise ValueError("Gram matrix must have unit diagonal")
    spec = sym_eig(G, tol=tol)
    if spec.eigenvalues[0] < -max(tol, spec.rank_tol):
        raise ValueError(f"negative eigenvalue {spec.eigenvalues[0]:.3g}")
    if spec.rank > d:
        raise ValueError(f"Gram rank {spec.rank} exceeds d = {d}")
    if diagnostic and not principal_minors_vanish(G, d, tol=max(tol, 1e-9)):
        raise ValueError(f"a principal minor of size > {d} is nonzero")
    w = np.clip(spec.eigenvalues[-d:], 0, None)
    X = spec.eigenvectors[:, -d:] * np.sqrt(w)
    return SphericalCode.from_points(X, label=label)


# strong stability


@dataclass(frozen=True)
class StrongStability:
    C: float
    exponent: float  # closeness scales as C * eps ** exponent
    remark_K: float


def strong_stability_constant(B: Union[np.ndarray, SpectralSummary], K_weak: float, m: int, d: int,
                              N: Optional[int] = None, norm_bound: Optional[float] = None) -> StrongStability:
    """C = (pi/2) sqrt(d) * 85 N^5 max(sqrt||B||, 1) / Delta * K_weak.

    Point distances after alignment are at most C * eps^(1/m).
    """
    sm = _summary(B)
    if N is not None and N != sm.N:
        raise ValueError(f"N = {N} does not match the Gram size {sm.N}")
    if m < 1:
        raise ValueError("multiplicity m must be >= 1")
    rk = remark_K(sm, norm_bound)
    return StrongStability(math.pi / 2 * math.sqrt(d) * rk * K_weak, 1.0 / m, rk)
