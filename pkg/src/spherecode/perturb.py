"""Perturbed near-optimal codes, closeness after matching and alignment, and sweeps.

The sweep samples a constructive family of (d, N, s + eps)-codes. It checks
the weak and strong stability bounds on every sample, and it never claims
to find worst-case codes.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .codes.catalog import SphericalCode
from .codes.census import max_offdiag

STRATEGIES = ("tangent_noise", "pair_stretch")
MAX_BACKTRACKS = 100


class PerturbationError(RuntimeError):
    pass


def _threshold(c: SphericalCode) -> float:
    if c.threshold is None:
        return float(max_offdiag(c))
    return float(c.threshold)


def perturb_code(c: SphericalCode, epsilon: float, strategy: str = "tangent_noise", seed: int = 0) -> SphericalCode:
    """A unit-vector code near ``c`` with every inner product at most s + epsilon."""
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if epsilon == 0:
        return c
    s = _threshold(c)
    cap = s + epsilon
    rng = np.random.default_rng(seed)
    X = np.array(c.points)
    if strategy == "tangent_noise":
        noise = rng.standard_normal(X.shape)
        noise -= np.sum(noise * X, axis=1, keepdims=True) * X
        noise /= math.sqrt(X.shape[1])
        eta = float(epsilon)
        for _ in range(MAX_BACKTRACKS):
            Y = X + eta * noise
            Y /= np.linalg.norm(Y, axis=1, keepdims=True)
            out = _wrap(c, Y, cap)
            if float(max_offdiag(out)) <= cap:
                return out
            eta /= 2
        raise PerturbationError(f"tangent noise could not meet the cap {cap} after {MAX_BACKTRACKS} halvings")
    G = X @ X.T
    np.fill_diagonal(G, -np.inf)
    pairs = np.argwhere(np.isclose(G, s, atol=1e-12, rtol=0))
    pairs = pairs[pairs[:, 0] < pairs[:, 1]]
    if len(pairs) == 0:
        raise PerturbationError("no pair sits at the threshold")
    order = rng.permutation(len(pairs))
    for k in order[:MAX_BACKTRACKS]:
        i, j = pairs[k]
        u = X[j] - (X[j] @ X[i]) * X[i]
        u /= np.linalg.norm(u)
        Y = X.copy()
        Y[j] = cap * X[i] + math.sqrt(1 - cap * cap) * u
        Y[j] /= np.linalg.norm(Y[j])
        out = _wrap(c, Y, cap)
        if float(max_offdiag(out)) <= cap + 1e-15:
            return out
    raise PerturbationError(f"no pair could be stretched to {cap} without breaking the cap")


def _wrap(c: SphericalCode, Y: np.ndarray, cap: float) -> SphericalCode:
    return SphericalCode(c.dim, Y, None, f"{c.label}+perturbed", threshold=cap, reference_values=c.reference_values)


# closeness and alignment


def _angles(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Row-wise angles between unit vectors, accurate for tiny angles."""
    chord = np.linalg.norm(P - Q, axis=1)
    return 2 * np.arcsin(np.clip(chord / 2, 0, 1))


def _assign(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    cost = np.arccos(np.clip(A @ B.T, -1, 1))
    rows, cols = linear_sum_assignment(cost)
    sigma = np.empty(len(A), dtype=np.intp)
    sigma[rows] = cols
    return sigma


@dataclass(frozen=True)
class Alignment:
    rotation: np.ndarray
    max_spherical_distance: float


def align_codes(A: SphericalCode, B: SphericalCode, matching: Sequence[int]) -> Alignment:
    """Orthogonal R minimising sum ||R a_i - b_sigma(i)||^2 (reflections allowed)."""
    sigma = np.asarray(matching, dtype=np.intp)
    if sorted(sigma.tolist()) != list(range(B.N)) or len(sigma) != A.N:
        raise ValueError("matching must be a bijection")
    Bm = B.points[sigma]
    H = Bm.T @ A.points
    U, sv, Vt = np.linalg.svd(H)
    if sv.max() <= 1e-14:
        raise ValueError("cross-covariance is degenerate")
    R = U @ Vt
    return Alignment(R, float(np.max(_angles(A.points @ R.T, Bm))))


@dataclass(frozen=True)
class Closeness:
    matching: np.ndarray
    gram_max_dev: float
    alignment: Alignment


def code_closeness(A: SphericalCode, B: SphericalCode) -> Closeness:
    """Matching sigma and delta = max |Gram(A) - Gram(sigma B)|.

    The matching is an assignment on angular distance, refined once after a
    Procrustes alignment and then realigned. The search is not over all
    permutations, so delta is an upper bound for the best permutation.
    """
    if A.N != B.N or A.dim != B.dim:
        raise ValueError(f"codes differ in size: ({A.dim}, {A.N}) vs ({B.dim}, {B.N})")
    sigma = _assign(A.points, B.points)
    al = align_codes(A, B, sigma)
    sigma2 = _assign(A.points @ al.rotation.T, B.points)
    al2 = align_codes(A, B, sigma2)
    if al2.max_spherical_distance <= al.max_spherical_distance:
        sigma, al = sigma2, al2
    Bm = B.points[sigma]
    dev = float(np.max(np.abs(A.points @ A.points.T - Bm @ Bm.T)))
    return Closeness(sigma, dev, al)


# four-point Gram determinant


def four_point_matrix(alpha, beta, d1, d2, d3, d4) -> list[list]:
    h = Fraction(1, 2) if all(isinstance(v, (int, Fraction)) for v in (alpha, beta, d1, d2, d3, d4)) else 0.5
    return [[1, alpha, h + d1, h + d2],
            [alpha, 1, h + d3, h + d4],
            [h + d1, h + d3, 1, beta],
            [h + d2, h + d4, beta, 1]]


def _perm_sign(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def four_point_det(alpha, beta, d1=0, d2=0, d3=0, d4=0):
    """Determinant of the Gram matrix of x, y, z, t with <x,y> = alpha,
    <z,t> = beta and the four cross products 1/2 + d_i.

    Exact for int/Fraction input (Leibniz expansion over the 24 permutations).
    With all d_i = 0 it equals (1 - alpha)(1 - beta)(alpha beta + alpha + beta).
    """
    m = four_point_matrix(alpha, beta, d1, d2, d3, d4)
    total = 0
    for p in itertools.permutations(range(4)):
        term = _perm_sign(p)
        for i in range(4):
            term = term * m[i][p[i]]
        total = total + term
    return total


def four_point_closed_form(alpha, beta):
    return (1 - alpha) * (1 - beta) * (alpha * beta + alpha + beta)


# sweeps


@dataclass(frozen=True)
class PerturbationTrial:
    epsilon: float
    trial: int
    seed: int
    strategy: str
    achieved_max_offdiag: float
    gram_max_dev: float
    aligned_max_angle: float
    weak_bound: Optional[float] = None
    strong_bound: Optional[float] = None

    @property
    def weak_ok(self) -> bool:
        return self.weak_bound is None or self.gram_max_dev <= self.weak_bound

    @property
    def strong_ok(self) -> bool:
        return self.strong_bound is None or self.aligned_max_angle <= self.strong_bound


@dataclass(frozen=True)
class SweepReport:
    trials: tuple
    fitted_exponent: Optional[float]
    fitted_prefactor: Optional[float]
    medians: tuple  # (epsilon, median gram_max_dev)
    K_weak: Optional[float] = None
    C_strong: Optional[float] = None
    m: Optional[int] = None
    eps_count: Optional[float] = None

    @property
    def all_within_bounds(self) -> bool:
        return all(t.weak_ok and t.strong_ok for t in self.trials)

    def summary(self) -> dict:
        return {"fitted_exponent": self.fitted_exponent, "fitted_prefactor": self.fitted_prefactor,
                "medians": [list(m) for m in self.medians], "K_weak": self.K_weak, "C_strong": self.C_strong,
                "m": self.m, "eps_count": self.eps_count, "n_trials": len(self.trials),
                "all_within_bounds": self.all_within_bounds}


def trial_seed(seed: int, eps_index: int, trial: int) -> int:
    """Per-trial seed derived from (seed, eps index, trial index)."""
    return int(np.random.SeedSequence([seed, eps_index, trial]).generate_state(1)[0])


def _fit(medians) -> tuple[Optional[float], Optional[float]]:
    pts = [(e, m) for e, m in medians if e > 0 and m > 0]
    if len(pts) < 2:
        return None, None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, icept = np.polyfit(x, y, 1)
    return float(slope), float(math.exp(icept))


def stability_sweep(c: SphericalCode, cert=None, eps_list: Sequence[float] = (1e-6, 1e-5, 1e-4, 1e-3),
                    trials_per_eps: int = 20, seed: int = 42, strategy: str = "tangent_noise",
                    threads: int = 1) -> SweepReport:
    """Perturb ``c`` at each epsilon, then measure Gram closeness and aligned angles.

    With a certificate, each trial is checked against the weak bound
    K eps^(1/m) on Gram deviation. It is also checked against the strong
    bound C eps^(1/m) on aligned angles.
    """
    K = C = m = eps_count = None
    if cert is not None:
        from .lpbound import weak_stability_constants
        from .specstab import strong_stability_constant

        w = weak_stability_constants(cert, c.N)
        K, m, eps_count = w.K, w.m, w.eps_count
        C = strong_stability_constant(c.gram(), K, m, c.dim).C

    jobs = [(ei, float(eps), t) for ei, eps in enumerate(eps_list) for t in range(trials_per_eps)]

    def run(job):
        ei, eps, t = job
        sd = trial_seed(seed, ei, t)
        pc = perturb_code(c, eps, strategy, sd)
        if pc is c:
            mo = float(max_offdiag(c)) if c.N > 1 else -1.0
            return PerturbationTrial(eps, t, sd, strategy, mo, 0.0, 0.0,
                                     0.0 if K is not None else None, 0.0 if C is not None else None)
        cl = code_closeness(c, pc)
        wb = K * eps ** (1 / m) if K is not None else None
        sb = C * eps ** (1 / m) if C is not None else None
        return PerturbationTrial(eps, t, sd, strategy, float(max_offdiag(pc)), cl.gram_max_dev,
                                 cl.alignment.max_spherical_distance, wb, sb)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(run, jobs))
    else:
        trials = [run(j) for j in jobs]
    medians = []
    for eps in eps_list:
        devs = [t.gram_max_dev for t in trials if t.epsilon == float(eps)]
        medians.append((float(eps), float(np.median(devs))))
    slope, pref = _fit(medians)
    return SweepReport(tuple(trials), slope, pref, tuple(medians), K, C, m, eps_count)


def sweep_csv(report: SweepReport) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["epsilon", "trial", "gram_max_dev", "aligned_max_angle"])
    for t in report.trials:
        w.writerow([repr(t.epsilon), t.trial, repr(t.gram_max_dev), repr(t.aligned_max_angle)])
    return out.getvalue()


def sweep_plot_data(report: SweepReport) -> str:
    """Whitespace-separated columns for gnuplot: epsilon and median gram deviation."""
    lines = ["# epsilon median_gram_max_dev"]
    lines += [f"{e!r} {m!r}" for e, m in report.medians]
    return "\n".join(lines) + "\n"


def sweep_json(report: SweepReport) -> str:
    body = report.summary()
    body["trials"] = [asdict(t) for t in report.trials]
    return json.dumps(body, indent=2, sort_keys=True)
