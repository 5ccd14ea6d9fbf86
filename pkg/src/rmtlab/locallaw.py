"""Local semicircle law machinery.

Schur-complement resolvent terms of the diagonal expansion

    s_n(z) = (1/n) sum_k 1/(W_kk - z - Y_k),
    Y_k    = a_k* (W_minor - z)^-1 a_k,

with W_kk = zeta_kk/sqrt(n) the k-th diagonal entry of the normalized
matrix (the sign of the diagonal term is fixed by requiring the expansion
to be an exact identity),

self-consistent-equation residuals, sliding-window count deviation at a
given interval scale, and the empirical threshold-scale scan.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ensembles import DistSpec, ParameterError, sample_wigner
from .seeds import derive_seed
from .spectral import (
    ContractError,
    DomainError,
    mp_interval_mass,
    sc_interval_mass,
    stieltjes_empirical,
)


@dataclass(frozen=True)
class SchurTerms:
    """Index-k terms of the diagonal resolvent expansion at a point z."""

    k: int
    diag: float  # zeta_kk / sqrt(n)
    yk: complex
    s_minor: complex  # Stieltjes transform of the k-th minor
    expected_yk: complex  # (1 - 1/n) * s_minor


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("Im z must be positive")
    return z


def _minor_parts(m: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, float, int]:
    """(W_minor, a_k, diag, n) for the unnormalized matrix M; W = M/sqrt(n)."""
    n = m.shape[0]
    if not 0 <= k < n:
        raise ContractError("index k out of range")
    w = m / math.sqrt(n)
    keep = np.arange(n) != k
    w_minor = w[np.ix_(keep, keep)]
    a_k = w[k, keep]
    return w_minor, a_k, float(np.real(w[k, k])), n


def schur_terms(m: np.ndarray, z: complex, k: int, cross_check: bool = False) -> SchurTerms:
    """Y_k and companions for row/column k of the unnormalized matrix M.

    Y_k comes from a linear solve against the minor's resolvent; the minor's
    Stieltjes transform comes from its eigenvalues.  With ``cross_check`` the
    eigendecomposition route for Y_k is run as well and the two must agree
    to 1e-8.
    """
    z = _check_z(z)
    w_minor, a_k, diag, n = _minor_parts(m, k)
    solve = np.linalg.solve(w_minor - z * np.eye(n - 1), a_k)
    yk = complex(np.conj(a_k) @ solve)
    minor_eigs = np.linalg.eigvalsh(w_minor)
    s_minor = complex(np.mean(1.0 / (minor_eigs - z)))
    if cross_check:
        vals, vecs = np.linalg.eigh(w_minor)
        overlaps = np.abs(np.conj(vecs).T @ a_k) ** 2
        yk_eig = complex(np.sum(overlaps / (vals - z)))
        if abs(yk - yk_eig) > 1e-8 * max(1.0, abs(yk)):
            raise ContractError("resolvent and eigendecomposition routes disagree")
    return SchurTerms(k=k, diag=diag, yk=yk, s_minor=s_minor, expected_yk=(1.0 - 1.0 / n) * s_minor)


def schur_identity_residual(m: np.ndarray, z: complex) -> float:
    """|two-route gap| of the diagonal expansion: the k-sum versus s_n(z)."""
    z = _check_z(z)
    n = m.shape[0]
    total = 0.0j
    for k in range(n):
        terms = schur_terms(m, z, k)
        total += 1.0 / (terms.diag - z - terms.yk)
    eigs = np.linalg.eigvalsh(m / math.sqrt(n))
    return abs(total / n - stieltjes_empirical(eigs, z))


def yk_r_decomposition(m: np.ndarray, z: complex, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Minor eigenvalues and overlap residuals R_j = |u_j* X_k|^2 - 1.

    X_k = sqrt(n) a_k, so (1/n) sum_j R_j/(lambda_j - z) recombines to
    Y_k - E(Y_k | minor).
    """
    z = _check_z(z)
    w_minor, a_k, _, n = _minor_parts(m, k)
    vals, vecs = np.linalg.eigh(w_minor)
    x_k = math.sqrt(n) * a_k
    r = np.abs(np.conj(vecs).T @ x_k) ** 2 - 1.0
    return vals, r


def yk_deviation(m: np.ndarray, z: complex, k: int) -> complex:
    """Y_k - E(Y_k | minor) = (1/n) sum_j R_j / (lambda_j - z)."""
    terms = schur_terms(m, z, k)
    return terms.yk - terms.expected_yk


def self_consistency_residual(eigs: np.ndarray, z: complex) -> float:
    """|s_n(z) + 1/(z + s_n(z))|, the defining-equation residual."""
    z = _check_z(z)
    s = stieltjes_empirical(eigs, z)
    denom = z + s
    if denom == 0:
        raise DomainError("z + s_n(z) vanishes")
    return abs(s + 1.0 / denom)


def _interval_mass(density, lo: float, hi: float) -> float:
    if density == "semicircle":
        return sc_interval_mass(lo, hi)
    kind, y = density
    if kind != "mp":
        raise ParameterError(f"unknown density {density!r}")
    return mp_interval_mass(lo, hi, y)


@dataclass(frozen=True)
class LawDeviation:
    """Sliding-window count deviation from a reference density."""

    max_rel_dev: float
    max_abs_dev: float  # |N_I - n * mass| / (n |I|), maximized over windows
    windows: list  # (lo, hi, count, expected_mass, rel_dev) per window


def law_deviation(
    eigs: np.ndarray,
    density,
    scale: float,
    bulk: tuple[float, float],
    stride_frac: float = 0.25,
) -> LawDeviation:
    """Worst window-count deviation at interval length ``scale``.

    Windows of length ``scale`` slide across ``bulk`` with stride
    ``stride_frac * scale``; the expected count is n * integral of the
    density over the window, n = len(eigs).
    """
    if scale <= 0:
        raise ParameterError("scale must be positive")
    eigs = np.sort(np.asarray(eigs))
    n = eigs.size
    lo, hi = bulk
    if not lo < hi:
        raise ContractError("bulk interval needs lo < hi")
    stride = stride_frac * scale
    starts = [lo]
    while starts[-1] + scale < hi - 1e-12:
        starts.append(starts[-1] + stride)
    if not starts:
        raise ParameterError("empty window set")
    rows = []
    max_rel = 0.0
    max_abs = 0.0
    for w_lo in starts:
        w_hi = min(w_lo + scale, hi)
        count = int(np.searchsorted(eigs, w_hi) - np.searchsorted(eigs, w_lo))
        mass = n * _interval_mass(density, w_lo, w_hi)
        if mass <= 0:
            continue
        rel = abs(count - mass) / mass
        max_rel = max(max_rel, rel)
        max_abs = max(max_abs, abs(count - mass) / (n * (w_hi - w_lo)))
        rows.append((w_lo, w_hi, count, mass, rel))
    return LawDeviation(max_rel_dev=max_rel, max_abs_dev=max_abs, windows=rows)


def crude_count_check(eigs: np.ndarray, n: int, scale: float) -> float:
    """max over windows of N_I / (n |I|) on [min eig, max eig]."""
    if scale <= 0:
        raise ParameterError("scale must be positive")
    eigs = np.sort(np.asarray(eigs))
    lo, hi = float(eigs[0]), float(eigs[-1])
    stride = scale / 4.0
    best = 0.0
    w_lo = lo - scale / 2.0
    while w_lo < hi:
        w_hi = w_lo + scale
        count = int(np.searchsorted(eigs, w_hi) - np.searchsorted(eigs, w_lo))
        best = max(best, count / (n * scale))
        w_lo += stride
    return best


@dataclass(frozen=True)
class ThresholdEstimate:
    """Per-scale worst deviation and the smallest scale meeting the target."""

    scales: np.ndarray
    max_rel_dev: np.ndarray
    delta: float
    threshold_scale: float | None


def _scan_trial(args) -> np.ndarray:
    dist, n, scales, bulk, stride_frac, seed = args
    w = sample_wigner(dist, n, seed, normalize=True)
    eigs = np.linalg.eigvalsh(w)
    return np.array(
        [law_deviation(eigs, "semicircle", s, bulk, stride_frac).max_rel_dev for s in scales]
    )


def threshold_scan(
    dist: DistSpec,
    n: int,
    scales,
    delta: float,
    trials: int,
    bulk: tuple[float, float],
    base_seed: int,
    stride_frac: float = 0.25,
    workers: int = 1,
) -> ThresholdEstimate:
    """Scan interval scales for the smallest one where the count law holds.

    For each scale, the deviation is maximized over windows and over
    ``trials`` independent seeded matrices; the threshold is the smallest
    scanned scale whose worst deviation is at most ``delta`` (None if no
    scanned scale qualifies).
    """
    scales = np.asarray(scales, dtype=np.float64)
    if np.any(np.diff(scales) <= 0):
        raise ParameterError("scales must be strictly ascending")
    if trials < 1:
        raise ParameterError("need at least one trial")
    jobs = [(dist, n, scales, bulk, stride_frac, derive_seed(base_seed, t)) for t in range(trials)]
    if workers <= 1:
        per_trial = [_scan_trial(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(_scan_trial, jobs))
    worst = np.max(np.stack(per_trial), axis=0)
    threshold = None
    for s, dev in zip(scales, worst):
        if dev <= delta:
            threshold = float(s)
            break
    return ThresholdEstimate(scales=scales, max_rel_dev=worst, delta=delta, threshold_scale=threshold)


__all__ = [
    "LawDeviation",
    "SchurTerms",
    "ThresholdEstimate",
    "crude_count_check",
    "law_deviation",
    "schur_identity_residual",
    "schur_terms",
    "self_consistency_residual",
    "threshold_scan",
    "yk_deviation",
    "yk_r_decomposition",
]
