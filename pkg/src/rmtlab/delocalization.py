"""Eigenvector infinity-norm statistics and the exact minor identities.

Bulk eigenvectors of a normalized Wigner matrix should have infinity norm
of order sqrt(log n / n); edge eigenvectors of order log n / sqrt(n).  The
records produced here carry both scalings so an n-grid scan can check the
growth rate directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import ContractError, SpectralDecomposition

DEGENERACY_GAP = 1e-10


class NearCollisionError(ValueError):
    """Minor eigenvalue too close to the target one; identity untrustworthy."""


def classify_region(lam: float, eps: float) -> str:
    """'bulk' for |lam| <= 2 - eps, 'edge' up to 2 + eps, 'outside' beyond."""
    if not 0 < eps < 2:
        raise ContractError("eps must lie in (0, 2)")
    if abs(lam) <= 2.0 - eps:
        return "bulk"
    if abs(lam) <= 2.0 + eps:
        return "edge"
    return "outside"


@dataclass(frozen=True)
class DelocRecord:
    """Per-eigenvalue delocalization record.

    scaled_bulk = sqrt(n) * inf_norm / sqrt(log n) and
    scaled_edge = sqrt(n) * inf_norm / log n are O(1) under the bulk and
    edge bounds respectively.  ``degenerate`` flags eigenvalues whose gap
    to a neighbor is below 1e-10 (any orthonormal eigenbasis is accepted
    there).  ``side`` is used by the singular-vector analog ('' here).
    """

    n: int
    seed: int
    index: int
    lam: float
    region: str
    inf_norm: float
    scaled_bulk: float
    scaled_edge: float
    degenerate: bool = False
    side: str = ""


def eigvec_inf_norms(
    decomp: SpectralDecomposition, n: int, seed: int, eps: float = 0.1
) -> list[DelocRecord]:
    """One record per eigenvalue of an n x n normalized Wigner matrix."""
    vals = np.asarray(decomp.eigenvalues)
    logn = math.log(n)
    gaps = np.diff(vals)
    records = []
    for i, lam in enumerate(vals):
        inf_norm = float(np.max(np.abs(decomp.eigenvectors[:, i])))
        degenerate = (i > 0 and gaps[i - 1] < DEGENERACY_GAP) or (
            i < vals.size - 1 and gaps[i] < DEGENERACY_GAP
        )
        records.append(
            DelocRecord(
                n=n,
                seed=seed,
                index=i,
                lam=float(lam),
                region=classify_region(float(lam), eps),
                inf_norm=inf_norm,
                scaled_bulk=math.sqrt(n) * inf_norm / math.sqrt(logn),
                scaled_edge=math.sqrt(n) * inf_norm / logn,
                degenerate=degenerate,
            )
        )
    return records


def _first_coordinate_split(w: np.ndarray):
    """Block form (a, Y, W_minor) with the first row/column peeled off."""
    return w[0, 0], w[1:, 0], w[1:, 1:]


def entry_identity(w: np.ndarray, i: int, gap_tol: float = 1e-8):
    """First-coordinate identity for the i-th unit eigenvector of W.

    Returns (lhs, rhs, collision_gap) where lhs = |u_i(W)[0]|^2 and

        rhs = 1 / (1 + sum_j |u_j(minor)* Y|^2 / (lambda_j(minor) - lambda_i)^2)

    with the minor W with its first row and column removed and Y the first
    column of W below the diagonal.
    """
    from .spectral import check_hermitian

    check_hermitian(w)
    n = w.shape[0]
    if not 0 <= i < n:
        raise ContractError("index out of range")
    vals, vecs = np.linalg.eigh(w)
    lam = vals[i]
    _, y, w_minor = _first_coordinate_split(w)
    mvals, mvecs = np.linalg.eigh(w_minor)
    gap = float(np.min(np.abs(mvals - lam)))
    if gap <= gap_tol:
        raise NearCollisionError(f"minor eigenvalue within {gap:.3g} of lambda_i")
    overlaps = np.abs(np.conj(mvecs).T @ y) ** 2
    rhs = 1.0 / (1.0 + float(np.sum(overlaps / (mvals - lam) ** 2)))
    lhs = float(np.abs(vecs[0, i]) ** 2)
    return lhs, rhs, gap


def interlacing_identity(w: np.ndarray, i: int, gap_tol: float = 1e-8):
    """Last-coordinate interlacing identity for W = M/sqrt(n).

    Returns (lhs, rhs) of

        sum_j |u_j(minor)* Y|^2 / (lambda_j(minor) - lambda_i) = W[n-1,n-1] - lambda_i

    where the minor removes the last row/column and Y is the last column of
    W with its last entry dropped.  The right side is zeta_nn/sqrt(n) written
    directly through the normalized matrix.
    """
    from .spectral import check_hermitian

    check_hermitian(w)
    n = w.shape[0]
    if not 0 <= i < n:
        raise ContractError("index out of range")
    vals = np.linalg.eigvalsh(w)
    lam = vals[i]
    w_minor = w[:-1, :-1]
    y = w[:-1, -1]
    mvals, mvecs = np.linalg.eigh(w_minor)
    gap = float(np.min(np.abs(mvals - lam)))
    if gap <= gap_tol:
        raise NearCollisionError(f"minor eigenvalue within {gap:.3g} of lambda_i")
    overlaps = np.abs(np.conj(mvecs).T @ y) ** 2
    lhs = float(np.sum(overlaps / (mvals - lam)))
    rhs = float(np.real(w[-1, -1]) - lam)
    return lhs, rhs


@dataclass(frozen=True)
class ScalingFit:
    """Per-n bulk/edge extremes and the fitted log-log growth slope."""

    bulk_table: dict  # n -> max scaled_bulk over bulk records
    edge_table: dict  # n -> max scaled_edge over edge records (may be empty)
    slope: float  # slope of log(max sqrt(n)*inf_norm) vs log log n; 0.5 if ~ sqrt(log n)


def deloc_scaling_fit(records: list[DelocRecord]) -> ScalingFit:
    """Least-squares growth fit of bulk infinity norms across an n-grid."""
    by_n: dict[int, list[DelocRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
    if len(by_n) < 3:
        raise ContractError("need at least 3 distinct n values")
    bulk_table = {}
    edge_table = {}
    xs, ys = [], []
    for n in sorted(by_n):
        bulk = [r for r in by_n[n] if r.region == "bulk"]
        edge = [r for r in by_n[n] if r.region == "edge"]
        if not bulk:
            raise ContractError(f"no bulk records at n={n}")
        bulk_table[n] = max(r.scaled_bulk for r in bulk)
        if edge:
            edge_table[n] = max(r.scaled_edge for r in edge)
        peak = max(math.sqrt(n) * r.inf_norm for r in bulk)
        xs.append(math.log(math.log(n)))
        ys.append(math.log(peak))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return ScalingFit(bulk_table=bulk_table, edge_table=edge_table, slope=slope)


def synthetic_records(n_values, inf_norm_fn) -> list[DelocRecord]:
    """Constructed records with a prescribed inf_norm profile (test helper)."""
    out = []
    for n in n_values:
        v = float(inf_norm_fn(n))
        out.append(
            DelocRecord(
                n=n,
                seed=0,
                index=0,
                lam=0.0,
                region="bulk",
                inf_norm=v,
                scaled_bulk=math.sqrt(n) * v / math.sqrt(math.log(n)),
                scaled_edge=math.sqrt(n) * v / math.log(n),
            )
        )
    return out


__all__ = [
    "DEGENERACY_GAP",
    "DelocRecord",
    "NearCollisionError",
    "ScalingFit",
    "classify_region",
    "deloc_scaling_fit",
    "eigvec_inf_norms",
    "entry_identity",
    "interlacing_identity",
    "synthetic_records",
]
