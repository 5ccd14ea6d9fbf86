"""Sample covariance matrices: singular triplets, Schur terms, identities.

Conventions for a p x n factor M (p <= n): W = M* M / n carries the
Marchenko-Pastur spectrum on its top p eigenvalues, the compact Gram matrix
MM*/n carries the same nonzero spectrum, and sigma_i(M) = sqrt(n *
lambda_i(W)).  Singular values are kept ascending throughout, matching the
eigenvalue ordering used elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .delocalization import DelocRecord, NearCollisionError
from .ensembles import ParameterError
from .locallaw import _check_z
from .spectral import ContractError, mp_edges, rho_mp


@dataclass(frozen=True)
class SingularTriplets:
    """Ascending singular values with matching left/right singular vectors.

    ``left`` is p x p (columns in C^p), ``right`` is n x p (columns in C^n);
    M right_i = sigma_i left_i and M* left_i = sigma_i right_i.
    """

    sigma: np.ndarray
    left: np.ndarray
    right: np.ndarray


def singular_triplets(m: np.ndarray) -> SingularTriplets:
    p, n = m.shape
    if p > n:
        raise ContractError("factor must have p <= n")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    # numpy returns descending; flip to ascending
    return SingularTriplets(sigma=s[::-1].copy(), left=u[:, ::-1].copy(), right=vh[::-1].T.conj().copy())


@dataclass(frozen=True)
class CovSchurTerms:
    """Index-k terms of the covariance diagonal resolvent expansion.

    The expansion reads s(z) = (1/p) sum_k 1/(xi_kk - z - Y_k) for the
    Stieltjes transform of MM*/n, with xi_kk = ||X_k||^2/n for the k-th row
    X_k of M, a_k = M_minor X_k / n, and Y_k = a_k* (W_minor - z)^-1 a_k.
    """

    k: int
    xi_kk: float
    yk: complex
    s_minor: complex
    expected_yk: complex  # ((p-1)/n) * (1 + z * s_minor)


def covariance_schur_terms(m: np.ndarray, z: complex, k: int) -> CovSchurTerms:
    z = _check_z(z)
    p, n = m.shape
    if not 0 <= k < p:
        raise ContractError("index k out of range")
    x_k = np.conj(m[k, :])  # X_k with X_k* the k-th row of M
    xi_kk = float(np.real(x_k @ np.conj(x_k))) / n
    if p == 1:
        return CovSchurTerms(k=0, xi_kk=xi_kk, yk=0.0j, s_minor=0.0j, expected_yk=0.0j)
    keep = np.arange(p) != k
    m_minor = m[keep, :]
    w_minor = m_minor @ np.conj(m_minor).T / n
    a_k = m_minor @ x_k / n
    solve = np.linalg.solve(w_minor - z * np.eye(p - 1), a_k)
    yk = complex(np.conj(a_k) @ solve)
    minor_eigs = np.linalg.eigvalsh(w_minor)
    s_minor = complex(np.mean(1.0 / (minor_eigs - z)))
    expected = ((p - 1) / n) * (1.0 + z * s_minor)
    return CovSchurTerms(k=k, xi_kk=xi_kk, yk=yk, s_minor=s_minor, expected_yk=expected)


def covariance_schur_residual(m: np.ndarray, z: complex) -> float:
    """Two-route gap: the k-sum versus the Gram matrix's Stieltjes transform."""
    z = _check_z(z)
    p, n = m.shape
    total = 0.0j
    for k in range(p):
        terms = covariance_schur_terms(m, z, k)
        total += 1.0 / (terms.xi_kk - z - terms.yk)
    gram_eigs = np.linalg.eigvalsh(m @ np.conj(m).T / n)
    return abs(total / p - complex(np.mean(1.0 / (gram_eigs - z))))


def mp_self_consistency_residual(gram_eigs: np.ndarray, z: complex, y: float) -> float:
    """|s + 1/(y + z - 1 + y z s)| for the empirical transform of MM*/n."""
    z = _check_z(z)
    s = complex(np.mean(1.0 / (np.asarray(gram_eigs) - z)))
    return abs(s + 1.0 / (y + z - 1.0 + y * z * s))


def _deleted_svd(m: np.ndarray):
    """Nontrivial singular triplets (sigma, left cols, right cols), ascending."""
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return s[::-1], u[:, ::-1], vh[::-1].T.conj()


def singular_entry_identity(m: np.ndarray, i: int, side: str = "right", gap_tol: float = 1e-8):
    """Deleted-coordinate identity for the i-th unit singular vector.

    side='right': split M = [M' X] by removing the last column; lhs is the
    squared modulus of the last coordinate of the i-th right singular vector,
    and rhs sums sigma_j(M')^2 |v_j(M')* X|^2 / (sigma_j(M')^2 - sigma_i^2)^2
    over the left singular vectors v_j of M'.  side='left' is the row-deleted
    mirror using right singular vectors of the row minor.
    Returns (lhs, rhs, collision_gap).
    """
    p, n = m.shape
    trip = singular_triplets(m)
    if not 0 <= i < trip.sigma.size:
        raise ContractError("index out of range")
    sig_i = trip.sigma[i]
    if side == "right":
        minor = m[:, :-1]
        x = m[:, -1]
        msig, mleft, _ = _deleted_svd(minor)
        overlaps = np.abs(np.conj(mleft).T @ x) ** 2
        vec_entry = trip.right[-1, i]
    elif side == "left":
        minor = m[:-1, :]
        x = np.conj(m[-1, :])  # Y with Y* the last row
        msig, _, mright = _deleted_svd(minor)
        overlaps = np.abs(np.conj(mright).T @ x) ** 2
        vec_entry = trip.left[-1, i]
    else:
        raise ParameterError("side must be 'left' or 'right'")
    gap = float(np.min(np.abs(msig**2 - sig_i**2)))
    if gap <= gap_tol * max(1.0, sig_i**2):
        raise NearCollisionError("minor singular value collides with sigma_i")
    denom = 1.0 + float(np.sum(msig**2 * overlaps / (msig**2 - sig_i**2) ** 2))
    return float(np.abs(vec_entry) ** 2), 1.0 / denom, gap


def singular_interlacing_identity(m: np.ndarray, i: int, side: str = "right", gap_tol: float = 1e-8):
    """Both sides of the singular-value interlacing identity.

    side='right' (column deleted):
        sum_j sigma_j(M')^2 |v_j(M')* X|^2 / (sigma_j(M')^2 - sigma_i^2)
            = ||X||^2 - sigma_i^2,
    side='left' mirrors it for the row-deleted minor.
    """
    trip = singular_triplets(m)
    if not 0 <= i < trip.sigma.size:
        raise ContractError("index out of range")
    sig_i = trip.sigma[i]
    if side == "right":
        minor, x = m[:, :-1], m[:, -1]
        msig, mleft, _ = _deleted_svd(minor)
        overlaps = np.abs(np.conj(mleft).T @ x) ** 2
    elif side == "left":
        minor, x = m[:-1, :], np.conj(m[-1, :])
        msig, _, mright = _deleted_svd(minor)
        overlaps = np.abs(np.conj(mright).T @ x) ** 2
    else:
        raise ParameterError("side must be 'left' or 'right'")
    gap = float(np.min(np.abs(msig**2 - sig_i**2)))
    if gap <= gap_tol * max(1.0, sig_i**2):
        raise NearCollisionError("minor singular value collides with sigma_i")
    lhs = float(np.sum(msig**2 * overlaps / (msig**2 - sig_i**2)))
    rhs = float(np.real(np.vdot(x, x)) - sig_i**2)
    return lhs, rhs


def pv_mp(lam: float, y: float, excision: float = 1e-5) -> float:
    """Numerical principal value of y * int_a^b x rho_MP(x)/(x - lam) dx.

    Symmetric excision around the pole with one Richardson step in the
    excision width.  Near the support edges the integrand is integrable
    and the value approaches +sqrt(y) at a and -sqrt(y) at b.
    """
    if excision <= 0:
        raise ParameterError("excision must be positive")
    a, b = mp_edges(y)

    def f(x):
        return y * x * rho_mp(x, y) / (x - lam)

    def integral(eps: float) -> float:
        total = 0.0
        for lo, hi in ((a, lam - eps), (lam + eps, b)):
            lo, hi = max(lo, a), min(hi, b)
            if lo < hi:
                val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-11, epsrel=1e-11)
                total += val
        return total

    if lam < a - excision or lam > b + excision:
        return integral(0.0)
    return 2.0 * integral(excision / 2.0) - integral(excision)


def classify_mp_region(lam_w: float, y: float, eps: float) -> str:
    """Region of a covariance eigenvalue sigma^2/n relative to the MP edges.

    Soft edges get the usual eps-windows.  At the hard edge (a = 0 when
    y = 1) only [4 - eps, 4] counts as edge; everything near 0 is 'outside'.
    """
    a, b = mp_edges(y)
    hard_edge = a == 0.0  # exact when y == 1
    if a + eps <= lam_w <= b - eps:
        return "bulk"
    if hard_edge:
        if b - eps <= lam_w <= b:
            return "edge"
        return "outside"
    if a - eps <= lam_w <= a + eps or b - eps <= lam_w <= b + eps:
        return "edge"
    return "outside"


def singular_vec_inf_norms(m: np.ndarray, eps: float = 0.1, seed: int = 0) -> list[DelocRecord]:
    """Delocalization records for the left and right singular vectors of M.

    The region is classified on sigma_i^2/n against the MP edges at aspect
    ratio y = p/n.  Right vectors live in C^n and are scaled with sqrt(n);
    left vectors live in C^p and are scaled with sqrt(p) (the paper-normalized
    sqrt(n) value is recoverable as scaled * sqrt(n/p)).
    """
    p, n = m.shape
    y = p / n
    trip = singular_triplets(m)
    logn = math.log(n)
    logp = math.log(p) if p > 1 else 1.0
    records = []
    for i, sig in enumerate(trip.sigma):
        lam_w = sig**2 / n
        region = classify_mp_region(lam_w, y, eps)
        for side, vecs, dim, logd in (("left", trip.left, p, logp), ("right", trip.right, n, logn)):
            inf_norm = float(np.max(np.abs(vecs[:, i])))
            records.append(
                DelocRecord(
                    n=dim,
                    seed=seed,
                    index=i,
                    lam=lam_w,
                    region=region,
                    inf_norm=inf_norm,
                    scaled_bulk=math.sqrt(dim) * inf_norm / math.sqrt(logd),
                    scaled_edge=math.sqrt(dim) * inf_norm / logd,
                    side=side,
                )
            )
    return records


__all__ = [
    "CovSchurTerms",
    "SingularTriplets",
    "classify_mp_region",
    "covariance_schur_residual",
    "covariance_schur_terms",
    "mp_self_consistency_residual",
    "pv_mp",
    "singular_entry_identity",
    "singular_interlacing_identity",
    "singular_triplets",
    "singular_vec_inf_norms",
]
