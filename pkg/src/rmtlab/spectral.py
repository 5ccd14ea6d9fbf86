"""Spectra, limiting densities, Stieltjes transforms, and gap statistics.

Branch handling: both closed-form Stieltjes transforms are evaluated as
products of principal square roots of the linear factors at the support
edges.  That realizes the branch cut exactly on the support and gives the
correct asymptotics at infinity, which pins down the Herglotz branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .ensembles import ParameterError


class DomainError(ValueError):
    """Argument outside an operation's domain (e.g. Im z <= 0)."""


class ContractError(ValueError):
    """Structural precondition violated (unsorted input, non-Hermitian, ...)."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def check_hermitian(w: np.ndarray, tol: float = 1e-10) -> None:
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ContractError("matrix must be square")
    dev = np.max(np.abs(w - np.conj(w.T)))
    scale = max(1.0, float(np.max(np.abs(w))))
    if dev > tol * scale:
        raise ContractError(f"matrix is not Hermitian (max asymmetry {dev:.3g})")


def eig_decompose(w: np.ndarray) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    check_hermitian(w)
    vals, vecs = np.linalg.eigh(w)
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def count_interval(eigs: np.ndarray, lo: float, hi: float) -> int:
    """Number of eigenvalues in the half-open interval [lo, hi)."""
    eigs = np.asarray(eigs)
    if np.any(np.diff(eigs) < 0):
        raise ContractError("eigenvalues must be sorted ascending")
    if not lo < hi:
        raise ContractError("interval needs lo < hi")
    return int(np.searchsorted(eigs, hi, side="left") - np.searchsorted(eigs, lo, side="left"))


def rho_sc(x):
    """Semicircle density sqrt(4 - x^2)/(2 pi) on [-2, 2], zero outside."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(x)
    inside = np.abs(x) <= 2.0
    out[inside] = np.sqrt(4.0 - x[inside] ** 2) / (2.0 * math.pi)
    return float(out[0]) if scalar else out


def _sc_antiderivative(x: float) -> float:
    return x * math.sqrt(4.0 - x * x) / (4.0 * math.pi) + math.asin(x / 2.0) / math.pi


def sc_interval_mass(lo: float, hi: float) -> float:
    """Exact semicircle mass of [lo, hi] via the closed-form antiderivative."""
    if not lo < hi:
        raise ContractError("interval needs lo < hi")
    a = min(max(lo, -2.0), 2.0)
    b = min(max(hi, -2.0), 2.0)
    if a >= b:
        return 0.0
    return _sc_antiderivative(b) - _sc_antiderivative(a)


def stieltjes_empirical(eigs: np.ndarray, z: complex) -> complex:
    """s_n(z) = (1/n) sum 1/(lambda_i - z) for Im z > 0."""
    if z.imag <= 0:
        raise DomainError("Im z must be positive")
    eigs = np.asarray(eigs)
    return complex(np.mean(1.0 / (eigs - z)))


def stieltjes_sc(z: complex) -> complex:
    """Stieltjes transform (-z + sqrt(z^2 - 4))/2 of the semicircle law.

    sqrt(z^2-4) is computed as sqrt(z-2)*sqrt(z+2) with principal roots,
    which cuts exactly along [-2, 2] and behaves like z at infinity.
    """
    if z.imag <= 0:
        raise DomainError("Im z must be positive")
    z = complex(z)
    return (-z + np.sqrt(z - 2.0) * np.sqrt(z + 2.0)) / 2.0


def mp_edges(y: float) -> tuple[float, float]:
    """Support edges a = (1-sqrt(y))^2, b = (1+sqrt(y))^2 of the MP law."""
    if not 0 < y <= 1:
        raise ParameterError("aspect ratio y must lie in (0, 1]")
    r = math.sqrt(y)
    return (1.0 - r) ** 2, (1.0 + r) ** 2


def rho_mp(x, y: float):
    """Marchenko-Pastur density sqrt((b-x)(x-a))/(2 pi x y) on [a, b]."""
    a, b = mp_edges(y)
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(x)
    inside = (x >= a) & (x <= b) & (x > 0)
    xi = x[inside]
    out[inside] = np.sqrt((b - xi) * (xi - a)) / (2.0 * math.pi * xi * y)
    return float(out[0]) if scalar else out


def mp_interval_mass(lo: float, hi: float, y: float, tol: float = 1e-10) -> float:
    """MP mass of [lo, hi] by adaptive quadrature (tolerance ``tol``)."""
    a, b = mp_edges(y)
    lo = min(max(lo, a), b)
    hi = min(max(hi, a), b)
    if lo >= hi:
        return 0.0
    val, _ = integrate.quad(lambda x: rho_mp(x, y), lo, hi, epsabs=tol, epsrel=tol, limit=200)
    return val


def stieltjes_mp(z: complex, y: float) -> complex:
    """Closed-form MP Stieltjes transform with the cut on [a, b].

    (y+z-1)^2 - 4yz factors as (z-a)(z-b); principal roots of the factors
    give the branch that is asymptotic to y+z-1 at infinity.
    """
    if z.imag <= 0:
        raise DomainError("Im z must be positive")
    a, b = mp_edges(y)
    z = complex(z)
    root = np.sqrt(z - a) * np.sqrt(z - b)
    return -(y + z - 1.0 - root) / (2.0 * y * z)


def pv_semicircle(lam: float) -> float:
    """Principal value of int rho_sc(x)/(x - lam) dx, in closed form.

    Equals -lam/2 inside [-2, 2]; outside, the extra sign(lam)*sqrt(lam^2-4)/2
    term is fixed by requiring decay as |lam| -> infinity.
    """
    if abs(lam) <= 2.0:
        return -lam / 2.0
    return -lam / 2.0 + math.copysign(math.sqrt(lam * lam - 4.0), lam) / 2.0


def pv_semicircle_numeric(lam: float, excision: float = 1e-6) -> float:
    """Symmetric-excision quadrature oracle for ``pv_semicircle``."""
    if excision <= 0:
        raise ParameterError("excision must be positive")

    def f(x):
        return rho_sc(x) / (x - lam)

    def integral(eps: float) -> float:
        total = 0.0
        for lo, hi in ((-2.0, lam - eps), (lam + eps, 2.0)):
            lo, hi = max(lo, -2.0), min(hi, 2.0)
            if lo < hi:
                val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-12)
                total += val
        return total

    if abs(lam) > 2.0:
        return integral(0.0)
    # excluded-band error is linear in the excision width: Richardson once
    return 2.0 * integral(excision / 2.0) - integral(excision)


def max_gap(eigs: np.ndarray, lo: float, hi: float) -> float:
    """Largest consecutive spacing among eigenvalues inside [lo, hi)."""
    eigs = np.asarray(eigs)
    if np.any(np.diff(eigs) < 0):
        raise ContractError("eigenvalues must be sorted ascending")
    inside = eigs[(eigs >= lo) & (eigs < hi)]
    if inside.size < 2:
        raise ContractError("need at least 2 eigenvalues in the region")
    return float(np.max(np.diff(inside)))


def semicircle_quantiles(n: int, grid: int = 200_001) -> np.ndarray:
    """n points at semicircle quantiles (i - 1/2)/n; a deterministic atom set.

    Inverts the closed-form CDF by monotone interpolation on a dense grid;
    good to ~1e-9 at the default resolution.
    """
    xs = np.linspace(-2.0, 2.0, grid)
    cdf = np.array([_sc_antiderivative(x) for x in xs]) + 0.5
    qs = (np.arange(n) + 0.5) / n
    return np.interp(qs, cdf, xs)


def ks_distance(eigs: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between an ESD and a reference CDF."""
    eigs = np.sort(np.asarray(eigs))
    n = eigs.size
    ref = np.asarray([cdf(x) for x in eigs])
    upper = np.max(np.arange(1, n + 1) / n - ref)
    lower = np.max(ref - np.arange(0, n) / n)
    return float(max(upper, lower))


__all__ = [
    "ContractError",
    "DomainError",
    "SpectralDecomposition",
    "check_hermitian",
    "count_interval",
    "eig_decompose",
    "ks_distance",
    "max_gap",
    "mp_edges",
    "mp_interval_mass",
    "pv_semicircle",
    "pv_semicircle_numeric",
    "rho_mp",
    "rho_sc",
    "sc_interval_mass",
    "semicircle_quantiles",
    "stieltjes_empirical",
    "stieltjes_mp",
    "stieltjes_sc",
]
