"""Seeded generation of random vectors and matrices, plus truncation machinery.

All entry distributions have mean 0 and variance 1:

- ``rademacher``: uniform on {-1, +1}.
- ``gaussian``: standard normal.
- ``bounded_uniform``: uniform on [-sqrt(3), sqrt(3)].
- ``subexp``: symmetrized power of an exponential, ``sign * E**alpha``
  with E ~ Exp(1), divided by sqrt(Gamma(1 + 2*alpha)) so the variance is
  exactly 1.  Its tails decay like exp(-c t**(1/alpha)).

Sampling is a pure function of (spec, size, seed): identical arguments give
bit-identical output on every platform and under any parallel schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .seeds import derive_seed

KINDS = ("rademacher", "gaussian", "bounded_uniform", "subexp")

#: half-width of the variance-1 uniform distribution
UNIFORM_BOUND = math.sqrt(3.0)


class ParameterError(ValueError):
    """Invalid distribution or truncation parameter."""


@dataclass(frozen=True)
class DistSpec:
    """Declarative description of a mean-0 variance-1 entry distribution.

    ``alpha`` is the sub-exponential exponent; ``a`` and ``b`` are the tail
    constants in P(|xi| >= t**alpha) <= a*exp(-b*t).  They parametrize tail
    envelopes only, not the sampler.
    """

    kind: str
    alpha: float = 1.0
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "subexp":
            if self.alpha <= 0 or self.a <= 0 or self.b <= 0:
                raise ParameterError("subexp requires alpha, a, b > 0")

    @property
    def bound(self) -> float:
        """Almost-sure bound K on |xi| (inf for unbounded kinds)."""
        if self.kind == "rademacher":
            return 1.0
        if self.kind == "bounded_uniform":
            return UNIFORM_BOUND
        return math.inf

    @property
    def subexp_scale(self) -> float:
        """Standardization constant sqrt(Gamma(1 + 2*alpha)) for subexp."""
        return math.sqrt(special.gamma(1.0 + 2.0 * self.alpha))

    def fourth_moment(self) -> float:
        """E|xi|^4 of the standardized distribution."""
        if self.kind == "rademacher":
            return 1.0
        if self.kind == "gaussian":
            return 3.0
        if self.kind == "bounded_uniform":
            return 9.0 / 5.0
        c2 = special.gamma(1.0 + 2.0 * self.alpha)
        return special.gamma(1.0 + 4.0 * self.alpha) / c2**2

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "subexp":
            d.update(alpha=self.alpha, a=self.a, b=self.b)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DistSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ParameterError("distribution spec must be a dict with a 'kind'")
        allowed = {"kind", "alpha", "a", "b"}
        extra = set(d) - allowed
        if extra:
            raise ParameterError(f"unknown distribution fields {sorted(extra)}")
        return cls(**d)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & ((1 << 64) - 1)))


def _draw(dist: DistSpec, size, rng: np.random.Generator) -> np.ndarray:
    if dist.kind == "rademacher":
        return rng.integers(0, 2, size=size).astype(np.float64) * 2.0 - 1.0
    if dist.kind == "gaussian":
        return rng.standard_normal(size)
    if dist.kind == "bounded_uniform":
        return rng.uniform(-UNIFORM_BOUND, UNIFORM_BOUND, size=size)
    # subexp: sign * E^alpha, standardized
    sign = rng.integers(0, 2, size=size).astype(np.float64) * 2.0 - 1.0
    e = rng.standard_exponential(size)
    return sign * e**dist.alpha / dist.subexp_scale


def sample_vector(dist: DistSpec, n: int, seed: int) -> np.ndarray:
    """Length-n vector of i.i.d. draws from ``dist``; deterministic in seed."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return _draw(dist, n, _rng(seed))


def sample_wigner(dist: DistSpec, n: int, seed: int, normalize: bool = True) -> np.ndarray:
    """Symmetric n x n matrix with i.i.d. upper-triangle entries from ``dist``.

    The lower triangle mirrors the upper one (real entries, so conjugation is
    transposition).  With ``normalize`` the matrix is divided by sqrt(n),
    putting the spectrum on the semicircle scale [-2, 2].
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = _rng(seed)
    upper = _draw(dist, n * (n + 1) // 2, rng)
    m = np.zeros((n, n))
    iu = np.triu_indices(n)
    m[iu] = upper
    m = m + np.triu(m, 1).T
    if normalize:
        m /= math.sqrt(n)
    return m


def sample_rect(dist: DistSpec, p: int, n: int, seed: int) -> np.ndarray:
    """p x n matrix of i.i.d. entries from ``dist``, p <= n."""
    if not 1 <= p <= n:
        raise ParameterError("need 1 <= p <= n")
    return _draw(dist, (p, n), _rng(seed))


def form_covariance(m: np.ndarray) -> np.ndarray:
    """Sample covariance matrix W = M* M / n for a p x n factor M."""
    p, n = m.shape
    if p > n:
        raise ParameterError("factor must have p <= n")
    return np.conj(m).T @ m / n


def form_gram(m: np.ndarray) -> np.ndarray:
    """Compact Gram matrix M M* / n (p x p); same nonzero spectrum as W."""
    _, n = m.shape
    return m @ np.conj(m).T / n


@dataclass(frozen=True)
class TruncationReport:
    """Truncation parameters for a distribution cut off at level K.

    eps1 = P(|xi| > K), mu and sigma2 are mean and variance of the truncated
    variable xi * 1_{|xi| <= K}, eps2 = |mu|, eps3 = |sigma2 - 1|.
    """

    K: float
    eps1: float
    mu: float
    sigma2: float
    eps2: float = field(init=False)
    eps3: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "eps2", abs(self.mu))
        object.__setattr__(self, "eps3", abs(self.sigma2 - 1.0))


def _density(dist: DistSpec, x: np.ndarray) -> np.ndarray:
    """Density of the continuous kinds (undefined for rademacher)."""
    if dist.kind == "gaussian":
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if dist.kind == "bounded_uniform":
        return np.where(np.abs(x) <= UNIFORM_BOUND, 1.0 / (2.0 * UNIFORM_BOUND), 0.0)
    if dist.kind == "subexp":
        c = dist.subexp_scale
        a = dist.alpha
        ax = np.abs(x)
        out = np.zeros_like(ax)
        pos = ax > 0
        t = (c * ax[pos]) ** (1.0 / a)
        # half of the |.| density on each side
        out[pos] = 0.5 * np.exp(-t) * t / (a * ax[pos])
        return out
    raise ParameterError(f"no density for kind {dist.kind!r}")


def truncation_stats(dist: DistSpec, K: float, quad_points: int = 2001) -> TruncationReport:
    """Moments of the truncated variable xi * 1_{|xi| <= K}.

    Closed forms for rademacher and gaussian; Gauss-Legendre quadrature on
    [-K, K] with ``quad_points`` nodes otherwise.
    """
    if K <= 1:
        raise ParameterError("truncation level K must exceed 1")
    if dist.kind == "rademacher":
        return TruncationReport(K=K, eps1=0.0, mu=0.0, sigma2=1.0)
    if dist.kind == "gaussian":
        eps1 = special.erfc(K / math.sqrt(2.0))
        # int_{-K}^{K} x^2 phi(x) dx = erf(K/sqrt 2) - 2 K phi(K)
        phi_k = math.exp(-0.5 * K * K) / math.sqrt(2.0 * math.pi)
        sigma2 = special.erf(K / math.sqrt(2.0)) - 2.0 * K * phi_k
        return TruncationReport(K=K, eps1=eps1, mu=0.0, sigma2=sigma2)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    if dist.kind == "bounded_uniform":
        # restrict to the support so the density is smooth on the nodes
        half = min(K, UNIFORM_BOUND)
        x = nodes * half
        w = weights * half
        f = _density(dist, x)
        mass = float(np.sum(w * f))
        mu = float(np.sum(w * x * f))
        m2 = float(np.sum(w * x * x * f))
        eps1 = max(0.0, 1.0 - mass)
        return TruncationReport(K=K, eps1=eps1, mu=mu, sigma2=m2 - mu * mu)
    # subexp: substitute u = (c|x|)^(1/alpha); |x| <= K becomes u <= T and the
    # integrand u^(2 alpha) e^-u is smooth, so the nodes are spent well
    c = dist.subexp_scale
    T = (c * K) ** (1.0 / dist.alpha)
    u = (nodes + 1.0) * (T / 2.0)
    w = weights * (T / 2.0)
    eps1 = math.exp(-T)
    m2 = float(np.sum(w * u ** (2.0 * dist.alpha) * np.exp(-u))) / c**2
    # symmetric law: the truncated mean vanishes identically
    return TruncationReport(K=K, eps1=eps1, mu=0.0, sigma2=m2)


def standardize_truncated(x: np.ndarray, report: TruncationReport) -> np.ndarray:
    """Truncate at K, recenter by mu and rescale by sigma.

    Entries with |x_i| > K are replaced by 0 before standardizing, so each
    output entry is (x_i 1_{|x_i|<=K} - mu)/sigma, bounded by 2K whenever
    eps2, eps3 <= 1/2.
    """
    if report.sigma2 <= 0:
        raise ParameterError("truncated distribution is degenerate (sigma2 <= 0)")
    clipped = np.where(np.abs(x) <= report.K, x, 0.0)
    return (clipped - report.mu) / math.sqrt(report.sigma2)


__all__ = [
    "DistSpec",
    "KINDS",
    "ParameterError",
    "TruncationReport",
    "UNIFORM_BOUND",
    "derive_seed",
    "form_covariance",
    "form_gram",
    "sample_rect",
    "sample_vector",
    "sample_wigner",
    "standardize_truncated",
    "truncation_stats",
]
