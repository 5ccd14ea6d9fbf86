"""Weighted projections, quadratic-form deviations, and their tail envelopes.

The central statistics are

    f(X)   = sqrt(sum_j c_j |u_j* X|^2)          (weighted projection)
    Y - tr = X* A X - trace(A)                   (quadratic form deviation)

together with the closed-form tail bounds they satisfy for K-concentrated
input vectors, and a seeded Monte Carlo estimator of the empirical survival
function used to check those bounds numerically.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ensembles import DistSpec, ParameterError, sample_vector
from .seeds import derive_seed
from .spectral import ContractError

ENVELOPE_KINDS = ("projection", "vw1", "vw2", "subexp", "hw", "hkz", "esy1", "esy2")


@dataclass(frozen=True)
class WeightedFrame:
    """Orthonormal columns u_1..u_d with weights c_j in [0, 1]."""

    basis: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis)
        weights = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "weights", weights)
        if basis.ndim != 2 or weights.ndim != 1 or basis.shape[1] != weights.size:
            raise ContractError("basis must be n x d with d weights")
        gram = np.conj(basis).T @ basis
        if np.max(np.abs(gram - np.eye(weights.size))) > 1e-8:
            raise ContractError("frame columns are not orthonormal")
        if np.any(weights < 0) or np.any(weights > 1):
            raise ContractError("weights must lie in [0, 1]")


def weighted_projection(x: np.ndarray, frame: WeightedFrame) -> float:
    """f(X) = sqrt(sum_j c_j |u_j* X|^2)."""
    x = np.asarray(x)
    if x.shape[0] != frame.basis.shape[0]:
        raise ContractError("vector and frame dimensions differ")
    coeffs = np.abs(np.conj(frame.basis).T @ x) ** 2
    return float(np.sqrt(np.sum(frame.weights * coeffs)))


def projection_deviation(x: np.ndarray, frame: WeightedFrame) -> float:
    """Signed deviation f(X) - sqrt(sum_j c_j)."""
    return weighted_projection(x, frame) - math.sqrt(float(np.sum(frame.weights)))


def quadratic_deviation(x: np.ndarray, a: np.ndarray) -> complex:
    """X* A X - trace(A)."""
    x = np.asarray(x)
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != x.shape[0]:
        raise ContractError("matrix must be square and match the vector length")
    return complex(np.conj(x) @ (a @ x) - np.trace(a))


def hermitize_split(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian pair (A + A*, i(A - A*)) carrying Re and Im of X*AX.

    The deviation of X*AX from its trace is half the sum of the deviations of
    the two returned Hermitian forms; both have norms at most twice those of A.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError("matrix must be square")
    return a + np.conj(a).T, 1j * (a - np.conj(a).T)


def psd_split(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Write Hermitian A as A1 - A2 with both parts PSD via the spectral split.

    A1 keeps the positive spectrum, A2 the flipped negative spectrum, so
    ||A_i||_2 <= ||A||_2 and ||A_i||_F <= ||A||_F.
    """
    from .spectral import check_hermitian

    check_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    pos = np.clip(vals, 0.0, None)
    neg = np.clip(-vals, 0.0, None)
    a1 = (vecs * pos) @ np.conj(vecs).T
    a2 = (vecs * neg) @ np.conj(vecs).T
    return a1, a2


def dyadic_weight_partition(c: np.ndarray, n: int) -> list[np.ndarray]:
    """Dyadic weight bands J_k = {j : 4^-(k+1) <= c_j <= 4^-k}, k <= 10 log n.

    Boundary weights (c_j exactly a power of 1/4) go to the smaller k; the
    final block collects everything below the last band, including zeros.
    Returns k0 + 2 index arrays whose disjoint union is all indices.
    """
    c = np.asarray(c, dtype=np.float64)
    if np.any(c < 0) or np.any(c > 1):
        raise ParameterError("weights must lie in [0, 1]")
    k0 = int(10 * math.log(n)) if n > 1 else 0
    blocks: list[np.ndarray] = []
    assigned = np.full(c.size, False)
    for k in range(k0 + 1):
        lo, hi = 4.0 ** -(k + 1), 4.0**-k
        members = np.flatnonzero(~assigned & (c >= lo) & (c <= hi))
        assigned[members] = True
        blocks.append(members)
    blocks.append(np.flatnonzero(~assigned))
    return blocks


@dataclass(frozen=True)
class TailEnvelope:
    """One of the closed-form tail bounds, with user-settable constants.

    The unspecified absolute constants default to C = Cprime = 1.  ``K`` is
    the boundedness/concentration parameter; ``frobenius``, ``spectral`` and
    ``spectral_abs`` are ||A||_F, ||A||_2 and ||B||_2 with B = (|a_ij|);
    ``n_eps1`` is the additive n*eps1 term of the truncated-variable bound.
    """

    kind: str
    C: float = 1.0
    Cprime: float = 1.0
    K: float = 1.0
    n: int | None = None
    frobenius: float | None = None
    spectral: float | None = None
    spectral_abs: float | None = None
    alpha: float | None = None
    n_eps1: float = 0.0

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ParameterError(f"unknown envelope kind {self.kind!r}")
        if self.C <= 0 or self.Cprime <= 0 or self.K <= 0:
            raise ParameterError("envelope constants must be positive")

    def _need(self, **fields) -> None:
        for name, value in fields.items():
            if value is None:
                raise ParameterError(f"envelope kind {self.kind!r} requires {name}")

    def __call__(self, t: float) -> float:
        return tail_envelope_eval(self, t)


def tail_envelope_eval(env: TailEnvelope, t: float) -> float:
    """Value of the closed-form bound at t >= 0 (not clipped at 1)."""
    if t < 0:
        raise ParameterError("t must be nonnegative")
    C, Cp, K = env.C, env.Cprime, env.K
    F, S = env.frobenius, env.spectral
    if env.kind == "projection":
        return C * math.exp(-Cp * t * t / (K * K))
    if env.kind in ("vw1", "vw2"):
        env._need(frobenius=F, spectral=S, n=env.n)
        logn = math.log(env.n)
        expo = min(t * t / (F * F * logn), t / S) if t > 0 else 0.0
        base = C * logn * math.exp(-Cp * expo / (K * K))
        return base + (env.n * env.n_eps1 if env.kind == "vw2" else 0.0)
    if env.kind == "subexp":
        env._need(frobenius=F, spectral=S, n=env.n, alpha=env.alpha)
        if t == 0:
            return C
        logn = math.log(env.n)
        al = env.alpha
        expo = min(
            (t / (F * math.sqrt(logn))) ** (1.0 / (al + 0.5)),
            (t / S) ** (1.0 / (2.0 * al + 1.0)),
        )
        return C * math.exp(-Cp * expo)
    if env.kind == "hw":
        env._need(frobenius=F, spectral_abs=env.spectral_abs)
        expo = min(t * t / (F * F), t / env.spectral_abs)
        return C * math.exp(-Cp * expo)
    if env.kind == "hkz":
        env._need(frobenius=F, spectral=S)
        expo = min(t * t / (F * F), t / S)
        return C * math.exp(-Cp * expo)
    if env.kind == "esy1":
        env._need(frobenius=F)
        return C * math.exp(-Cp * t / F)
    # esy2
    env._need(frobenius=F, alpha=env.alpha)
    return C * math.exp(-Cp * (t / F) ** (1.0 / (2.0 + 2.0 * env.alpha)))


def lemma_projection_envelope(K: float) -> TailEnvelope:
    """The projection bound with its explicit constants, 10 exp(-t^2/(20 K^2))."""
    return TailEnvelope(kind="projection", C=10.0, Cprime=1.0 / 20.0, K=K)


def optimal_K_subexp(t: float, frob: float, spec: float, alpha: float, n: int) -> float:
    """Truncation level balancing the gaussian and boundedness terms.

    K = min{(t/(||A||_F sqrt(log n)))^(2/(2+1/alpha)), (t/||A||_2)^(1/(2+1/alpha))};
    at the active branch K^-2 * min{t^2/(||A||_F^2 log n), t/||A||_2} = K^(1/alpha).
    """
    if t <= 0 or frob <= 0 or spec <= 0 or alpha <= 0 or n < 2:
        raise ParameterError("optimal_K_subexp needs positive arguments and n >= 2")
    logn = math.log(n)
    q = 2.0 + 1.0 / alpha
    return min((t / (frob * math.sqrt(logn))) ** (2.0 / q), (t / spec) ** (1.0 / q))


@dataclass(frozen=True)
class EmpiricalTail:
    """Monte Carlo survival estimates P(|stat| >= t) over a t-grid."""

    t_grid: np.ndarray
    survival: np.ndarray
    stderr: np.ndarray
    trials: int


def _statistic_values(
    statistic: str,
    dist: DistSpec,
    n: int,
    base_seed: int,
    start: int,
    stop: int,
    frame: WeightedFrame | None,
    matrix: np.ndarray | None,
) -> np.ndarray:
    out = np.empty(stop - start)
    for i in range(start, stop):
        x = sample_vector(dist, n, derive_seed(base_seed, i))
        if statistic == "projection":
            out[i - start] = abs(projection_deviation(x, frame))
        else:
            out[i - start] = abs(quadratic_deviation(x, matrix))
    return out


def _tail_chunk(args) -> np.ndarray:
    return _statistic_values(*args)


def empirical_tail(
    statistic: str,
    dist: DistSpec,
    t_grid: np.ndarray,
    trials: int,
    base_seed: int,
    *,
    frame: WeightedFrame | None = None,
    matrix: np.ndarray | None = None,
    workers: int = 1,
) -> EmpiricalTail:
    """Survival function of |statistic| over ``trials`` seeded draws.

    ``statistic`` is "projection" (needs ``frame``) or "quadratic" (needs
    ``matrix``).  Trial i uses seed derive_seed(base_seed, i), and results
    are reduced in trial order, so the output is byte-identical for any
    worker count.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0:
        raise ParameterError("t_grid must be nonempty")
    if np.any(np.diff(t_grid) < 0):
        raise ParameterError("t_grid must be ascending")
    if trials < 100:
        raise ParameterError("need at least 100 trials")
    if statistic == "projection":
        if frame is None:
            raise ParameterError("projection statistic requires a frame")
        n = frame.basis.shape[0]
    elif statistic == "quadratic":
        if matrix is None:
            raise ParameterError("quadratic statistic requires a matrix")
        n = matrix.shape[0]
    else:
        raise ParameterError(f"unknown statistic {statistic!r}")

    if workers <= 1:
        values = _statistic_values(statistic, dist, n, base_seed, 0, trials, frame, matrix)
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        jobs = [
            (statistic, dist, n, base_seed, int(lo), int(hi), frame, matrix)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_tail_chunk, jobs))
        values = np.concatenate(chunks)

    survival = np.array([np.count_nonzero(values >= t) / trials for t in t_grid])
    stderr = np.sqrt(survival * (1.0 - survival) / trials)
    return EmpiricalTail(t_grid=t_grid, survival=survival, stderr=stderr, trials=trials)


__all__ = [
    "ENVELOPE_KINDS",
    "EmpiricalTail",
    "TailEnvelope",
    "WeightedFrame",
    "dyadic_weight_partition",
    "empirical_tail",
    "hermitize_split",
    "lemma_projection_envelope",
    "optimal_K_subexp",
    "projection_deviation",
    "psd_split",
    "quadratic_deviation",
    "tail_envelope_eval",
    "weighted_projection",
]
