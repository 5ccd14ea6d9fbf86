"""Experiment orchestration: config, seed fan-out, parallel trials, CSV/JSON.

Every experiment is a pure function of (config, base_seed): trial i always
runs with seed derive_seed(base_seed, i) and results are merged in trial
order, so the written CSV is byte-identical for any worker count.  Output
goes to out_dir/<experiment>/<label>/ as records.csv + summary.json +
config.json, where the label defaults to a hash of the config.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .concentration import TailEnvelope, WeightedFrame, empirical_tail, quadratic_deviation
from .covariance import (
    covariance_schur_residual,
    mp_self_consistency_residual,
    pv_mp,
    singular_entry_identity,
    singular_interlacing_identity,
    singular_vec_inf_norms,
)
from .delocalization import (
    NearCollisionError,
    eigvec_inf_norms,
    entry_identity,
    interlacing_identity,
)
from .ensembles import DistSpec, ParameterError, sample_rect, sample_vector, sample_wigner
from .locallaw import law_deviation, schur_identity_residual
from .seeds import derive_seed
from .spectral import eig_decompose, mp_edges, pv_semicircle, pv_semicircle_numeric

EXPERIMENTS = ("tail", "localscan", "deloc", "identities", "covariance", "pv")


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""


@dataclass
class ExperimentConfig:
    """Validated experiment description; unknown keys are rejected at load.

    Defaults: rademacher entries, n = 1000 (identities ignore n and run
    ``trials`` instances with sizes cycling over [3, 16]), 5 trials,
    delta = 0.2, eps = 0.1, eta_multiple = 10, scales in multiples of
    log n / n, single worker.
    """

    experiment: str
    dist: DistSpec = field(default_factory=lambda: DistSpec("rademacher"))
    n: int = 1000
    p: int | None = None
    n_grid: list[int] | None = None
    trials: int | None = None
    base_seed: int = 0
    delta: float = 0.2
    eps: float = 0.1
    eta_multiple: float = 10.0
    scales: list[float] = field(default_factory=lambda: [1.0, 2.0, 5.0, 10.0, 20.0, 50.0])
    t_grid: list[float] | None = None
    envelopes: list[str] = field(default_factory=list)
    statistic: str = "quadratic"
    matrix: str = "gaussian_symmetric"
    d: int = 64
    workers: int = 1
    out_dir: str = "out"
    label: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if isinstance(self.dist, dict):
            try:
                self.dist = DistSpec.from_dict(self.dist)
            except ParameterError as exc:
                raise ConfigError(f"field 'dist': {exc}") from exc
        if self.trials is None:
            self.trials = 200 if self.experiment == "identities" else 5
        for name in ("n", "trials", "workers", "d"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"field {name!r} must be a positive integer")
        if self.p is not None and not 1 <= self.p <= self.n:
            raise ConfigError("field 'p' must satisfy 1 <= p <= n")
        if self.delta <= 0 or self.eps <= 0 or self.eta_multiple <= 0:
            raise ConfigError("delta, eps and eta_multiple must be positive")
        if any(s <= 0 for s in self.scales) or list(self.scales) != sorted(self.scales):
            raise ConfigError("scales must be positive and ascending")
        if self.statistic not in ("quadratic", "projection"):
            raise ConfigError("statistic must be 'quadratic' or 'projection'")
        if self.matrix not in ("identity", "gaussian_symmetric"):
            raise ConfigError("matrix must be 'identity' or 'gaussian_symmetric'")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be a nonnegative 64-bit integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dist"] = self.dist.to_dict()
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def load_config(path) -> ExperimentConfig:
    """Load a JSON config file, validating fields and rejecting unknown keys."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"parse error at line {exc.lineno}: {exc.msg}") from exc
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    if "experiment" not in raw:
        raise ConfigError("field 'experiment' is required")
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    columns: list[str]
    records: list[tuple]
    summary: dict
    wall_time: float
    out_path: Path | None


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_outputs(report: ExperimentReport, out_root: Path) -> Path:
    label = report.config.label or report.config.config_hash()
    out = out_root / report.config.experiment / label
    out.mkdir(parents=True, exist_ok=True)
    marker = out / "INCOMPLETE"
    marker.write_text("run in progress\n")
    with open(out / "records.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(report.columns)
        for row in report.records:
            writer.writerow([_fmt(v) for v in row])
    (out / "config.json").write_text(json.dumps(report.config.to_dict(), indent=2, sort_keys=True) + "\n")
    summary = dict(report.summary)
    summary["version"] = f"{__version__}+{report.config.config_hash()}"
    summary["wall_time_s"] = report.wall_time
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    marker.unlink()
    return out


# --- tail experiment --------------------------------------------------------


def _tail_matrix(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.matrix == "identity":
        return np.eye(cfg.n)
    rng = np.random.Generator(np.random.PCG64(derive_seed(cfg.base_seed, 1 << 48)))
    g = rng.standard_normal((cfg.n, cfg.n))
    return (g + g.T) / math.sqrt(2.0)

def _run_tail(cfg: ExperimentConfig):
    if cfg.statistic == "projection":
        basis = np.eye(cfg.n)[:, : cfg.d]
        frame = WeightedFrame(basis=basis, weights=np.ones(cfg.d))
        matrix = None
        frob = spec = math.sqrt(cfg.d)  # unused by the projection envelope
    else:
        frame = None
        matrix = _tail_matrix(cfg)
        frob = float(np.linalg.norm(matrix))
        spec = float(np.linalg.norm(matrix, 2))
    t_grid = cfg.t_grid or list(np.linspace(0.0, 8.0 * max(1.0, frob), 33))
    k = cfg.dist.bound if math.isfinite(cfg.dist.bound) else 1.0
    tail = empirical_tail(
        cfg.statistic,
        cfg.dist,
        np.asarray(t_grid),
        cfg.trials,
        cfg.base_seed,
        frame=frame,
        matrix=matrix,
        workers=cfg.workers,
    )
    envs = {}
    for kind in cfg.envelopes:
        kwargs = dict(kind=kind, K=k, n=cfg.n, frobenius=frob, spectral=spec)
        if kind == "hw":
            babs = float(np.linalg.norm(np.abs(matrix), 2)) if matrix is not None else spec
            kwargs["spectral_abs"] = babs
        if kind in ("subexp", "esy2"):
            kwargs["alpha"] = cfg.dist.alpha
        envs[kind] = TailEnvelope(**kwargs)
    columns = ["t", "survival", "stderr", "trials"] + [f"envelope_{k}" for k in cfg.envelopes]
    records = []
    for i, t in enumerate(tail.t_grid):
        row = [float(t), float(tail.survival[i]), float(tail.stderr[i]), tail.trials]
        row += [envs[k](float(t)) for k in cfg.envelopes]
        records.append(tuple(row))
    ok = bool(tail.survival[-1] <= min((e(float(tail.t_grid[-1])) for e in envs.values()), default=1.0))
    summary = {"ok": ok, "statistic": cfg.statistic, "max_t_survival": float(tail.survival[-1])}
    return columns, records, summary


# --- localscan experiment ---------------------------------------------------


def _localscan_trial(args):
    dist, n, scales_abs, bulk, trial, seed = args
    w = sample_wigner(dist, n, seed, normalize=True)
    eigs = np.linalg.eigvalsh(w)
    rows = []
    worst = []
    for scale in scales_abs:
        dev = law_deviation(eigs, "semicircle", scale, bulk)
        worst.append(dev.max_rel_dev)
        for w_lo, w_hi, count, mass, rel in dev.windows:
            rows.append((scale, trial, w_lo, w_hi, count, mass, rel))
    return rows, worst


def _run_localscan(cfg: ExperimentConfig):
    unit = math.log(cfg.n) / cfg.n
    scales_abs = [s * unit for s in cfg.scales]
    bulk = (-1.8, 1.8)
    jobs = [
        (cfg.dist, cfg.n, scales_abs, bulk, t, derive_seed(cfg.base_seed, t))
        for t in range(cfg.trials)
    ]
    if cfg.workers <= 1:
        results = [_localscan_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_localscan_trial, jobs))
    records = [row for rows, _ in results for row in rows]
    worst = np.max(np.array([w for _, w in results]), axis=0)
    threshold = None
    for mult, dev in zip(cfg.scales, worst):
        if dev <= cfg.delta:
            threshold = mult * unit
            break
    columns = ["scale", "trial", "window_lo", "window_hi", "N_I", "expected_mass", "rel_dev"]
    summary = {
        "ok": threshold is not None,
        "delta": cfg.delta,
        "scale_multiples": list(cfg.scales),
        "max_rel_dev": [float(v) for v in worst],
        "threshold_scale": threshold,
    }
    return columns, records, summary


# --- deloc experiment -------------------------------------------------------


def _deloc_trial(args):
    dist, n, eps, trial, seed = args
    w = sample_wigner(dist, n, seed, normalize=True)
    recs = eigvec_inf_norms(eig_decompose(w), n, seed, eps)
    return [
        (r.n, r.seed, r.index, r.lam, r.region, r.inf_norm, r.scaled_bulk, r.scaled_edge)
        for r in recs
    ]


def _run_deloc(cfg: ExperimentConfig):
    n_values = cfg.n_grid or [cfg.n]
    jobs = []
    idx = 0
    for n in n_values:
        for t in range(cfg.trials):
            jobs.append((cfg.dist, n, cfg.eps, t, derive_seed(cfg.base_seed, idx)))
            idx += 1
    if cfg.workers <= 1:
        results = [_deloc_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_deloc_trial, jobs))
    records = [row for rows in results for row in rows]
    columns = ["n", "seed", "index", "lambda", "region", "inf_norm", "scaled_bulk", "scaled_edge"]
    bulk_max = max((r[6] for r in records if r[4] == "bulk"), default=float("nan"))
    summary = {"ok": bool(bulk_max <= 4.0), "max_scaled_bulk": float(bulk_max)}
    return columns, records, summary


# --- identities experiment --------------------------------------------------


def _identity_instance(dist: DistSpec, instance: int, seed: int):
    """One batch of exact-identity checks on a small random instance."""
    rng_sizes_n = list(range(3, 17))
    n = rng_sizes_n[instance % len(rng_sizes_n)]
    p = 2 + instance % 9
    pn = max(p, 3 + instance % 14)
    rows = []

    w = sample_wigner(dist, n, seed, normalize=True)
    for i in range(n):
        try:
            lhs, rhs, _ = entry_identity(w, i)
            rows.append((instance, "entry", n, 0, abs(lhs - rhs) / max(abs(rhs), 1e-30)))
        except NearCollisionError:
            continue
    for i in range(n):
        try:
            lhs, rhs = interlacing_identity(w, i)
            rows.append((instance, "interlacing", n, 0, abs(lhs - rhs) / max(abs(rhs), 1.0)))
        except NearCollisionError:
            continue

    z = 0.3 + 0.7j
    rows.append((instance, "schur_sum", n, 0, schur_identity_residual(math.sqrt(n) * w, z)))

    # spectral identity of the quadratic form against the eigenbasis frame
    x = sample_vector(dist, n, derive_seed(seed, 1))
    a = sample_wigner(DistSpec("gaussian"), n, derive_seed(seed, 2), normalize=False)
    vals, vecs = np.linalg.eigh(a)
    lhs_q = quadratic_deviation(x, a)
    rhs_q = complex(np.sum(vals * (np.abs(np.conj(vecs).T @ x) ** 2 - 1.0)))
    rows.append((instance, "spectral_form", n, 0, abs(lhs_q - rhs_q) / max(abs(lhs_q), 1.0)))

    m = sample_rect(dist, p, pn, derive_seed(seed, 3))
    for i in range(p):
        for side in ("right", "left"):
            try:
                lhs, rhs, _ = singular_entry_identity(m, i, side)
                rows.append((instance, f"singular_entry_{side}", pn, p, abs(lhs - rhs) / max(abs(rhs), 1e-30)))
            except NearCollisionError:
                continue
    for i in range(p):
        for side in ("right", "left"):
            try:
                lhs, rhs = singular_interlacing_identity(m, i, side)
                scale = max(float(np.linalg.norm(m, 2) ** 2), 1.0)
                rows.append((instance, f"singular_interlacing_{side}", pn, p, abs(lhs - rhs) / scale))
            except NearCollisionError:
                continue
    rows.append((instance, "cov_schur_sum", pn, p, covariance_schur_residual(m, z)))
    return rows


def _run_identities(cfg: ExperimentConfig):
    records = []
    for instance in range(cfg.trials):
        records.extend(_identity_instance(cfg.dist, instance, derive_seed(cfg.base_seed, instance)))
    columns = ["instance", "check", "n", "p", "rel_err"]
    failures = [r for r in records if r[4] > 1e-8]
    summary = {
        "ok": not failures,
        "checks": len(records),
        "failures": len(failures),
        "max_rel_err": max((r[4] for r in records), default=0.0),
    }
    return columns, records, summary


# --- covariance experiment --------------------------------------------------


def _covariance_trial(args):
    dist, p, n, eps, scale_mult, eta_multiple, trial, seed = args
    m = sample_rect(dist, p, n, seed)
    y = p / n
    gram_eigs = np.linalg.eigvalsh(m @ m.T.conj() / n)
    a, b = mp_edges(y)
    unit = math.log(n) / n
    dev = law_deviation(gram_eigs, ("mp", y), scale_mult * unit, (a + 2 * eps, b - 2 * eps))
    eta = eta_multiple * unit
    sc_res = max(
        mp_self_consistency_residual(gram_eigs, x + 1j * eta, y)
        for x in np.linspace(a + 2 * eps, b - 2 * eps, 25)
    )
    recs = singular_vec_inf_norms(m, eps, seed)
    rows = [
        (trial, r.side, r.n, r.index, r.lam, r.region, r.inf_norm, r.scaled_bulk, r.scaled_edge)
        for r in recs
    ]
    return rows, dev.max_rel_dev, sc_res


def _run_covariance(cfg: ExperimentConfig):
    p = cfg.p or cfg.n // 2
    scale_mult = cfg.scales[-2] if len(cfg.scales) >= 2 else cfg.scales[-1]
    jobs = [
        (cfg.dist, p, cfg.n, cfg.eps, scale_mult, cfg.eta_multiple, t, derive_seed(cfg.base_seed, t))
        for t in range(cfg.trials)
    ]
    if cfg.workers <= 1:
        results = [_covariance_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_covariance_trial, jobs))
    records = [row for rows, _, _ in results for row in rows]
    max_dev = max(d for _, d, _ in results)
    max_res = max(r for _, _, r in results)
    columns = ["trial", "side", "dim", "index", "lambda", "region", "inf_norm", "scaled_bulk", "scaled_edge"]
    summary = {
        "ok": bool(max_dev <= 0.25),
        "y": p / cfg.n,
        "max_mp_rel_dev": float(max_dev),
        "max_self_consistency_residual": float(max_res),
    }
    return columns, records, summary


# --- pv experiment ----------------------------------------------------------


def _run_pv(cfg: ExperimentConfig):
    records = []
    worst = 0.0
    for lam in (0.0, 1.0, -1.0, 1.9, -1.9, 3.0, -3.0):
        closed = pv_semicircle(lam)
        numeric = pv_semicircle_numeric(lam)
        err = abs(closed - numeric)
        worst = max(worst, err)
        records.append(("semicircle", lam, closed, numeric, err))
    y = 0.5
    a, b = mp_edges(y)
    for lam, limit in ((a, math.sqrt(y)), (b, -math.sqrt(y))):
        numeric = pv_mp(lam, y)
        err = abs(numeric - limit)
        records.append((f"mp_y={y}", lam, limit, numeric, err))
        worst = max(worst, err)
    columns = ["family", "lambda", "reference", "numeric", "abs_err"]
    summary = {"ok": bool(worst <= 0.05), "max_abs_err": float(worst)}
    return columns, records, summary


_RUNNERS = {
    "tail": _run_tail,
    "localscan": _run_localscan,
    "deloc": _run_deloc,
    "identities": _run_identities,
    "covariance": _run_covariance,
    "pv": _run_pv,
}


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """Execute the configured experiment and (optionally) persist its outputs."""
    start = time.perf_counter()
    columns, records, summary = _RUNNERS[cfg.experiment](cfg)
    report = ExperimentReport(
        config=cfg,
        columns=columns,
        records=records,
        summary=summary,
        wall_time=time.perf_counter() - start,
        out_path=None,
    )
    if write:
        report.out_path = _write_outputs(report, Path(cfg.out_dir))
    return report


__all__ = [
    "EXPERIMENTS",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "config_from_dict",
    "derive_seed",
    "load_config",
    "run_experiment",
]
