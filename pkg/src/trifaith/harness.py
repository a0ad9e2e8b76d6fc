"""Monte Carlo runner: random models from the (k, J, C) class, searched and
estimated at several sample sizes, scored against the truth.

Every replication draws its model from the seed ``(master_seed, rep, 0)``
and its data at size ``n`` from ``(master_seed, rep, 1, n)``, so results do
not depend on scheduling and adding a sample size leaves the others alone.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .estimate import estimates_from_search, structural_distance
from .graph import TripleMark
from .search import V5_VARIANTS, ErrorKind, SampleDecider, classify_error, vcsgs
from .sem import ModelClassParams, RandomSemConfig, draw_sem, sample

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

STAGE_MODEL = 0
STAGE_SAMPLE = 1
ALPHA_SCHEDULES = ("fixed", "sqrt")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Harness settings. Every default is a runtime choice, not a claim.

    ``alpha_schedule="sqrt"`` tests at ``alpha * sqrt(n_min / n)`` so the
    level shrinks as data grows; ``"fixed"`` uses ``alpha`` at every size.
    """

    n_vars: int = 5
    edge_prob: float = 0.4
    coef_range: tuple[float, float] = (0.2, 0.9)
    k: float = 0.3
    J: float = 0.05
    C: float = 0.95
    sample_sizes: tuple[int, ...] = (500, 5000, 50000)
    replications: int = 200
    alpha: float = 0.05
    alpha_schedule: str = "sqrt"
    L: float = 0.1
    v5_variant: str = "all"
    delta: float = 0.1
    master_seed: int = 20240101
    max_tries: int = 10
    workers: int = 1
    output_csv: str | None = None
    output_json: str | None = None
    output_jsonl: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coef_range", tuple(float(c) for c in self.coef_range))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if not self.sample_sizes or any(b <= a for a, b in zip(self.sample_sizes, self.sample_sizes[1:])):
            raise ConfigError("sample_sizes must be nonempty and strictly increasing")
        if self.sample_sizes[0] < 1:
            raise ConfigError("sample sizes must be positive")
        if self.alpha_schedule not in ALPHA_SCHEDULES:
            raise ConfigError(f"alpha_schedule must be one of {ALPHA_SCHEDULES}")
        if self.v5_variant not in V5_VARIANTS:
            raise ConfigError(f"v5_variant must be one of {V5_VARIANTS}")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must be in (0, 1)")
        if len(self.coef_range) != 2 or not 0 <= self.coef_range[0] <= self.coef_range[1]:
            raise ConfigError("coef_range must be [low, high] with 0 <= low <= high")
        if self.n_vars < 1 or self.workers < 1 or self.max_tries < 1:
            raise ConfigError("n_vars, workers and max_tries must be positive")
        ModelClassParams(self.k, self.J, self.C)

    @property
    def params(self) -> ModelClassParams:
        return ModelClassParams(self.k, self.J, self.C)

    def alpha_at(self, n: int) -> float:
        if self.alpha_schedule == "fixed":
            return self.alpha
        return self.alpha * math.sqrt(self.sample_sizes[0] / n)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> ExperimentConfig:
        data = dict(data)
        params = data.pop("params", None)
        if params is not None:
            data.update(params)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        """Read a TOML or JSON config (chosen by the file suffix)."""
        path = Path(path)
        raw = path.read_bytes()
        try:
            if path.suffix.lower() == ".json":
                data = json.loads(raw)
            else:
                data = tomllib.loads(raw.decode())
        except (ValueError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a table of settings")
        return cls.from_mapping(data)

    def to_json(self) -> dict:
        d = asdict(self)
        d["coef_range"] = list(self.coef_range)
        d["sample_sizes"] = list(self.sample_sizes)
        return d


def stream_seed(master_seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


@dataclass(frozen=True)
class ReplicationRecord:
    replication: int
    n: int
    alpha: float
    n_edges: int
    model_draws: int
    error_kind: str
    distance: float
    exceeds_delta: bool
    unknown_rate: float
    v5_confirmed: bool
    ambiguous_triples: int

    @property
    def any_error(self) -> bool:
        return self.error_kind != ErrorKind.NONE.value

    def to_json(self) -> dict:
        return asdict(self)


def run_replication(config: ExperimentConfig, rep: int) -> list[ReplicationRecord]:
    sem, draws = draw_sem(RandomSemConfig(
        config.n_vars, config.edge_prob, config.coef_range, config.params,
        seed=stream_seed(config.master_seed, rep, STAGE_MODEL), max_tries=config.max_tries,
    ))
    out = []
    for n in config.sample_sizes:
        data = sample(sem, n, seed=stream_seed(config.master_seed, rep, STAGE_SAMPLE, n))
        alpha = config.alpha_at(n)
        decider = SampleDecider(data, alpha)
        result = vcsgs(decider, L=config.L, v5_variant=config.v5_variant)
        est = estimates_from_search(result, decider.cov)
        dist = structural_distance(est, sem)
        out.append(ReplicationRecord(
            replication=rep,
            n=n,
            alpha=alpha,
            n_edges=len(sem.dag.edges),
            model_draws=draws,
            error_kind=classify_error(result.graph, sem.dag).value,
            distance=dist,
            exceeds_delta=dist > config.delta,
            unknown_rate=est.unknown_rate(),
            v5_confirmed=result.nonadjacency_confirmed,
            ambiguous_triples=len(result.graph.triples_marked(TripleMark.AMBIGUOUS)),
        ))
    return out


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


CSV_COLUMNS = (
    "n", "kind_I_rate", "kind_II_rate", "kind_III_rate", "any_error_rate",
    "mean_distance", "p90_distance", "unknown_rate", "v5_confirm_rate",
    "ci_low", "ci_high",
    "exceed_rate", "exceed_ci_low", "exceed_ci_high", "mean_ambiguous", "alpha",
)


def summarize(records: list[ReplicationRecord], n: int) -> dict:
    rs = [r for r in records if r.n == n]
    m = len(rs)

    def rate(pred) -> float:
        return sum(1 for r in rs if pred(r)) / m

    n_any = sum(r.any_error for r in rs)
    n_exceed = sum(r.exceeds_delta for r in rs)
    dist = np.array([r.distance for r in rs])
    lo, hi = wilson_interval(n_any, m)
    elo, ehi = wilson_interval(n_exceed, m)
    return {
        "n": n,
        "kind_I_rate": rate(lambda r: r.error_kind == "I"),
        "kind_II_rate": rate(lambda r: r.error_kind == "II"),
        "kind_III_rate": rate(lambda r: r.error_kind == "III"),
        "any_error_rate": n_any / m,
        "mean_distance": float(dist.mean()),
        "p90_distance": float(np.quantile(dist, 0.9)),
        "unknown_rate": float(np.mean([r.unknown_rate for r in rs])),
        "v5_confirm_rate": rate(lambda r: r.v5_confirmed),
        "ci_low": lo,
        "ci_high": hi,
        "exceed_rate": n_exceed / m,
        "exceed_ci_low": elo,
        "exceed_ci_high": ehi,
        "mean_ambiguous": float(np.mean([r.ambiguous_triples for r in rs])),
        "alpha": rs[0].alpha,
    }


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    summaries: list[dict]
    records: list[ReplicationRecord] = field(repr=False)

    @property
    def acceptance_rate(self) -> float:
        draws = {r.replication: r.model_draws for r in self.records}
        return len(draws) / sum(draws.values()) if draws else 1.0

    def summary(self, n: int) -> dict:
        for s in self.summaries:
            if s["n"] == n:
                return s
        raise KeyError(n)

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "model_acceptance_rate": self.acceptance_rate,
            "summaries": self.summaries,
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for s in self.summaries:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in s.items()})
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.csv_text())

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for r in self.records:
                fh.write(json.dumps(r.to_json()) + "\n")

    def write(self) -> None:
        """Write whichever outputs the config names."""
        if self.config.output_csv:
            self.write_csv(self.config.output_csv)
        if self.config.output_json:
            self.write_json(self.config.output_json)
        if self.config.output_jsonl:
            self.write_jsonl(self.config.output_jsonl)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    reps = range(config.replications)
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(run_replication, [config] * len(reps), reps))
    else:
        chunks = [run_replication(config, r) for r in reps]
    records = [r for chunk in chunks for r in chunk]
    return ExperimentReport(config, [summarize(records, n) for n in config.sample_sizes], records)
