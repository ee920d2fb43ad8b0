"""Support for running batches of episodes and aggregating their metrics."""

import multiprocessing
import os
from dataclasses import dataclass, field

import numpy as np

from safenav.world import ConfigError

from .config import RunConfig
from .episode import Outcome, RunResult, run_episode

WORKERS_ENV_VAR = "SAFENAV_WORKERS"
PROGRESS_EVERY = 10
FAILURE_CLASSES = (
    Outcome.FAILED_COLLISION,
    Outcome.FAILED_OFF_MAP,
    Outcome.FAILED_SURFACED,
    Outcome.TIMEOUT,
)


@dataclass(frozen=True)
class Stat:
    """Mean and population standard deviation of a per-episode metric."""

    mean: float
    std: float

    @classmethod
    def of(cls, values) -> "Stat":
        """Statistics of a sequence of per-episode values."""
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls(0.0, 0.0)
        return cls(float(values.mean()), float(values.std()))


@dataclass(frozen=True)
class StrategySummary:
    """Aggregated metrics of one strategy over a batch of episodes."""

    strategy: str
    env: str
    n_runs: int
    failure_rate: Stat
    failure_rates: dict[str, Stat] = field(default_factory=dict)
    localize_counts: dict[str, Stat] = field(default_factory=dict)
    cumulative_collision: Stat = field(default=Stat(0.0, 0.0))
    goal_rate: float = field(default=0.0)

    def to_dict(self) -> dict:
        """Plain mapping suitable for JSON."""

        def stat(value: Stat) -> dict:
            return {"mean": value.mean, "std": value.std}

        return {
            "strategy": self.strategy,
            "env": self.env,
            "n_runs": self.n_runs,
            "failure_rate": stat(self.failure_rate),
            "failure_rates": {key: stat(value) for key, value in self.failure_rates.items()},
            "localize_counts": {
                key: stat(value) for key, value in self.localize_counts.items()
            },
            "cumulative_collision": stat(self.cumulative_collision),
            "goal_rate": self.goal_rate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StrategySummary":
        """Inverse of to_dict."""

        def stat(value: dict) -> Stat:
            return Stat(float(value["mean"]), float(value["std"]))

        return cls(
            strategy=data["strategy"],
            env=data["env"],
            n_runs=int(data["n_runs"]),
            failure_rate=stat(data["failure_rate"]),
            failure_rates={key: stat(value) for key, value in data["failure_rates"].items()},
            localize_counts={
                key: stat(value) for key, value in data["localize_counts"].items()
            },
            cumulative_collision=stat(data["cumulative_collision"]),
            goal_rate=float(data["goal_rate"]),
        )


@dataclass(frozen=True)
class BatchSummary:
    """Summaries of one or more strategies, keyed by strategy."""

    env: str
    cost_threshold: float
    strategies: dict[str, StrategySummary] = field(default_factory=dict)

    @property
    def n_runs(self) -> int:
        """Total number of summarized episodes."""
        return sum(summary.n_runs for summary in self.strategies.values())

    def to_dict(self) -> dict:
        """Plain mapping suitable for JSON."""
        return {
            "env": self.env,
            "cost_threshold": self.cost_threshold,
            "n_runs": self.n_runs,
            "strategies": {
                key: summary.to_dict() for key, summary in self.strategies.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BatchSummary":
        """Inverse of to_dict."""
        return cls(
            env=data["env"],
            cost_threshold=float(data["cost_threshold"]),
            strategies={
                key: StrategySummary.from_dict(value)
                for key, value in data.get("strategies", {}).items()
            },
        )


def summarize_strategy(
    results: list[RunResult], strategy: str, env: str, regions: list[str]
) -> StrategySummary:
    """Aggregate episode results of one strategy.

    Results are ordered by seed first so the floating point sums do not
    depend on the order episodes finished in.
    """

    results = sorted(results, key=lambda result: result.seed)
    outcomes = [result.outcome for result in results]

    counts = [result.localize_counts() for result in results]
    seen = set().union(*counts) if counts else set()
    all_regions = list(regions) + sorted(seen - set(regions))

    return StrategySummary(
        strategy=strategy,
        env=env,
        n_runs=len(results),
        failure_rate=Stat.of([outcome.is_failure for outcome in outcomes]),
        failure_rates={
            outcome_class.value: Stat.of([outcome is outcome_class for outcome in outcomes])
            for outcome_class in FAILURE_CLASSES
        },
        localize_counts={
            region: Stat.of([count.get(region, 0) for count in counts])
            for region in all_regions
        },
        cumulative_collision=Stat.of([result.final_collision for result in results]),
        goal_rate=Stat.of(
            [outcome is Outcome.REACHED_GOAL for outcome in outcomes]
        ).mean,
    )


def resolve_workers(cfg: RunConfig, workers: int | None = None) -> int:
    """Worker count from the argument, the environment or the configuration."""

    if workers is None and os.environ.get(WORKERS_ENV_VAR):
        try:
            workers = int(os.environ[WORKERS_ENV_VAR])
        except ValueError as error:
            raise ConfigError(
                f"{WORKERS_ENV_VAR} must be an integer, got {os.environ[WORKERS_ENV_VAR]}"
            ) from error
    workers = cfg.workers if workers is None else workers
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    return workers


def _run_task(task: tuple[RunConfig, int]) -> RunResult:
    cfg, seed = task
    return run_episode(cfg, seed)


def run_episodes(
    cfg: RunConfig, workers: int | None = None, progress: bool = True
) -> list[RunResult]:
    """Run episodes with seeds ``seed .. seed + n_runs - 1``, sorted by seed."""

    workers = resolve_workers(cfg, workers)
    tasks = [(cfg, cfg.seed + i) for i in range(cfg.n_runs)]

    if progress:
        print(f"Running {cfg.n_runs} episodes of {cfg.strategy} on {cfg.env}...")

    results = []
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            for i, result in enumerate(pool.imap_unordered(_run_task, tasks)):
                if progress and i % PROGRESS_EVERY == 0:
                    print(f"Running episode {i}...")
                results.append(result)
    else:
        grid_map = cfg.load_map()
        for i, (_, seed) in enumerate(tasks):
            if progress and i % PROGRESS_EVERY == 0:
                print(f"Running episode {i}...")
            results.append(run_episode(cfg, seed, grid_map))

    if progress:
        print("Batch finished.")

    return sorted(results, key=lambda result: result.seed)


def run_batch(
    cfg: RunConfig, workers: int | None = None, progress: bool = True
) -> BatchSummary:
    """Run a batch of episodes and summarize them."""

    results = run_episodes(cfg, workers, progress)
    regions = cfg.load_map().region_names()
    return BatchSummary(
        env=cfg.env,
        cost_threshold=cfg.constraint.c_hat,
        strategies={
            cfg.strategy: summarize_strategy(results, cfg.strategy, cfg.env, regions)
        },
    )


def merge_summaries(summaries: list[BatchSummary]) -> BatchSummary:
    """Union the strategy tables of several summaries."""

    if not summaries:
        raise ValueError("Nothing to merge")

    strategies: dict[str, StrategySummary] = {}
    for summary in summaries:
        for key, strategy in summary.strategies.items():
            if key in strategies:
                key = f"{key}@{strategy.env}"
            if key in strategies:
                raise ValueError(f"Strategy {key} appears in more than one summary")
            strategies[key] = strategy

    envs = sorted({summary.env for summary in summaries})
    thresholds = {summary.cost_threshold for summary in summaries}
    if len(thresholds) > 1:
        raise ValueError(f"Summaries disagree on the cost threshold: {sorted(thresholds)}")

    return BatchSummary(
        env=",".join(envs),
        cost_threshold=thresholds.pop(),
        strategies=strategies,
    )
