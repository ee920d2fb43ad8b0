import io
import json

import pytest

from safenav.agents import localize_count
from safenav.belief import BeliefParams
from safenav.harness import (
    BatchSummary,
    LocalizeEvent,
    Outcome,
    RunConfig,
    RunResult,
    Stat,
    StrategySummary,
    emit_report,
    load_summary,
    merge_summaries,
    run_batch,
    run_episode,
    run_episodes,
    summarize_strategy,
    summary_table,
)
from safenav.solvers import CcSearchParams, SearchParams
from safenav.world import NOISE_FREE, Action, Terminal, parse_map

from .maps import LONG_CORRIDOR_MAP


def small_config(**kwargs):
    kwargs.setdefault("strategy", "static-2")
    kwargs.setdefault("belief", BeliefParams(n_particles=100))
    kwargs.setdefault("n_runs", 3)
    return RunConfig(**kwargs)


def small_cc_config(**kwargs):
    base = SearchParams(n_sims=60, gamma=0.9, kappa=200, n_p=100)
    return small_config(
        strategy="ccpomcp",
        search=base,
        constraint=CcSearchParams(base=base),
        **kwargs,
    )


def result(seed, outcome, regions=(), final=0.0):
    return RunResult(
        outcome=outcome,
        steps=len(regions) + 1,
        localize_events=tuple(
            LocalizeEvent(i, region, (0, 0)) for i, region in enumerate(regions)
        ),
        cumulative_collision_trace=(final,),
        executed_actions=(Action.MOVE,),
        seed=seed,
        strategy="static-2",
    )


def test_outcome_from_terminal():
    assert Outcome.from_terminal(Terminal.FAILED_SURFACED) is Outcome.FAILED_SURFACED
    assert Outcome.FAILED_OFF_MAP.is_failure
    assert not Outcome.TIMEOUT.is_failure
    with pytest.raises(ValueError):
        Outcome.from_terminal(Terminal.ACTIVE)


def test_same_seed_same_episode():
    cfg = small_config()
    assert run_episode(cfg, 11) == run_episode(cfg, 11)


def test_episode_records_are_consistent():
    run = run_episode(small_config(), 4)
    trace = run.cumulative_collision_trace
    assert len(trace) == run.steps == len(run.executed_actions)
    assert trace[0] >= 0.0
    assert all(a <= b for a, b in zip(trace, trace[1:]))
    assert len(run.localize_events) == run.executed_actions.count(Action.LOCALIZE)
    assert [event.step for event in run.localize_events] == [
        i for i, action in enumerate(run.executed_actions) if action is Action.LOCALIZE
    ]
    assert run.cost_budget_trace == ()


def test_surfacing_in_a_lane(lane_map):
    cfg = small_config(strategy="static-1", noise=NOISE_FREE)
    run = run_episode(cfg, 0, grid_map=lane_map)
    assert run.outcome is Outcome.FAILED_SURFACED
    assert run.steps == 2
    assert run.executed_actions == (Action.MOVE, Action.LOCALIZE)
    assert run.localize_counts() == {"lane": 1}
    assert run.total_cost == 1.0
    assert run.total_reward == -1 - 3 - 100


def test_static_localize_count_without_noise(corridor_map):
    cfg = small_config(strategy="static-3", noise=NOISE_FREE)
    run = run_episode(cfg, 0, grid_map=corridor_map)
    assert run.outcome is Outcome.REACHED_GOAL
    assert run.executed_actions.count(Action.LOCALIZE) == localize_count(3, run.steps)
    assert run.final_collision == 0.0


def test_cc_episode_reaches_the_goal_without_noise(corridor_map):
    run = run_episode(small_cc_config(noise=NOISE_FREE), 0, grid_map=corridor_map)
    assert run.outcome is Outcome.REACHED_GOAL
    assert run.executed_actions.count(Action.MOVE) == 4
    assert len(run.cost_budget_trace) == len(run.lambda_trace) == run.steps


def test_cc_budget_never_goes_negative(lane_map):
    run = run_episode(small_cc_config(), 2, grid_map=lane_map)
    assert all(budget >= 0.0 for budget in run.cost_budget_trace)
    assert all(lam >= 0.0 for lam in run.lambda_trace)


@pytest.mark.parametrize("strategy", ["pomcp", "ccpomcp"])
def test_online_planners_stay_under_in_the_lane(lane_map, strategy):
    base = SearchParams(n_sims=60, gamma=0.9, kappa=200, n_p=100)
    cfg = small_config(strategy=strategy, search=base, constraint=CcSearchParams(base=base))
    for seed in range(3):
        run = run_episode(cfg, seed, grid_map=lane_map)
        assert run.outcome is not Outcome.FAILED_SURFACED


def test_step_limit_times_out():
    # ten moves can not cover a twenty-waypoint corridor
    cfg = small_config(strategy="static-1", max_steps_factor=1)
    run = run_episode(cfg, 0, grid_map=parse_map(LONG_CORRIDOR_MAP))
    assert run.outcome is Outcome.TIMEOUT
    assert run.steps == 20


def test_episode_seeds():
    cfg = small_config(seed=40, n_runs=4)
    runs = run_episodes(cfg, workers=1, progress=False)
    assert [run.seed for run in runs] == [40, 41, 42, 43]


def test_stat():
    assert Stat.of([]) == Stat(0.0, 0.0)
    assert Stat.of([1, 1, 1]) == Stat(1.0, 0.0)
    assert Stat.of([0, 1]) == Stat(0.5, 0.5)


def test_summarize_strategy():
    results = [
        result(1, Outcome.REACHED_GOAL, ["shore", "shore"]),
        result(0, Outcome.FAILED_SURFACED, ["lane"], final=0.5),
        result(2, Outcome.TIMEOUT, ["elsewhere"]),
        result(3, Outcome.REACHED_GOAL),
    ]
    summary = summarize_strategy(results, "static-2", "ENV-TRAINING", ["shore", "lane"])
    assert summary.n_runs == 4
    assert summary.failure_rate.mean == 0.25
    assert summary.failure_rates["FailedSurfaced"].mean == 0.25
    assert summary.failure_rates["Timeout"].mean == 0.25
    assert summary.goal_rate == 0.5
    assert list(summary.localize_counts) == ["shore", "lane", "elsewhere"]
    assert summary.localize_counts["shore"].mean == 0.5
    assert summary.localize_counts["shore"].std == pytest.approx(0.8660254)
    assert summary.cumulative_collision.mean == 0.125


def test_single_run_has_no_spread():
    summary = run_batch(small_config(n_runs=1), progress=False)
    strategy = summary.strategies["static-2"]
    assert strategy.n_runs == 1
    assert strategy.failure_rate.std == 0.0
    assert all(stat.std == 0.0 for stat in strategy.localize_counts.values())


def test_worker_count_does_not_change_the_summary():
    cfg = small_config(n_runs=4)
    assert run_batch(cfg, workers=1, progress=False) == run_batch(
        cfg, workers=2, progress=False
    )


def test_batch_prints_progress(capsys):
    run_batch(small_config(n_runs=2), progress=True)
    out = capsys.readouterr().out
    assert "Running episode 0..." in out
    assert out.rstrip().endswith("Batch finished.")


def make_summary(strategy="static-2", env="ENV-TRAINING", threshold=0.1):
    return BatchSummary(
        env=env,
        cost_threshold=threshold,
        strategies={
            strategy: StrategySummary(
                strategy=strategy,
                env=env,
                n_runs=10,
                failure_rate=Stat(0.2, 0.4),
                failure_rates={"FailedSurfaced": Stat(0.2, 0.4)},
                localize_counts={"lane": Stat(1.5, 0.5)},
                cumulative_collision=Stat(0.15, 0.1),
                goal_rate=0.8,
            )
        },
    )


def test_summary_table():
    table = summary_table(make_summary())
    assert list(table.columns) == [
        "strategy", "metric", "region", "mean", "std", "cost_threshold"
    ]
    assert list(table["metric"]) == ["failure_rate", "cumulative_collision", "localize_count"]
    assert list(table["region"]) == ["", "", "lane"]
    assert (table["cost_threshold"] == 0.1).all()


def test_empty_csv_report_has_a_header():
    out = io.StringIO()
    emit_report(BatchSummary("ENV-TRAINING", 0.1), "csv", out)
    assert out.getvalue().strip() == "strategy,metric,region,mean,std,cost_threshold"


def test_json_report_reads_back(tmp_path):
    path = tmp_path / "report.json"
    summary = make_summary()
    emit_report(summary, "json", str(path))
    assert json.loads(path.read_text())["n_runs"] == 10
    assert load_summary(str(path)) == summary


def test_unknown_report_format():
    with pytest.raises(ValueError):
        emit_report(make_summary(), "xml", io.StringIO())


def test_malformed_report(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"env": "ENV-TRAINING"}')
    with pytest.raises(ValueError):
        load_summary(str(path))


def test_merge_summaries():
    merged = merge_summaries(
        [make_summary("static-2"), make_summary("ccpomcp"), make_summary("ccpomcp", "ENV-STT")]
    )
    assert list(merged.strategies) == ["static-2", "ccpomcp", "ccpomcp@ENV-STT"]
    assert merged.env == "ENV-STT,ENV-TRAINING"
    assert merged.n_runs == 30


def test_merge_rejects_conflicts():
    with pytest.raises(ValueError):
        merge_summaries([make_summary(), make_summary(), make_summary()])
    with pytest.raises(ValueError):
        merge_summaries([make_summary("pomcp"), make_summary("static-2", threshold=0.2)])
    with pytest.raises(ValueError):
        merge_summaries([])
