import json

import pandas as pd

from experiment import EXIT_USAGE, main
from safenav.world import builtin_names

from .maps import CORRIDOR_MAP


def write_config(tmp_path, text):
    (tmp_path / "corridor.map").write_text(CORRIDOR_MAP)
    path = tmp_path / "run.yaml"
    path.write_text(text)
    return str(path)


def test_envs_list(capsys):
    assert main(["envs", "list"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in builtin_names())


def test_envs_render(capsys):
    assert main(["envs", "render", "ENV-TRAINING"]) == 0
    assert "S" in capsys.readouterr().out


def test_unknown_environment():
    assert main(["envs", "render", "ENV-MARS"]) == EXIT_USAGE


def test_missing_config(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == EXIT_USAGE


def test_invalid_config(tmp_path):
    config = write_config(tmp_path, "env: corridor.map\nstrategy: greedy\n")
    assert main(["run", "-c", config]) == EXIT_USAGE


def test_run_writes_a_csv_report(tmp_path):
    config = write_config(
        tmp_path,
        "env: corridor.map\nstrategy: static-2\nbelief: {n_particles: 50}\n",
    )
    out = tmp_path / "report.csv"
    assert main(["run", "-c", config, "-n", "3", "--seed", "5", "-o", str(out), "-q"]) == 0

    table = pd.read_csv(out)
    assert list(table.columns) == [
        "strategy", "metric", "region", "mean", "std", "cost_threshold"
    ]
    assert set(table["strategy"]) == {"static-2"}
    assert "failure_rate" in set(table["metric"])


def test_run_then_merge(tmp_path, capsys):
    reports = []
    for strategy in ("static-1", "static-3"):
        config = write_config(
            tmp_path,
            f"env: corridor.map\nstrategy: {strategy}\nbelief: {{n_particles: 50}}\n",
        )
        out = tmp_path / f"{strategy}.json"
        argv = ["run", "-c", config, "-n", "2", "--format", "json", "-o", str(out), "-q"]
        assert main(argv) == 0
        reports.append(str(out))

    capsys.readouterr()
    assert main(["report", "--merge", *reports]) == 0
    merged = json.loads(capsys.readouterr().out)
    assert set(merged["strategies"]) == {"static-1", "static-3"}
    assert merged["n_runs"] == 4


def test_merge_of_a_malformed_report(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["report", "--merge", str(bad)]) == EXIT_USAGE
