from pathlib import Path

import pytest

from safenav.agents import CcPomcpAgent, PomcpAgent, StaticAgent
from safenav.harness import (
    WORKERS_ENV_VAR,
    RunConfig,
    config_from_dict,
    load_config,
    resolve_workers,
    static_k,
)
from safenav.solvers import BudgetMode
from safenav.world import (
    CC_POMCP_REWARDS,
    ENV_TUNNEL,
    POMCP_REWARDS,
    CellKind,
    ConfigError,
)

from .maps import LANE_MAP

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def test_empty_config_uses_cc_defaults():
    cfg = config_from_dict({})
    assert cfg.strategy == "ccpomcp"
    assert cfg.rewards == CC_POMCP_REWARDS
    assert cfg.search.gamma == 0.9
    assert cfg.search.kappa == 200
    assert cfg.constraint.c_hat == 0.10
    assert cfg.belief.n_particles == 1000
    assert cfg.n_runs == 100
    assert isinstance(cfg.make_agent(), CcPomcpAgent)


def test_pomcp_defaults():
    cfg = config_from_dict({"strategy": "pomcp"})
    assert cfg.rewards == POMCP_REWARDS
    assert cfg.search.gamma == 0.999
    assert cfg.search.kappa == 150
    assert isinstance(cfg.make_agent(), PomcpAgent)


def test_overrides():
    cfg = config_from_dict(
        {
            "env": ENV_TUNNEL,
            "strategy": "static-4",
            "seed": 7,
            "rewards": {"r_local": -5},
            "search": {"n_sims": 100, "n_particles": 250},
            "constraint": {"c_hat": 0.05, "budget_mode": "static"},
        }
    )
    assert cfg.env == ENV_TUNNEL
    assert cfg.seed == 7
    assert cfg.rewards.r_local == -5
    assert cfg.rewards.r_fail == CC_POMCP_REWARDS.r_fail
    assert cfg.search.n_p == 250
    assert cfg.belief.n_particles == 250
    assert cfg.constraint.base.n_sims == 100
    assert cfg.constraint.budget_mode is BudgetMode.STATIC
    agent = cfg.make_agent()
    assert isinstance(agent, StaticAgent)
    assert str(agent) == "static-4"


@pytest.mark.parametrize(
    "data",
    [
        {"strategy": "greedy"},
        {"strategy": "static-0"},
        {"strategy": "static-x"},
        {"typo": 1},
        {"search": {"n_sim": 10}},
        {"search": {"n_sims": 0}},
        {"search": "fast"},
        {"constraint": {"budget_mode": "sometimes"}},
        {"rewards": {"r_fail": 5}},
        {"n_runs": 0},
        {"seed": -1},
        {"env": "ENV-MARS"},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


def test_static_k():
    assert static_k("static-3") == 3
    assert static_k("pomcp") is None


def test_map_paths_are_relative_to_the_config(tmp_path):
    (tmp_path / "maps").mkdir()
    (tmp_path / "maps" / "lanes.map").write_text(LANE_MAP)
    config_path = tmp_path / "run.yaml"
    config_path.write_text("env: maps/lanes.map\nstrategy: static-2\nn_runs: 5\n")

    cfg = load_config(str(config_path))
    assert cfg.n_runs == 5
    assert cfg.load_map().region_names() == ["shore", "lane", "sea"]


def test_strip_hazards(tmp_path):
    (tmp_path / "lanes.map").write_text(LANE_MAP)
    config_path = tmp_path / "run.yaml"
    config_path.write_text("env: lanes.map\nstrip_hazards: true\n")

    grid_map = load_config(str(config_path)).load_map()
    assert CellKind.SURFACE_HAZARD not in grid_map.cells


def test_malformed_yaml(tmp_path):
    config_path = tmp_path / "run.yaml"
    config_path.write_text("search: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(str(config_path))


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.yaml")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(str(path))
    cfg.load_map()
    cfg.make_agent()


def test_workers_from_the_environment(monkeypatch):
    cfg = RunConfig(workers=3)
    monkeypatch.delenv(WORKERS_ENV_VAR, raising=False)
    assert resolve_workers(cfg) == 3
    monkeypatch.setenv(WORKERS_ENV_VAR, "2")
    assert resolve_workers(cfg) == 2
    assert resolve_workers(cfg, 5) == 5
    monkeypatch.setenv(WORKERS_ENV_VAR, "many")
    with pytest.raises(ConfigError):
        resolve_workers(cfg)


def test_surfacing_guard_can_be_turned_off():
    assert config_from_dict({"strategy": "pomcp"}).make_agent().guard_surfacing
    cfg = config_from_dict({"guard_surfacing": False})
    assert not cfg.guard_surfacing
    assert not cfg.make_agent().guard_surfacing
