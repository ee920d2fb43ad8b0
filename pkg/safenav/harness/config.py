"""Support for run configuration files.

A run configuration is a YAML mapping. Every planner parameter
has a key, and omitted keys take the defaults of the chosen strategy::

    env: ENV-TRAINING          # built-in name or a map file path
    strategy: ccpomcp          # static-<k> | pomcp | ccpomcp
    seed: 0
    n_runs: 100
    rewards: {r_goal: 100, r_move: -1, r_local: -3, r_fail: -100}
    search: {n_sims: 2000, tree_depth: 8, gamma: 0.9, kappa: 200, n_particles: 1000}
    constraint: {alpha_n: 0.001, c_hat: 0.10}
    guard_surfacing: true      # online planners never surface on a believed lane cell
"""

import os
from dataclasses import dataclass, field, fields, replace

import yaml

from safenav.agents import Agent, CcPomcpAgent, PomcpAgent, StaticAgent
from safenav.belief import BeliefParams
from safenav.solvers import (
    CC_POMCP_SEARCH,
    POMCP_SEARCH,
    BudgetMode,
    CcSearchParams,
    SearchParams,
)
from safenav.world import (
    CC_POMCP_REWARDS,
    DEFAULT_NOISE,
    ENV_TRAINING,
    POMCP_REWARDS,
    ConfigError,
    GridMap,
    MotionNoise,
    RewardConfig,
    builtin_env,
    builtin_names,
    load_map,
)

STRATEGY_POMCP = "pomcp"
STRATEGY_CC_POMCP = "ccpomcp"
STATIC_PREFIX = "static-"
DEFAULT_STRATEGY = STRATEGY_CC_POMCP
DEFAULT_RUNS = 100
DEFAULT_MAX_STEPS_FACTOR = 10
MAX_SEED = 2**64 - 1

TOP_LEVEL_KEYS = {
    "env",
    "strategy",
    "seed",
    "n_runs",
    "workers",
    "strip_hazards",
    "guard_surfacing",
    "max_steps_factor",
    "rewards",
    "search",
    "constraint",
    "belief",
    "noise",
}
SEARCH_KEY_ALIASES = {"n_particles": "n_p"}


def static_k(strategy: str) -> int | None:
    """Returns k of a ``static-<k>`` key, or None for other strategies."""
    if not strategy.startswith(STATIC_PREFIX):
        return None
    try:
        k = int(strategy[len(STATIC_PREFIX):])
    except ValueError as error:
        raise ConfigError(f"{strategy} is not a valid static strategy") from error
    if k < 1:
        raise ConfigError(f"{strategy} must move at least once between localizations")
    return k


def validate_strategy(strategy: str) -> str:
    """Checks a strategy key and returns it."""
    if strategy in (STRATEGY_POMCP, STRATEGY_CC_POMCP) or static_k(strategy) is not None:
        return strategy
    raise ConfigError(
        f"{strategy} is not a valid strategy; use static-<k>, pomcp or ccpomcp"
    )


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved experiment configuration."""

    env: str = field(default=ENV_TRAINING)
    strategy: str = field(default=DEFAULT_STRATEGY)
    rewards: RewardConfig = field(default=CC_POMCP_REWARDS)
    search: SearchParams = field(default=CC_POMCP_SEARCH.base)
    constraint: CcSearchParams = field(default=CC_POMCP_SEARCH)
    belief: BeliefParams = field(default_factory=BeliefParams)
    noise: MotionNoise = field(default=DEFAULT_NOISE)
    seed: int = field(default=0)
    n_runs: int = field(default=DEFAULT_RUNS)
    workers: int = field(default=1)
    strip_hazards: bool = field(default=False)
    guard_surfacing: bool = field(default=True)
    max_steps_factor: int = field(default=DEFAULT_MAX_STEPS_FACTOR)
    base_dir: str = field(default=".")

    def __post_init__(self):
        validate_strategy(self.strategy)
        if self.n_runs < 1:
            raise ConfigError("n_runs must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.max_steps_factor < 1:
            raise ConfigError("max_steps_factor must be at least 1")
        if self.env not in builtin_names() and not os.path.isfile(self.map_path()):
            raise ConfigError(f"Map file {self.map_path()} does not exist")

    def map_path(self) -> str:
        """Path of a map file environment, resolved against the config directory."""
        return os.path.join(self.base_dir, self.env)

    def load_map(self) -> GridMap:
        """Returns the configured map, with hazards stripped for the ablation."""
        if self.env in builtin_names():
            grid_map = builtin_env(self.env)
        else:
            grid_map = load_map(self.map_path())
        return grid_map.without_hazards() if self.strip_hazards else grid_map

    def make_agent(self) -> Agent:
        """Returns the high-level planner for the configured strategy."""
        k = static_k(self.strategy)
        if k is not None:
            return StaticAgent(k)
        if self.strategy == STRATEGY_POMCP:
            return PomcpAgent(self.search, self.rewards, self.noise, self.guard_surfacing)
        return CcPomcpAgent(self.constraint, self.rewards, self.noise, self.guard_surfacing)


def _section(data: dict, name: str, defaults):
    """Overlay a mapping onto a frozen dataclass of defaults."""

    section = data.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"Section {name} must be a mapping")
    if name == "search":
        section = {SEARCH_KEY_ALIASES.get(key, key): value for key, value in section.items()}

    known = {f.name for f in fields(defaults)} - {"base"}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"Unknown keys in {name}: {sorted(unknown)}")

    try:
        return replace(defaults, **section)
    except (TypeError, ValueError) as error:
        if isinstance(error, ConfigError):
            raise
        raise ConfigError(f"Invalid {name} section: {error}") from error


def config_from_dict(data: dict | None, base_dir: str = ".") -> RunConfig:
    """Resolve a configuration mapping against the strategy defaults."""

    data = data or {}
    if not isinstance(data, dict):
        raise ConfigError("A configuration must be a mapping")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")

    strategy = validate_strategy(str(data.get("strategy", DEFAULT_STRATEGY)))
    is_pomcp = strategy == STRATEGY_POMCP

    rewards = _section(data, "rewards", POMCP_REWARDS if is_pomcp else CC_POMCP_REWARDS)
    search = _section(data, "search", POMCP_SEARCH if is_pomcp else CC_POMCP_SEARCH.base)

    constraint_data = dict(data.get("constraint") or {})
    if "budget_mode" in constraint_data:
        try:
            constraint_data["budget_mode"] = BudgetMode(constraint_data["budget_mode"])
        except ValueError as error:
            raise ConfigError(f"Unknown budget_mode {constraint_data['budget_mode']}") from error
    constraint = _section(
        {"constraint": constraint_data}, "constraint", replace(CC_POMCP_SEARCH, base=search)
    )

    belief = _section(data, "belief", BeliefParams(n_particles=search.n_p))
    noise = _section(data, "noise", DEFAULT_NOISE)

    try:
        return RunConfig(
            env=str(data.get("env", ENV_TRAINING)),
            strategy=strategy,
            rewards=rewards,
            search=search,
            constraint=constraint,
            belief=belief,
            noise=noise,
            seed=int(data.get("seed", 0)),
            n_runs=int(data.get("n_runs", DEFAULT_RUNS)),
            workers=int(data.get("workers", 1)),
            strip_hazards=bool(data.get("strip_hazards", False)),
            guard_surfacing=bool(data.get("guard_surfacing", True)),
            max_steps_factor=int(data.get("max_steps_factor", DEFAULT_MAX_STEPS_FACTOR)),
            base_dir=base_dir,
        )
    except (TypeError, ValueError) as error:
        if isinstance(error, ConfigError):
            raise
        raise ConfigError(f"Invalid configuration value: {error}") from error


def load_config(path: str) -> RunConfig:
    """Read a YAML run configuration file."""
    with open(path, encoding="utf-8") as config_file:
        try:
            data = yaml.safe_load(config_file)
        except yaml.YAMLError as error:
            raise ConfigError(f"Malformed YAML in {path}: {error}") from error
    return config_from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))
