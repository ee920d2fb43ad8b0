"""Support for running a single navigation episode."""

from dataclasses import dataclass, field
from enum import Enum

import gymnasium
import numpy as np

from safenav.agents import (
    CcPomcpAgent,
    PlannerState,
    llp_replan_after_localize,
    llp_resolve_move,
    next_action,
)
from safenav.belief import init_belief, propagate, update_with_gps
from safenav.environment import ExecutedAction, env as nav_env
from safenav.world import (
    Action,
    Coord,
    Gps,
    GridMap,
    Terminal,
    Unreachable,
)

from .config import RunConfig


class Outcome(Enum):
    """How an episode ended."""

    REACHED_GOAL = "ReachedGoal"
    FAILED_COLLISION = "FailedCollision"
    FAILED_OFF_MAP = "FailedOffMap"
    FAILED_SURFACED = "FailedSurfaced"
    TIMEOUT = "Timeout"

    @classmethod
    def from_terminal(cls, terminal: Terminal) -> "Outcome":
        """Outcome of a terminal vehicle state."""
        if terminal is Terminal.ACTIVE:
            raise ValueError("An active state has no outcome")
        return cls(terminal.value)

    @property
    def is_failure(self) -> bool:
        """Whether the vehicle was lost."""
        return self in (
            Outcome.FAILED_COLLISION,
            Outcome.FAILED_OFF_MAP,
            Outcome.FAILED_SURFACED,
        )


@dataclass(frozen=True)
class LocalizeEvent:
    """A GPS localization, recorded at the true vehicle position."""

    step: int
    region: str
    position: Coord


@dataclass(frozen=True)
class RunResult:
    """Everything recorded about one episode."""

    outcome: Outcome
    steps: int
    localize_events: tuple[LocalizeEvent, ...]
    cumulative_collision_trace: tuple[float, ...]
    executed_actions: tuple[Action, ...]
    seed: int
    strategy: str
    total_reward: float = field(default=0.0)
    total_cost: float = field(default=0.0)
    aborted: bool = field(default=False)
    cost_budget_trace: tuple[float, ...] = field(default=())
    lambda_trace: tuple[float, ...] = field(default=())

    @property
    def final_collision(self) -> float:
        """Cumulative collision indicator at the end of the episode."""
        return self.cumulative_collision_trace[-1] if self.cumulative_collision_trace else 0.0

    def localize_counts(self) -> dict[str, int]:
        """Number of localizations per region."""
        counts: dict[str, int] = {}
        for event in self.localize_events:
            counts[event.region] = counts.get(event.region, 0) + 1
        return counts


def episode_generators(
    episode_seed: int,
) -> tuple[int, np.random.Generator, np.random.Generator]:
    """Independent streams for the true world, the belief filter and the planner."""

    world, belief, planner = np.random.SeedSequence(episode_seed).spawn(3)
    return (
        int(world.generate_state(1)[0]),
        np.random.default_rng(belief),
        np.random.default_rng(planner),
    )


def run_episode(
    cfg: RunConfig,
    episode_seed: int,
    grid_map: GridMap | None = None,
    render_mode=None,
) -> RunResult:
    """Run one episode of the configured strategy on the configured map.

    The true vehicle lives inside the environment; the planners only ever
    see the particle belief and GPS fixes.
    """

    grid_map = grid_map if grid_map is not None else cfg.load_map()
    world_seed, belief_rng, planner_rng = episode_generators(episode_seed)

    agent = cfg.make_agent()
    tracks_budget = isinstance(agent, CcPomcpAgent)
    env = nav_env(
        grid_map,
        cfg.rewards,
        cfg.noise,
        max_steps=cfg.max_steps_factor * len(grid_map.path),
        render_mode=render_mode,
    )
    env.reset(seed=world_seed)

    ps = PlannerState(
        remaining_path=list(grid_map.path),
        belief=init_belief(grid_map, cfg.belief.n_particles),
    )
    agent.start_episode(ps)

    actions: list[Action] = []
    events: list[LocalizeEvent] = []
    trace: list[float] = []
    budget_trace: list[float] = []
    lambda_trace: list[float] = []
    collided = 0
    total_reward = 0.0
    total_cost = 0.0
    aborted = False

    while True:
        action = next_action(agent, ps, grid_map, planner_rng)
        command = None
        if action is Action.MOVE:
            command = llp_resolve_move(ps, grid_map)
            if command is None:
                action = Action.LOCALIZE

        executed = (
            ExecutedAction.from_command(command) if command is not None else ExecutedAction.LOCALIZE
        )
        _, reward, terminated, truncated, info = env.step(executed.value)
        total_reward += reward
        total_cost += info["cost"]
        actions.append(action)

        if action is Action.MOVE:
            before = ps.belief.failed_count()
            ps.belief = propagate(
                ps.belief, grid_map, cfg.rewards, belief_rng, cfg.noise, command
            )
            collided += max(0, ps.belief.failed_count() - before)
        else:
            position = info["position"]
            events.append(LocalizeEvent(ps.step_index, grid_map.region_of(position), position))
            observation = info["observation"]
            if isinstance(observation, Gps):
                ps.belief = update_with_gps(
                    ps.belief,
                    observation,
                    grid_map,
                    cfg.belief.reinvig_fraction,
                    cfg.belief.jitter_radius,
                    belief_rng,
                )
                try:
                    ps.remaining_path = llp_replan_after_localize(ps, grid_map)
                except Unreachable as error:
                    gymnasium.logger.warn(f"Aborting episode {episode_seed}: {error}")
                    aborted = True

        trace.append(collided / ps.belief.n_p)
        agent.after_step(ps, info["cost"])
        ps.step_index += 1
        if tracks_budget:
            budget_trace.append(ps.c_hat_t)
            lambda_trace.append(ps.lam)

        if aborted:
            outcome = Outcome.FAILED_COLLISION
            break
        if terminated:
            outcome = Outcome.from_terminal(info["terminal"])
            break
        if truncated:
            gymnasium.logger.warn(
                f"Episode {episode_seed} hit the step limit of {env.max_steps}"
            )
            outcome = Outcome.TIMEOUT
            break

    return RunResult(
        outcome=outcome,
        steps=ps.step_index,
        localize_events=tuple(events),
        cumulative_collision_trace=tuple(trace),
        executed_actions=tuple(actions),
        seed=episode_seed,
        strategy=cfg.strategy,
        total_reward=total_reward,
        total_cost=total_cost,
        aborted=aborted,
        cost_budget_trace=tuple(budget_trace),
        lambda_trace=tuple(lambda_trace),
    )
