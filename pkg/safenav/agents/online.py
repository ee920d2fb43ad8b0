"""Support for the online planning agents."""

import gymnasium
import numpy as np

from safenav.solvers import (
    BudgetMode,
    CcSearchParams,
    SearchParams,
    admissible_cost_update,
    plan,
    plan_cc,
)
from safenav.world import DEFAULT_NOISE, Action, GridMap, MotionNoise, RewardConfig
from .agent import LOST_BELIEF_MARGIN, Agent, PlannerState, may_surface


def _dead_belief_fallback(ps: PlannerState, grid_map: GridMap) -> Action | None:
    if ps.belief.has_active():
        return None
    if may_surface(ps, grid_map, LOST_BELIEF_MARGIN):
        gymnasium.logger.warn(
            f"Belief holds no active particle at step {ps.step_index}; "
            "localizing to reseed it, as no particle lies near a shipping lane."
        )
        return Action.LOCALIZE
    gymnasium.logger.warn(
        f"Belief holds no active particle at step {ps.step_index}; "
        "moving instead of localizing, as particles lie near a shipping lane."
    )
    return Action.MOVE


def _guard_surfacing(
    action: Action, ps: PlannerState, grid_map: GridMap, enabled: bool
) -> Action:
    if enabled and action is Action.LOCALIZE and not may_surface(ps, grid_map):
        return Action.MOVE
    return action


class PomcpAgent(Agent):
    """An informed, cost-unaware agent planning with POMCP."""

    key = "pomcp"

    def __init__(
        self,
        params: SearchParams,
        rewards: RewardConfig,
        noise: MotionNoise = DEFAULT_NOISE,
        guard_surfacing: bool = True,
    ):
        self.params = params
        self.rewards = rewards
        self.noise = noise
        self.guard_surfacing = guard_surfacing

    def compute_action(
        self, ps: PlannerState, grid_map: GridMap, rng: np.random.Generator
    ) -> Action:
        """Plan on the current belief with a fresh search tree.

        With the guard on, a planned localization becomes a move while any
        active particle sits on a surface hazard.
        """
        fallback = _dead_belief_fallback(ps, grid_map)
        if fallback is not None:
            return fallback
        action = plan(ps.belief, grid_map, self.params, self.rewards, rng, self.noise)
        return _guard_surfacing(action, ps, grid_map, self.guard_surfacing)


class CcPomcpAgent(Agent):
    """An informed, cost-aware agent planning with CC-POMCP."""

    key = "ccpomcp"

    def __init__(
        self,
        params: CcSearchParams,
        rewards: RewardConfig,
        noise: MotionNoise = DEFAULT_NOISE,
        guard_surfacing: bool = True,
    ):
        self.params = params
        self.rewards = rewards
        self.noise = noise
        self.guard_surfacing = guard_surfacing

    def start_episode(self, ps: PlannerState):
        """Reset the dual variable and the cost budget."""
        ps.lam = 0.0
        ps.c_hat_t = self.params.c_hat

    def compute_action(
        self, ps: PlannerState, grid_map: GridMap, rng: np.random.Generator
    ) -> Action:
        """Plan on the current belief; the dual variable is warm-started unless reset."""
        fallback = _dead_belief_fallback(ps, grid_map)
        if fallback is not None:
            return fallback

        action, ps.lam = plan_cc(
            ps.belief,
            grid_map,
            self.params,
            self.rewards,
            ps.c_hat_t,
            rng,
            lam=0.0 if self.params.reset_lambda else ps.lam,
            noise=self.noise,
        )
        return _guard_surfacing(action, ps, grid_map, self.guard_surfacing)

    def after_step(self, ps: PlannerState, executed_cost: float):
        """Shrink or roll forward the admissible cost, never above the initial budget."""
        if self.params.budget_mode is BudgetMode.RECURSIVE:
            ps.c_hat_t = admissible_cost_update(
                ps.c_hat_t, executed_cost, self.params.base.gamma, ceiling=self.params.c_hat
            )
