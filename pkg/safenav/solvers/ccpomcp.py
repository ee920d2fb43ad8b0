"""Support for the cost-constrained POMCP planner.

In-tree selection ranks actions by ``Q_r - lambda * Q_c``. After every
simulation the dual variable takes a projected ascent step towards the
admissible cost, and the final root choice mixes the greedy action with the
cheapest one whenever the greedy action would break the cost budget.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from safenav.belief import ParticleBelief
from safenav.world import (
    DEFAULT_NOISE,
    Action,
    ConfigError,
    GenerativeModel,
    GridMap,
    MotionNoise,
    RewardConfig,
)

from .pomcp import PomcpSolver, SearchParams
from .tree import ActionEdge, TreeNode

DEFAULT_ALPHA_N = 0.001
DEFAULT_C_HAT = 0.10


class BudgetMode(Enum):
    """How the admissible cost evolves between executed actions."""

    RECURSIVE = "recursive"
    STATIC = "static"


@dataclass(frozen=True)
class CcSearchParams:
    """Search parameters plus the cost constraint and its dual ascent."""

    base: SearchParams = field(default_factory=lambda: SearchParams(gamma=0.9, kappa=200.0))
    alpha_n: float = field(default=DEFAULT_ALPHA_N)
    c_hat: float = field(default=DEFAULT_C_HAT)
    lambda_max: float | None = field(default=None)
    reset_lambda: bool = field(default=False)
    budget_mode: BudgetMode = field(default=BudgetMode.RECURSIVE)

    def __post_init__(self):
        if self.alpha_n < 0:
            raise ConfigError("alpha_n must not be negative")
        if not 0 < self.c_hat <= 1:
            raise ConfigError("c_hat must lie in (0, 1]")
        if self.lambda_max is not None and self.lambda_max <= 0:
            raise ConfigError("lambda_max must be positive")

    def dual_cap(self, reward_cfg: RewardConfig) -> float:
        """Upper bound of the dual variable."""
        if self.lambda_max is not None:
            return self.lambda_max
        return (reward_cfg.r_goal - reward_cfg.r_fail) / (
            self.c_hat * (1.0 - self.base.gamma)
        )


CC_POMCP_SEARCH = CcSearchParams()


def dual_update(
    lam: float, q_cost: float, c_hat_t: float, alpha_n: float, lambda_max: float
) -> float:
    """Projected dual ascent step on the cost constraint.

    The multiplier stays put without a step size or without a finite budget.
    """

    if alpha_n == 0.0 or not math.isfinite(c_hat_t):
        return lam
    return min(max(lam + alpha_n * (q_cost - c_hat_t), 0.0), lambda_max)


def admissible_cost_update(
    c_hat_t: float, executed_cost: float, gamma: float, ceiling: float = math.inf
) -> float:
    """Remaining discounted cost budget after executing one step, at most ``ceiling``."""
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    return min(max(0.0, (c_hat_t - executed_cost) / gamma), ceiling)


class CcPomcpSolver(PomcpSolver):
    """POMCP with a Lagrangian cost penalty and a cost-feasible final choice."""

    def __init__(
        self,
        model: GenerativeModel,
        params: CcSearchParams,
        rng: np.random.Generator,
        c_hat_t: float,
        lam: float = 0.0,
    ):
        super().__init__(model, params.base, rng)
        self.cc_params = params
        self.c_hat_t = c_hat_t
        self.lambda_max = params.dual_cap(model.rewards)
        self.lam = min(max(lam, 0.0), self.lambda_max)

    def scalarize(self, edge: ActionEdge) -> float:
        return edge.value - self.lam * edge.cost

    def after_simulation(self, root: TreeNode):
        greedy = self.greedy_action(root)
        self.lam = dual_update(
            self.lam,
            root.edges[greedy].cost,
            self.c_hat_t,
            self.cc_params.alpha_n,
            self.lambda_max,
        )

    def choose(self, root: TreeNode) -> Action:
        """Greedy action if it meets the budget, else a mixture with the cheapest."""

        visited = root.visited_actions()
        if not visited:
            return Action.MOVE

        best = self.greedy_action(root)
        best_cost = root.edges[best].cost
        if best_cost <= self.c_hat_t:
            return best

        cheapest = visited[0]
        for action in visited[1:]:
            if root.edges[action].cost < root.edges[cheapest].cost:
                cheapest = action
        cheapest_cost = root.edges[cheapest].cost
        if cheapest is best or cheapest_cost > self.c_hat_t:
            return cheapest

        weight = (self.c_hat_t - cheapest_cost) / (best_cost - cheapest_cost)
        return best if self.rng.random() < weight else cheapest


def plan_cc(
    belief: ParticleBelief,
    grid_map: GridMap,
    params: CcSearchParams,
    reward_cfg: RewardConfig,
    c_hat_t: float,
    rng: np.random.Generator,
    lam: float = 0.0,
    noise: MotionNoise = DEFAULT_NOISE,
    root: TreeNode | None = None,
    n_sims: int | None = None,
) -> tuple[Action, float]:
    """Plan one action with CC-POMCP; returns the action and the updated dual variable."""

    if c_hat_t < 0:
        raise ValueError(f"Admissible cost must not be negative, got {c_hat_t}")

    solver = CcPomcpSolver(
        GenerativeModel(grid_map, reward_cfg, noise), params, rng, c_hat_t, lam
    )
    action = solver.plan(belief, root, n_sims)
    return action, solver.lam
