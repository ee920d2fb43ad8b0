"""Support for StaticAgent."""

import numpy as np

from safenav.world import Action, GridMap
from .agent import Agent, PlannerState


class StaticAgent(Agent):
    """An agent that moves k times and then localizes, regardless of the belief."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"A static policy needs at least one move, got {k}")
        self.k = k
        self.key = f"static-{k}"

    def compute_action(
        self, ps: PlannerState, grid_map: GridMap, rng: np.random.Generator
    ) -> Action:
        """Localize on every (k + 1)-th executed action."""
        if (ps.step_index + 1) % (self.k + 1) == 0:
            return Action.LOCALIZE
        return Action.MOVE


def localize_count(k: int, steps: int) -> int:
    """Number of localize actions a static policy emits over a number of steps."""
    return steps // (k + 1)
