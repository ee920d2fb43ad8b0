"""Support for high-level planner agents and their per-episode state."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from safenav.belief import ParticleBelief, hazard_fraction
from safenav.world import Action, Coord, GridMap

# A belief that has lost the vehicle is trusted to within one cell.
LOST_BELIEF_MARGIN = 1


@dataclass
class PlannerState:
    """Everything the planners carry from one executed action to the next."""

    remaining_path: list[Coord]
    belief: ParticleBelief
    step_index: int = field(default=0)
    lam: float = field(default=0.0)
    c_hat_t: float = field(default=math.inf)


class Agent(ABC):
    """An abstract high-level planner choosing between move and localize."""

    key: str = "agent"

    @abstractmethod
    def compute_action(
        self, ps: PlannerState, grid_map: GridMap, rng: np.random.Generator
    ) -> Action:
        """Given the planner state, choose the next high-level action."""
        raise NotImplementedError

    def start_episode(self, ps: PlannerState):
        """Prepare the planner state at the start of an episode."""

    def after_step(self, ps: PlannerState, executed_cost: float):
        """Update the planner state after an action was executed."""

    def __str__(self):
        return self.key


def next_action(
    strategy: Agent, ps: PlannerState, grid_map: GridMap, rng: np.random.Generator
) -> Action:
    """Ask a high-level strategy for its next action."""
    return strategy.compute_action(ps, grid_map, rng)


def may_surface(ps: PlannerState, grid_map: GridMap, margin: int = 0) -> bool:
    """Whether no tracked particle lies within ``margin`` cells of a surface hazard."""
    return hazard_fraction(ps.belief, grid_map, margin) == 0.0
