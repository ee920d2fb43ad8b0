"""Define the history tree shared by the Monte-Carlo planners."""

from dataclasses import dataclass, field
from typing import NamedTuple

from safenav.world import ACTIONS, Action, Observation, RewardConfig


class Returns(NamedTuple):
    """Discounted reward and cost returns of a simulated trajectory."""

    reward: float
    cost: float


ZERO_RETURNS = Returns(0.0, 0.0)


@dataclass
class ActionEdge:
    """Statistics of one action taken from a history node."""

    visit_count: int = 0
    value: float = 0.0
    cost: float = 0.0
    children: dict[Observation, "TreeNode"] = field(default_factory=dict)

    def update(self, returns: Returns):
        """Back up a simulated return as an incremental mean."""
        self.visit_count += 1
        self.value += (returns.reward - self.value) / self.visit_count
        self.cost += (returns.cost - self.cost) / self.visit_count


@dataclass
class TreeNode:
    """A history node: a visit count and one edge per action."""

    visit_count: int = 0
    edges: dict[Action, ActionEdge] = field(
        default_factory=lambda: {action: ActionEdge() for action in ACTIONS}
    )

    def visited_actions(self) -> list[Action]:
        """Returns actions simulated at least once, in tie-breaking order."""
        return [action for action in ACTIONS if self.edges[action].visit_count > 0]

    def child(self, action: Action, observation: Observation) -> "TreeNode | None":
        """Returns the child reached by an action and observation, if expanded."""
        return self.edges[action].children.get(observation)


def value_bounds(reward_cfg: RewardConfig, depth: int) -> tuple[float, float]:
    """Loose analytic bounds on backed-up reward values for a search depth."""
    worst_step = min(reward_cfg.r_local, reward_cfg.r_move)
    v_min = (reward_cfg.r_fail + worst_step * depth) * depth
    v_max = reward_cfg.r_goal
    return v_min, v_max
