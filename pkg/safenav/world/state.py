"""Define the agent state of the navigation world."""

from dataclasses import dataclass, field, replace
from enum import Enum

from .cells import Coord


class Terminal(Enum):
    """Terminal classification of an agent state."""

    ACTIVE = "Active"
    REACHED_GOAL = "ReachedGoal"
    FAILED_COLLISION = "FailedCollision"
    FAILED_OFF_MAP = "FailedOffMap"
    FAILED_SURFACED = "FailedSurfaced"

    @property
    def is_failure(self) -> bool:
        """Whether the classification is a failure state."""
        return self in FAILURES

    @property
    def is_terminal(self) -> bool:
        """Whether no further transition may change the state."""
        return self is not Terminal.ACTIVE


FAILURES = frozenset(
    {Terminal.FAILED_COLLISION, Terminal.FAILED_OFF_MAP, Terminal.FAILED_SURFACED}
)


@dataclass(frozen=True)
class AgentState:
    """Position of the agent, its next target waypoint and its terminal class."""

    position: Coord
    waypoint_index: int = field(default=0)
    terminal: Terminal = field(default=Terminal.ACTIVE)

    @property
    def is_active(self) -> bool:
        """Whether the state may still transition."""
        return self.terminal is Terminal.ACTIVE

    def with_terminal(self, terminal: Terminal) -> "AgentState":
        """Returns a copy with a new terminal classification."""
        return replace(self, terminal=terminal)
