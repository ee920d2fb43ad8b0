"""Define high-level actions, motion commands and observations."""

from dataclasses import dataclass
from enum import Enum

from .cells import Coord


class Action(Enum):
    """High-level actions chosen by the planner."""

    MOVE = "move"
    LOCALIZE = "localize"


ACTIONS: tuple[Action, ...] = (Action.MOVE, Action.LOCALIZE)
"""All high-level actions in tie-breaking order."""


class MotionCommand(Enum):
    """Axis-aligned unit motion commands."""

    UP = (0, -1)
    DOWN = (0, 1)
    LEFT = (-1, 0)
    RIGHT = (1, 0)

    @property
    def delta(self) -> Coord:
        """Returns the unit displacement of the command."""
        return self.value


@dataclass(frozen=True)
class Observation:
    """Base class for observations."""


@dataclass(frozen=True)
class NoObservation(Observation):
    """The observation returned by every move action."""


@dataclass(frozen=True)
class Gps(Observation):
    """A surface position fix at grid resolution."""

    position: Coord


NO_OBSERVATION = NoObservation()
