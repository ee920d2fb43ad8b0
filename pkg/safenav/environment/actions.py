"""Support for ExecutedAction."""

from enum import Enum

from safenav.world import Action, MotionCommand


class ExecutedAction(Enum):
    """An action space for concrete actions executed by the vehicle."""

    # Actions 0-3: move with one motion command
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    # Action 4: surface, take a GPS fix and submerge in place
    LOCALIZE = 4

    @property
    def type(self) -> str:
        """Returns the action type."""
        return "localize" if self is ExecutedAction.LOCALIZE else "move"

    @property
    def action(self) -> Action:
        """Returns the high-level action this corresponds to."""
        return Action.LOCALIZE if self is ExecutedAction.LOCALIZE else Action.MOVE

    @property
    def command(self) -> MotionCommand | None:
        """Returns the motion command of a move, or None for localize."""
        if self is ExecutedAction.LOCALIZE:
            return None
        return MotionCommand[self.name]

    @classmethod
    def from_command(cls, command: MotionCommand) -> "ExecutedAction":
        """Returns the move action executing a motion command."""
        return cls[command.name]
