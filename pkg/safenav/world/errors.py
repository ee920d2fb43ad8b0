"""Define errors raised by the navigation world and its planners."""


class MapParseError(ValueError):
    """Base class for malformed map text or invalid map contents."""


class MissingGrid(MapParseError):
    """The map text contains no grid rows."""


class NonRectangularGrid(MapParseError):
    """Grid rows have different lengths."""


class UnknownCellCharacter(MapParseError):
    """A grid row contains a character outside the cell table."""


class MissingStart(MapParseError):
    """The grid has no start cell, or more than one."""


class MissingGoal(MapParseError):
    """The grid has no goal cell, or more than one."""


class WaypointOnObstacle(MapParseError):
    """A waypoint, the start or the goal lies on an obstacle."""


class NonAdjacentWaypoints(MapParseError):
    """Two consecutive waypoints are not one axis-aligned cell apart."""


class AmbiguousPath(MapParseError):
    """The waypoint chain branches, so its order can not be recovered."""


class InvalidRegion(MapParseError):
    """A region header is malformed or lies outside the grid."""


class UnknownEnvironment(ValueError):
    """The requested built-in environment does not exist."""


class TerminalStateError(RuntimeError):
    """A transition was requested from a terminal state."""


class NoActiveParticles(ValueError):
    """A planner was asked to plan on a belief without active particles."""


class PathExhausted(RuntimeError):
    """The low-level planner has no waypoint left to follow."""


class Unreachable(RuntimeError):
    """No obstacle-free path connects two cells."""


class ConfigError(ValueError):
    """The run configuration is malformed or inconsistent."""
