"""Define grid cells, regions and the navigation map."""

from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    InvalidRegion,
    MissingGoal,
    MissingStart,
    NonAdjacentWaypoints,
    NonRectangularGrid,
    WaypointOnObstacle,
)

Coord = tuple[int, int]
"""A grid coordinate (col, row), origin top-left, rows growing downward."""

OTHER_REGION = "elsewhere"


class CellKind(Enum):
    """Kinds of grid cells."""

    FREE = "free"
    OBSTACLE = "obstacle"
    SURFACE_HAZARD = "surface_hazard"

    @property
    def is_traversable(self) -> bool:
        """Whether an agent may occupy the cell underwater."""
        return self is not CellKind.OBSTACLE


@dataclass(frozen=True)
class Region:
    """A named inclusive rectangle used to bucket metrics."""

    name: str
    x0: int
    y0: int
    x1: int
    y1: int

    def contains(self, pos: Coord) -> bool:
        """Checks whether a coordinate lies inside the rectangle."""
        return self.x0 <= pos[0] <= self.x1 and self.y0 <= pos[1] <= self.y1


def is_adjacent(a: Coord, b: Coord) -> bool:
    """Checks whether two coordinates are one axis-aligned cell apart."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


@dataclass(frozen=True)
class GridMap:
    """An immutable navigation map with a pre-defined waypoint path."""

    width: int
    height: int
    cells: tuple[CellKind, ...]
    start: Coord
    goal: Coord
    path: tuple[Coord, ...]
    regions: tuple[Region, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise NonRectangularGrid("Map must have at least one row and column")
        if len(self.cells) != self.width * self.height:
            raise NonRectangularGrid(
                f"Expected {self.width * self.height} cells, got {len(self.cells)}"
            )
        if not self.in_bounds(self.start):
            raise MissingStart(f"Start {self.start} lies outside the map")
        if not self.in_bounds(self.goal):
            raise MissingGoal(f"Goal {self.goal} lies outside the map")
        if not self.path or self.path[0] != self.start:
            raise MissingStart("Path must begin at the start cell")
        if self.path[-1] != self.goal:
            raise MissingGoal("Goal must be the final waypoint of the path")

        for waypoint in self.path:
            if not self.in_bounds(waypoint) or not self.cell(waypoint).is_traversable:
                raise WaypointOnObstacle(f"Waypoint {waypoint} is not traversable")

        for previous, current in zip(self.path, self.path[1:]):
            if not is_adjacent(previous, current):
                raise NonAdjacentWaypoints(
                    f"Waypoints {previous} and {current} are not adjacent"
                )

        for region in self.regions:
            if not (
                0 <= region.x0 <= region.x1 < self.width
                and 0 <= region.y0 <= region.y1 < self.height
            ):
                raise InvalidRegion(f"Region {region.name} lies outside the map")

    def in_bounds(self, pos: Coord) -> bool:
        """Checks whether a coordinate lies on the map."""
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def cell(self, pos: Coord) -> CellKind:
        """Returns the cell kind at an in-bounds coordinate."""
        return self.cells[pos[1] * self.width + pos[0]]

    def is_traversable(self, pos: Coord) -> bool:
        """Checks whether a coordinate is on the map and not an obstacle."""
        return self.in_bounds(pos) and self.cell(pos).is_traversable

    def is_hazard(self, pos: Coord) -> bool:
        """Checks whether a coordinate is a surface hazard on the map."""
        return self.in_bounds(pos) and self.cell(pos) is CellKind.SURFACE_HAZARD

    def near_hazard(self, pos: Coord, margin: int = 0) -> bool:
        """Checks for a surface hazard within Chebyshev distance ``margin``."""
        return any(
            self.is_hazard((pos[0] + dx, pos[1] + dy))
            for dx in range(-margin, margin + 1)
            for dy in range(-margin, margin + 1)
        )

    def region_of(self, pos: Coord) -> str:
        """Returns the name of the first region containing a coordinate."""
        for region in self.regions:
            if region.contains(pos):
                return region.name
        return OTHER_REGION

    def region_names(self) -> list[str]:
        """Returns region names in declaration order."""
        return [region.name for region in self.regions]

    def without_hazards(self) -> "GridMap":
        """Returns a copy with every surface hazard turned into free water."""
        cells = tuple(
            CellKind.FREE if kind is CellKind.SURFACE_HAZARD else kind
            for kind in self.cells
        )
        return GridMap(
            self.width,
            self.height,
            cells,
            self.start,
            self.goal,
            self.path,
            self.regions,
        )
