"""Define the built-in navigation environments.

The layouts are stylized: they keep the features the evaluation depends on
(lanes crossing the path, obstacles hugging the path after turns, a long
blind stretch across two lanes) rather than copying any chart.
"""

from functools import cache

from .cells import CellKind, Coord, GridMap, Region
from .errors import UnknownEnvironment

ENV_TRAINING = "ENV-TRAINING"
ENV_TUNNEL = "ENV-TUNNEL"
ENV_STT = "ENV-STT"

Rect = tuple[int, int, int, int]


def _polyline(corners: list[Coord]) -> tuple[Coord, ...]:
    """Expands axis-aligned corner points into a cell-by-cell path."""

    path = [corners[0]]
    for (x0, y0), (x1, y1) in zip(corners, corners[1:]):
        if x0 != x1 and y0 != y1:
            raise ValueError(f"Segment {(x0, y0)} -> {(x1, y1)} is not axis-aligned")
        dx = (x1 > x0) - (x1 < x0)
        dy = (y1 > y0) - (y1 < y0)
        x, y = x0, y0
        while (x, y) != (x1, y1):
            x, y = x + dx, y + dy
            path.append((x, y))
    return tuple(path)


def _build(
    width: int,
    height: int,
    corners: list[Coord],
    hazards: list[Rect],
    obstacles: list[Rect],
    regions: list[Region],
) -> GridMap:
    """Paints hazards, then obstacles over them, then returns the map."""

    grid = [[CellKind.FREE] * width for _ in range(height)]
    for kind, rects in ((CellKind.SURFACE_HAZARD, hazards), (CellKind.OBSTACLE, obstacles)):
        for x0, y0, x1, y1 in rects:
            for y in range(y0, y1 + 1):
                for x in range(x0, x1 + 1):
                    grid[y][x] = kind

    path = _polyline(corners)
    return GridMap(
        width=width,
        height=height,
        cells=tuple(kind for row in grid for kind in row),
        start=path[0],
        goal=path[-1],
        path=path,
        regions=tuple(regions),
    )


def _training() -> GridMap:
    # Two horizontal lanes, each crossed by a vertical leg of the path, and two
    # large obstacles inside the path's bends.
    return _build(
        width=30,
        height=30,
        corners=[(2, 1), (2, 8), (26, 8), (26, 20), (4, 20), (4, 28), (27, 28)],
        hazards=[(0, 11, 29, 14), (0, 23, 29, 26)],
        obstacles=[(4, 10, 24, 18), (6, 22, 27, 26)],
        regions=[
            Region("before-lane-1", 0, 0, 29, 10),
            Region("lane-1", 0, 11, 29, 14),
            Region("between-lanes", 0, 15, 29, 22),
            Region("lane-2", 0, 23, 29, 26),
            Region("after-lane-2", 0, 27, 29, 29),
        ],
    )


def _tunnel() -> GridMap:
    # A U-shaped tunnel; the first lane covers 13 consecutive waypoints and is
    # separated from the second lane by a two-cell gap.
    return _build(
        width=30,
        height=14,
        corners=[(1, 3), (8, 3), (8, 10), (20, 10), (20, 3), (28, 3)],
        hazards=[(6, 5, 15, 12), (18, 5, 24, 12)],
        obstacles=[(10, 1, 18, 8), (3, 5, 6, 13), (6, 12, 22, 13), (22, 5, 27, 13)],
        regions=[
            Region("before-lane-1", 0, 0, 9, 4),
            Region("lane-1", 6, 5, 15, 12),
            Region("between-lanes", 16, 5, 17, 12),
            Region("lane-2", 18, 5, 24, 12),
            Region("after-lane-2", 19, 0, 29, 4),
        ],
    )


def _stt() -> GridMap:
    # A coastline run: land to the south and north, an airport block beside
    # the first leg and a narrow bay holding the goal.
    return _build(
        width=32,
        height=20,
        corners=[(1, 17), (12, 17), (12, 9), (28, 9), (28, 3), (22, 3)],
        hazards=[],
        obstacles=[
            (0, 19, 31, 19),
            (3, 10, 10, 15),
            (0, 0, 20, 7),
            (14, 11, 26, 18),
            (14, 5, 26, 7),
            (21, 0, 31, 1),
        ],
        regions=[
            Region("marine-center", 0, 14, 11, 18),
            Region("airport-west", 11, 8, 13, 18),
            Region("airport-south", 14, 8, 27, 10),
            Region("east-coast", 27, 2, 31, 10),
            Region("lindbergh-bay", 14, 2, 26, 4),
        ],
    )


BUILDERS = {
    ENV_TRAINING: _training,
    ENV_TUNNEL: _tunnel,
    ENV_STT: _stt,
}


def builtin_names() -> list[str]:
    """Returns the names of all built-in environments."""
    return list(BUILDERS)


@cache
def builtin_env(name: str) -> GridMap:
    """Returns a built-in environment by name."""
    builder = BUILDERS.get(name)
    if builder is None:
        raise UnknownEnvironment(
            f"{name} is not a built-in environment; choose from {builtin_names()}"
        )
    return builder()


def longest_hazard_run(grid_map: GridMap) -> int:
    """Returns the longest run of consecutive waypoints on surface hazards."""
    longest = current = 0
    for waypoint in grid_map.path:
        if grid_map.cell(waypoint) is CellKind.SURFACE_HAZARD:
            current += 1
            longest = max(longest, current)
        else:
            current = 0
    return longest
