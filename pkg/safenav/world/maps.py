"""Support for reading, writing and rendering map files.

A map file is line-oriented ASCII. Optional header lines declare metric
regions as ``region <name> <x0> <y0> <x1> <y1>`` (inclusive rectangle);
lines starting with ``;`` are comments. Every remaining line is a grid row
with one character per cell:

    .  free water              #  obstacle
    ~  surface hazard          S  start (free)
    G  goal (free)             *  waypoint on free water
    +  waypoint on a surface hazard

The waypoint order is recovered by walking 4-adjacency from ``S`` to ``G``.
"""

from .cells import CellKind, Coord, GridMap, Region
from .errors import (
    AmbiguousPath,
    InvalidRegion,
    MissingGoal,
    MissingGrid,
    MissingStart,
    NonAdjacentWaypoints,
    NonRectangularGrid,
    UnknownCellCharacter,
)

FREE_CHAR = "."
OBSTACLE_CHAR = "#"
HAZARD_CHAR = "~"
START_CHAR = "S"
GOAL_CHAR = "G"
WAYPOINT_CHAR = "*"
HAZARD_WAYPOINT_CHAR = "+"
AGENT_CHAR = "@"
COMMENT_PREFIX = ";"
REGION_KEYWORD = "region"

CELL_CHARS: dict[str, CellKind] = {
    FREE_CHAR: CellKind.FREE,
    OBSTACLE_CHAR: CellKind.OBSTACLE,
    HAZARD_CHAR: CellKind.SURFACE_HAZARD,
    START_CHAR: CellKind.FREE,
    GOAL_CHAR: CellKind.FREE,
    WAYPOINT_CHAR: CellKind.FREE,
    HAZARD_WAYPOINT_CHAR: CellKind.SURFACE_HAZARD,
}

KIND_CHARS: dict[CellKind, str] = {
    CellKind.FREE: FREE_CHAR,
    CellKind.OBSTACLE: OBSTACLE_CHAR,
    CellKind.SURFACE_HAZARD: HAZARD_CHAR,
}


def neighbours(pos: Coord) -> list[Coord]:
    """Returns the 4-neighbours of a coordinate in order Up, Down, Left, Right."""
    x, y = pos
    return [(x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)]


def _parse_region(line: str) -> Region:
    parts = line.split()
    if len(parts) != 6:
        raise InvalidRegion(f"Malformed region header: {line!r}")
    try:
        x0, y0, x1, y1 = (int(value) for value in parts[2:])
    except ValueError as error:
        raise InvalidRegion(f"Non-integer region bounds: {line!r}") from error
    return Region(parts[1], x0, y0, x1, y1)


def _walk_path(start: Coord, goal: Coord, markers: set[Coord]) -> tuple[Coord, ...]:
    """Orders waypoint markers by walking 4-adjacency from start to goal."""

    path = [start]
    visited = {start}
    current = start

    while current != goal:
        candidates = [
            pos for pos in neighbours(current) if pos in markers and pos not in visited
        ]
        if not candidates:
            raise NonAdjacentWaypoints(f"Waypoint chain breaks off after {current}")
        if len(candidates) > 1:
            raise AmbiguousPath(f"Waypoint chain branches at {current}: {candidates}")
        current = candidates[0]
        path.append(current)
        visited.add(current)

    stray = markers - visited
    if stray:
        raise NonAdjacentWaypoints(
            f"Waypoints not connected to the path: {sorted(stray)}"
        )

    return tuple(path)


def parse_map(text: str) -> GridMap:
    """Decode map text into a validated GridMap."""

    regions: list[Region] = []
    rows: list[str] = []

    for raw_line in text.splitlines():
        line = raw_line.rstrip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        if line.split()[0] == REGION_KEYWORD:
            regions.append(_parse_region(line))
            continue
        rows.append(line)

    if not rows:
        raise MissingGrid("Map text contains no grid rows")

    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise NonRectangularGrid("All grid rows must have the same length")

    cells: list[CellKind] = []
    starts: list[Coord] = []
    goals: list[Coord] = []
    markers: set[Coord] = set()

    for y, row in enumerate(rows):
        for x, char in enumerate(row):
            kind = CELL_CHARS.get(char)
            if kind is None:
                raise UnknownCellCharacter(f"Unknown cell {char!r} at {(x, y)}")
            cells.append(kind)
            if char == START_CHAR:
                starts.append((x, y))
            elif char == GOAL_CHAR:
                goals.append((x, y))
                markers.add((x, y))
            elif char in (WAYPOINT_CHAR, HAZARD_WAYPOINT_CHAR):
                markers.add((x, y))

    if len(starts) != 1:
        raise MissingStart(f"Expected exactly one start cell, found {len(starts)}")
    if len(goals) != 1:
        raise MissingGoal(f"Expected exactly one goal cell, found {len(goals)}")

    path = _walk_path(starts[0], goals[0], markers)

    return GridMap(
        width=width,
        height=len(rows),
        cells=tuple(cells),
        start=starts[0],
        goal=goals[0],
        path=path,
        regions=tuple(regions),
    )


def _grid_chars(grid_map: GridMap) -> list[list[str]]:
    return [
        [KIND_CHARS[grid_map.cell((x, y))] for x in range(grid_map.width)]
        for y in range(grid_map.height)
    ]


def serialize_map(grid_map: GridMap) -> str:
    """Encode a GridMap as map text."""

    for endpoint in (grid_map.start, grid_map.goal):
        if grid_map.cell(endpoint) is not CellKind.FREE:
            raise ValueError(f"Map files require a free start and goal, not {endpoint}")

    chars = _grid_chars(grid_map)
    for x, y in grid_map.path:
        on_hazard = grid_map.cell((x, y)) is CellKind.SURFACE_HAZARD
        chars[y][x] = HAZARD_WAYPOINT_CHAR if on_hazard else WAYPOINT_CHAR
    chars[grid_map.start[1]][grid_map.start[0]] = START_CHAR
    chars[grid_map.goal[1]][grid_map.goal[0]] = GOAL_CHAR

    header = [
        f"{REGION_KEYWORD} {r.name} {r.x0} {r.y0} {r.x1} {r.y1}"
        for r in grid_map.regions
    ]
    return "\n".join(header + ["".join(row) for row in chars]) + "\n"


def render_map(
    grid_map: GridMap,
    agent: Coord | None = None,
    path: list[Coord] | tuple[Coord, ...] | None = None,
) -> str:
    """Render a map as text, optionally marking a path and the agent."""

    chars = _grid_chars(grid_map)
    for x, y in grid_map.path if path is None else path:
        if grid_map.in_bounds((x, y)):
            on_hazard = grid_map.cell((x, y)) is CellKind.SURFACE_HAZARD
            chars[y][x] = HAZARD_WAYPOINT_CHAR if on_hazard else WAYPOINT_CHAR
    chars[grid_map.start[1]][grid_map.start[0]] = START_CHAR
    chars[grid_map.goal[1]][grid_map.goal[0]] = GOAL_CHAR
    if agent is not None and grid_map.in_bounds(agent):
        chars[agent[1]][agent[0]] = AGENT_CHAR
    return "\n".join("".join(row) for row in chars)


def load_map(path: str) -> GridMap:
    """Read and parse a map file."""
    with open(path, encoding="utf-8") as map_file:
        return parse_map(map_file.read())
