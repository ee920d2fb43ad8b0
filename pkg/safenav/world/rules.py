"""Define failure and goal rules of the navigation world."""

from .cells import CellKind, Coord, GridMap
from .state import Terminal


def classify_move(grid_map: GridMap, pos: Coord) -> Terminal:
    """Classify a position entered by an underwater move."""

    if not grid_map.in_bounds(pos):
        return Terminal.FAILED_OFF_MAP
    if grid_map.cell(pos) is CellKind.OBSTACLE:
        return Terminal.FAILED_COLLISION
    if pos == grid_map.goal:
        return Terminal.REACHED_GOAL
    return Terminal.ACTIVE


def classify_localize(grid_map: GridMap, pos: Coord) -> Terminal:
    """Classify a position where the agent surfaces to localize."""

    if grid_map.in_bounds(pos) and grid_map.cell(pos) is CellKind.SURFACE_HAZARD:
        return Terminal.FAILED_SURFACED
    return classify_move(grid_map, pos)
