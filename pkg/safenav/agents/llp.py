"""Support for the low-level planner: motion commands, path truncation and repair."""

from collections import Counter, deque

from safenav.belief import mean_position
from safenav.world import (
    Coord,
    GridMap,
    MotionCommand,
    PathExhausted,
    Unreachable,
    approach_command,
    command_toward,
    neighbours,
)
from .agent import LOST_BELIEF_MARGIN, PlannerState, may_surface

# The mean may run up to two cells ahead of the head waypoint after a noisy move.
TRUNCATION_LOOKAHEAD = 3


def bfs_shortest_path(grid_map: GridMap, start: Coord, goal: Coord) -> list[Coord]:
    """Shortest 4-connected obstacle-free path, endpoints included.

    Surface hazards are traversable. Neighbours are expanded in order Up,
    Down, Left, Right, which fixes the path among equally short ones.
    """

    for cell in (start, goal):
        if not grid_map.is_traversable(cell):
            raise Unreachable(f"Cell {cell} is an obstacle or off the map")

    parents: dict[Coord, Coord | None] = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current == goal:
            break
        for neighbour in neighbours(current):
            if neighbour not in parents and grid_map.is_traversable(neighbour):
                parents[neighbour] = current
                queue.append(neighbour)

    if goal not in parents:
        raise Unreachable(f"No obstacle-free path from {start} to {goal}")

    path = [goal]
    while path[-1] != start:
        path.append(parents[path[-1]])
    path.reverse()
    return path


def llp_execute_move(ps: PlannerState, grid_map: GridMap) -> MotionCommand:
    """Command from the belief mean toward the head waypoint, truncating reached ones."""

    if not ps.remaining_path:
        raise PathExhausted("No waypoint left to move toward")

    mean = mean_position(ps.belief)
    ahead = ps.remaining_path[:TRUNCATION_LOOKAHEAD]
    if mean in ahead:
        del ps.remaining_path[: ahead.index(mean) + 1]

    if not ps.remaining_path:
        raise PathExhausted(f"Belief mean {mean} reached the end of the path")

    return command_toward(mean, ps.remaining_path[0])


def _anchor(ps: PlannerState, grid_map: GridMap) -> Coord:
    """The belief mean, or the traversable particle closest to it."""

    mean = mean_position(ps.belief)
    if grid_map.is_traversable(mean):
        return mean
    candidates = [
        particle.position
        for particle in ps.belief.particles
        if grid_map.is_traversable(particle.position)
    ]
    if not candidates:
        raise Unreachable(f"Belief mean {mean} lies on an obstacle")
    return min(
        candidates,
        key=lambda pos: ((pos[0] - mean[0]) ** 2 + (pos[1] - mean[1]) ** 2, pos[1], pos[0]),
    )


def llp_replan_after_localize(ps: PlannerState, grid_map: GridMap) -> list[Coord]:
    """Path from the localized belief back onto the remaining path.

    A mean on the remaining path drops everything before it. Otherwise a
    breadth-first bridge leads to the nearest remaining waypoint (ties to
    the earlier one) and the rest of the path follows it.
    """

    mean = _anchor(ps, grid_map)
    if mean == grid_map.goal:
        return []

    path = ps.remaining_path or [grid_map.goal]
    if mean in path:
        return path[path.index(mean):]

    target = min(
        range(len(path)),
        key=lambda i: ((path[i][0] - mean[0]) ** 2 + (path[i][1] - mean[1]) ** 2, i),
    )
    bridge = bfs_shortest_path(grid_map, mean, path[target])
    return bridge[1:] + path[target + 1:]


def llp_fallback_command(ps: PlannerState, grid_map: GridMap) -> MotionCommand:
    """Command toward the goal once the path is used up but the vehicle is not there.

    Steers from the most common active particle position, or along the
    path's final approach when no active particle is left.
    """

    positions = [
        particle.position
        for particle in ps.belief.active_particles()
        if particle.position != grid_map.goal
    ]
    if not positions:
        return approach_command(grid_map)
    origin = Counter(positions).most_common(1)[0][0]
    return command_toward(origin, grid_map.goal)


def llp_resolve_move(ps: PlannerState, grid_map: GridMap) -> MotionCommand | None:
    """Command for an executed move, or None when the vehicle should surface instead.

    Once the path is used up short of the goal, surfacing is chosen only
    while the belief keeps clear of surface hazards.
    """

    try:
        return llp_execute_move(ps, grid_map)
    except PathExhausted:
        if may_surface(ps, grid_map, LOST_BELIEF_MARGIN):
            return None
        return llp_fallback_command(ps, grid_map)
