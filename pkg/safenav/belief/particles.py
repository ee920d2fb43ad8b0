"""Support for the unweighted particle belief over agent states."""

from dataclasses import dataclass, field

import gymnasium
import numpy as np

from safenav.world import (
    DEFAULT_NOISE,
    AgentState,
    ConfigError,
    Coord,
    Gps,
    GridMap,
    MotionCommand,
    MotionNoise,
    RewardConfig,
    Action,
    advance_waypoint,
    step,
)

DEFAULT_PARTICLE_COUNT = 1000
DEFAULT_REINVIG_FRACTION = 0.1
DEFAULT_JITTER_RADIUS = 1


@dataclass(frozen=True)
class BeliefParams:
    """Parameters of particle tracking."""

    n_particles: int = field(default=DEFAULT_PARTICLE_COUNT)
    reinvig_fraction: float = field(default=DEFAULT_REINVIG_FRACTION)
    jitter_radius: int = field(default=DEFAULT_JITTER_RADIUS)

    def __post_init__(self):
        if self.n_particles < 1:
            raise ConfigError("n_particles must be at least 1")
        if not 0 <= self.reinvig_fraction <= 1:
            raise ConfigError("reinvig_fraction must lie in [0, 1]")
        if self.jitter_radius < 0:
            raise ConfigError("jitter_radius must not be negative")


@dataclass(frozen=True)
class ParticleBelief:
    """An unweighted set of candidate agent states."""

    particles: tuple[AgentState, ...]

    @property
    def n_p(self) -> int:
        """Number of particles."""
        return len(self.particles)

    def active_particles(self) -> list[AgentState]:
        """Returns the particles that may still transition."""
        return [particle for particle in self.particles if particle.is_active]

    def has_active(self) -> bool:
        """Whether at least one particle is active."""
        return any(particle.is_active for particle in self.particles)

    def failed_count(self) -> int:
        """Number of particles in a failure state."""
        return sum(1 for particle in self.particles if particle.terminal.is_failure)


def init_belief(grid_map: GridMap, n_p: int) -> ParticleBelief:
    """Place every particle at the start state."""
    if n_p < 1:
        raise ValueError(f"A belief needs at least one particle, got {n_p}")
    return ParticleBelief(tuple(AgentState(grid_map.start) for _ in range(n_p)))


def propagate(
    belief: ParticleBelief,
    grid_map: GridMap,
    reward_cfg: RewardConfig,
    rng: np.random.Generator,
    noise: MotionNoise = DEFAULT_NOISE,
    command: MotionCommand | None = None,
) -> ParticleBelief:
    """Advance every active particle by one noisy move, without filtering."""

    if belief.n_p == 0:
        raise ValueError("Can not propagate an empty belief")

    particles = tuple(
        (
            step(grid_map, particle, Action.MOVE, reward_cfg, rng, noise, command).next_state
            if particle.is_active
            else particle
        )
        for particle in belief.particles
    )
    return ParticleBelief(particles)


def nearest_waypoint(grid_map: GridMap, pos: Coord, floor: int = 0) -> int:
    """Index of the nearest waypoint at or after ``floor``; ties go to the lower index."""

    path = grid_map.path
    floor = min(max(floor, 0), len(path) - 1)
    best_index = floor
    best_distance = float("inf")
    for index in range(floor, len(path)):
        dx = path[index][0] - pos[0]
        dy = path[index][1] - pos[1]
        distance = dx * dx + dy * dy
        if distance < best_distance:
            best_index, best_distance = index, distance
    return best_index


def _next_target_index(grid_map: GridMap, pos: Coord, floor: int) -> int:
    index = nearest_waypoint(grid_map, pos, floor)
    if grid_map.path[index] == pos and index + 1 < len(grid_map.path):
        return index + 1
    return index


def _jitter(
    grid_map: GridMap, center: Coord, radius: int, rng: np.random.Generator
) -> Coord:
    if radius == 0:
        return center
    dx, dy = rng.integers(-radius, radius + 1, size=2)
    x = min(max(center[0] + int(dx), 0), grid_map.width - 1)
    y = min(max(center[1] + int(dy), 0), grid_map.height - 1)
    if not grid_map.is_traversable((x, y)) or (x, y) == grid_map.goal:
        return center
    return (x, y)


def update_with_gps(
    belief: ParticleBelief,
    obs: Gps,
    grid_map: GridMap,
    reinvig_fraction: float,
    jitter_radius: int,
    rng: np.random.Generator,
) -> ParticleBelief:
    """Filter the belief on a GPS fix and reinvigorate it with jittered particles.

    Particles at the fix are resampled into ``n_p * (1 - reinvig_fraction)``
    slots; the rest are placed uniformly within Chebyshev ``jitter_radius`` of
    the fix. Without a single matching particle the belief is reseeded around
    the fix entirely. Every resulting particle targets the nearest waypoint it
    has not passed yet.
    """

    n_p = belief.n_p
    floor = min(particle.waypoint_index for particle in belief.particles)
    matches = [
        particle
        for particle in belief.particles
        if particle.is_active and particle.position == obs.position
    ]

    if matches:
        n_keep = int(round(n_p * (1.0 - reinvig_fraction)))
    else:
        gymnasium.logger.warn(
            f"No particle matches GPS fix {obs.position}; reseeding the belief."
        )
        n_keep = 0

    positions: list[Coord] = [obs.position] * n_keep
    positions += [
        _jitter(grid_map, obs.position, jitter_radius, rng) for _ in range(n_p - n_keep)
    ]

    targets: dict[Coord, int] = {}
    particles = []
    for position in positions:
        if position not in targets:
            targets[position] = _next_target_index(grid_map, position, floor)
        particles.append(AgentState(position, targets[position]))

    return ParticleBelief(tuple(particles))


def _round_half_away(value: float) -> int:
    return int(np.sign(value) * np.floor(abs(value) + 0.5))


def mean_position(belief: ParticleBelief) -> Coord:
    """Component-wise mean of active particle positions, rounded half away from zero."""

    particles = belief.active_particles() or list(belief.particles)
    if not particles:
        raise ValueError("Can not take the mean of an empty belief")
    positions = np.array([particle.position for particle in particles], dtype=float)
    mean_x, mean_y = positions.mean(axis=0)
    return (_round_half_away(mean_x), _round_half_away(mean_y))


def failure_fraction(belief: ParticleBelief) -> float:
    """Fraction of particles in a failure state."""
    if belief.n_p == 0:
        raise ValueError("Can not measure an empty belief")
    return belief.failed_count() / belief.n_p


def believed_state(belief: ParticleBelief, grid_map: GridMap) -> AgentState:
    """The belief mean, chasing the waypoint most active particles are chasing."""

    position = mean_position(belief)
    particles = belief.active_particles() or list(belief.particles)
    indices = np.bincount([particle.waypoint_index for particle in particles])
    index = int(np.argmax(indices))
    return AgentState(position, advance_waypoint(grid_map.path, index, position))


def hazard_fraction(belief: ParticleBelief, grid_map: GridMap, margin: int = 0) -> float:
    """Fraction of active particles within ``margin`` cells of a surface hazard.

    A belief without active particles is measured over all of its particles.
    """

    particles = belief.active_particles() or list(belief.particles)
    if not particles:
        raise ValueError("Can not measure an empty belief")
    near = sum(1 for particle in particles if grid_map.near_hazard(particle.position, margin))
    return near / len(particles)
