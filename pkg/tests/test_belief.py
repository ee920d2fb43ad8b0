import numpy as np
import pytest

from safenav.belief import (
    BeliefParams,
    ParticleBelief,
    believed_state,
    failure_fraction,
    hazard_fraction,
    init_belief,
    mean_position,
    nearest_waypoint,
    propagate,
    update_with_gps,
)
from safenav.world import (
    CC_POMCP_REWARDS,
    ENV_TRAINING,
    NOISE_FREE,
    AgentState,
    ConfigError,
    Gps,
    MotionCommand,
    Terminal,
    builtin_env,
)


def belief_at(*positions, waypoint_index=0):
    return ParticleBelief(tuple(AgentState(pos, waypoint_index) for pos in positions))


def test_init_belief():
    grid_map = builtin_env(ENV_TRAINING)
    belief = init_belief(grid_map, 1000)
    assert belief.n_p == 1000
    assert all(p == AgentState(grid_map.start) for p in belief.particles)
    assert mean_position(belief) == grid_map.start
    assert init_belief(grid_map, 1).n_p == 1


def test_init_belief_needs_particles(corner_map):
    with pytest.raises(ValueError):
        init_belief(corner_map, 0)


def test_propagate_histogram(open_map):
    rng = np.random.default_rng(5)
    belief = belief_at(*[(5, 5)] * 1000, waypoint_index=6)
    counts = {(6, 5): 0, (7, 5): 0, (5, 5): 0}
    rounds = 100
    for _ in range(rounds):
        moved = propagate(belief, open_map, CC_POMCP_REWARDS, rng)
        assert moved.n_p == 1000
        for particle in moved.particles:
            counts[particle.position] += 1

    total = 1000 * rounds
    assert counts[(6, 5)] / total == pytest.approx(0.94, abs=0.005)
    assert counts[(7, 5)] / total == pytest.approx(0.03, abs=0.005)
    assert counts[(5, 5)] / total == pytest.approx(0.03, abs=0.005)


def test_propagate_keeps_terminal_particles(corner_map):
    dead = AgentState((1, 1), 0, Terminal.FAILED_COLLISION)
    belief = ParticleBelief((dead, AgentState((0, 0), 1)))
    moved = propagate(
        belief, corner_map, CC_POMCP_REWARDS, np.random.default_rng(0), NOISE_FREE
    )
    assert moved.particles[0] is dead
    assert moved.particles[1].position == (1, 0)


def test_propagate_noise_free_with_command(open_map):
    belief = belief_at(*[(5, 5)] * 20, waypoint_index=6)
    moved = propagate(
        belief, open_map, CC_POMCP_REWARDS, np.random.default_rng(0), NOISE_FREE,
        MotionCommand.DOWN,
    )
    assert {p.position for p in moved.particles} == {(5, 6)}


def test_failure_fraction_is_monotone_under_propagation(corner_map):
    rng = np.random.default_rng(1)
    belief = belief_at(*[(1, 2)] * 200)
    previous = failure_fraction(belief)
    for _ in range(4):
        belief = propagate(
            belief, corner_map, CC_POMCP_REWARDS, rng, command=MotionCommand.UP
        )
        assert failure_fraction(belief) >= previous
        previous = failure_fraction(belief)
    assert previous > 0


def test_gps_update_keeps_the_fix(open_map):
    rng = np.random.default_rng(2)
    belief = belief_at(*[(4, 7)] * 600, *[(5, 7)] * 400, waypoint_index=3)
    updated = update_with_gps(belief, Gps((4, 7)), open_map, 0.1, 1, rng)
    at_fix = sum(1 for p in updated.particles if p.position == (4, 7))
    assert updated.n_p == 1000
    assert at_fix >= 900
    assert all(p.is_active for p in updated.particles)
    assert all(
        max(abs(p.position[0] - 4), abs(p.position[1] - 7)) <= 1 for p in updated.particles
    )


def test_gps_update_reseeds_a_deprived_belief(open_map):
    belief = belief_at(*[(0, 5)] * 100)
    updated = update_with_gps(
        belief, Gps((8, 2)), open_map, 0.1, 1, np.random.default_rng(3)
    )
    assert updated.n_p == 100
    assert all(
        max(abs(p.position[0] - 8), abs(p.position[1] - 2)) <= 1 for p in updated.particles
    )


def test_gps_update_without_jitter(open_map):
    belief = belief_at(*[(4, 5)] * 50, *[(6, 5)] * 50)
    rng = np.random.default_rng(4)
    once = update_with_gps(belief, Gps((4, 5)), open_map, 0.1, 0, rng)
    twice = update_with_gps(once, Gps((4, 5)), open_map, 0.1, 0, rng)
    assert {p.position for p in once.particles} == {(4, 5)}
    assert once == twice


def test_gps_update_reindexes_waypoints(open_map):
    belief = belief_at(*[(4, 5)] * 10)
    updated = update_with_gps(
        belief, Gps((4, 5)), open_map, 0.0, 0, np.random.default_rng(0)
    )
    # standing on waypoint 4, the next target is waypoint 5
    assert {p.waypoint_index for p in updated.particles} == {5}


def test_nearest_waypoint(open_map, corner_map):
    # (1, 0) and (2, 1) are both one cell from (1, 1)
    assert nearest_waypoint(corner_map, (1, 1)) == 1
    assert nearest_waypoint(open_map, (5, 3)) == 5
    assert nearest_waypoint(open_map, (0, 0)) == 0
    assert nearest_waypoint(open_map, (0, 0), floor=3) == 3


@pytest.mark.parametrize(
    "positions, mean",
    [
        ([(2, 2), (4, 2)], (3, 2)),
        ([(7, 7)] * 5, (7, 7)),
        ([(2, 2), (3, 2)], (3, 2)),
        ([(4, 4), (6, 4), (5, 3), (5, 5)], (5, 4)),
    ],
)
def test_mean_position(positions, mean):
    assert mean_position(belief_at(*positions)) == mean


def test_mean_ignores_failed_particles():
    belief = ParticleBelief(
        (AgentState((1, 1)), AgentState((9, 9), 0, Terminal.FAILED_COLLISION))
    )
    assert mean_position(belief) == (1, 1)


def test_mean_of_a_dead_belief_uses_all_particles():
    belief = ParticleBelief(
        tuple(AgentState(pos, 0, Terminal.FAILED_OFF_MAP) for pos in [(0, 0), (2, 4)])
    )
    assert mean_position(belief) == (1, 2)


def test_failure_fraction():
    failed = [AgentState((0, 0), 0, Terminal.FAILED_SURFACED)] * 100
    alive = [AgentState((0, 0))] * 900
    assert failure_fraction(ParticleBelief(tuple(failed + alive))) == pytest.approx(0.10)
    assert failure_fraction(belief_at((0, 0))) == 0.0
    assert failure_fraction(ParticleBelief(tuple(failed))) == 1.0


def test_belief_params_validation():
    with pytest.raises(ConfigError):
        BeliefParams(reinvig_fraction=1.5)
    with pytest.raises(ConfigError):
        BeliefParams(n_particles=0)


def test_believed_state_takes_the_common_waypoint(open_map):
    belief = ParticleBelief(
        (AgentState((3, 5), 4),) * 3
        + (AgentState((5, 5), 6),)
        + (AgentState((0, 0), 9, Terminal.FAILED_OFF_MAP),) * 10
    )
    assert believed_state(belief, open_map) == AgentState((4, 5), 5)


def test_hazard_fraction(lane_map):
    belief = ParticleBelief(
        (
            AgentState((0, 0), 1),
            AgentState((1, 1), 1),
            AgentState((3, 0), 3),
            AgentState((1, 0), 0, Terminal.FAILED_SURFACED),
        )
    )
    assert hazard_fraction(belief, lane_map) == pytest.approx(1 / 3)
    assert hazard_fraction(belief, lane_map, margin=1) == pytest.approx(2 / 3)


def test_hazard_fraction_of_a_dead_belief(lane_map):
    belief = ParticleBelief((AgentState((1, 0), 1, Terminal.FAILED_SURFACED),) * 4)
    assert hazard_fraction(belief, lane_map) == 1.0
