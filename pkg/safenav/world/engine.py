"""Support for the generative navigation model G(s, a) -> (s', o, r, c)."""

from dataclasses import dataclass, field

import numpy as np

from .actions import NO_OBSERVATION, Action, Gps, MotionCommand, Observation
from .cells import Coord, GridMap
from .errors import ConfigError, PathExhausted, TerminalStateError
from .rules import classify_localize, classify_move
from .state import AgentState, Terminal

DEFAULT_P_OVERSHOOT = 0.03
DEFAULT_P_UNDERSHOOT = 0.03
DEFAULT_R_GOAL = 100.0
DEFAULT_R_MOVE = -1.0

# A noisy move covers at most two cells, so the waypoint being chased and
# the one after it are the only ones a single step can reach.
WAYPOINT_LOOKAHEAD = 3


@dataclass(frozen=True)
class RewardConfig:
    """Reward components of a transition."""

    r_goal: float = field(default=DEFAULT_R_GOAL)
    r_move: float = field(default=DEFAULT_R_MOVE)
    r_local: float = field(default=-3.0)
    r_fail: float = field(default=-100.0)

    def __post_init__(self):
        if self.r_goal <= 0:
            raise ConfigError(f"r_goal must be positive, got {self.r_goal}")
        for name in ("r_move", "r_local", "r_fail"):
            if getattr(self, name) > 0:
                raise ConfigError(f"{name} must not be positive")


POMCP_REWARDS = RewardConfig(r_goal=100.0, r_move=-1.0, r_local=-5.0, r_fail=-10.0)
CC_POMCP_REWARDS = RewardConfig(r_goal=100.0, r_move=-1.0, r_local=-3.0, r_fail=-100.0)


@dataclass(frozen=True)
class MotionNoise:
    """Probabilities of over- and undershooting the intended cell."""

    p_overshoot: float = field(default=DEFAULT_P_OVERSHOOT)
    p_undershoot: float = field(default=DEFAULT_P_UNDERSHOOT)

    def __post_init__(self):
        if self.p_overshoot < 0 or self.p_undershoot < 0:
            raise ConfigError("Noise probabilities must not be negative")
        if self.p_overshoot + self.p_undershoot > 1:
            raise ConfigError("Noise probabilities must sum to at most 1")

    @property
    def p_correct(self) -> float:
        """Probability of landing on the intended cell."""
        return 1.0 - self.p_overshoot - self.p_undershoot

    def sample_cells(self, rng: np.random.Generator) -> int:
        """Sample how many cells a move covers: 0, 1 or 2."""
        u = rng.random()
        if u < self.p_undershoot:
            return 0
        if u < self.p_undershoot + self.p_overshoot:
            return 2
        return 1


DEFAULT_NOISE = MotionNoise()
NOISE_FREE = MotionNoise(p_overshoot=0.0, p_undershoot=0.0)


@dataclass(frozen=True)
class StepOutcome:
    """Result of one generative step."""

    next_state: AgentState
    observation: Observation
    reward: float
    cost: float


def command_toward(position: Coord, target: Coord) -> MotionCommand:
    """Unit step along the axis with the larger displacement, x-axis first on ties."""

    dx = target[0] - position[0]
    dy = target[1] - position[1]
    if dx == 0 and dy == 0:
        raise ValueError(f"Position {position} already equals target {target}")
    if abs(dx) >= abs(dy):
        return MotionCommand.RIGHT if dx > 0 else MotionCommand.LEFT
    return MotionCommand.DOWN if dy > 0 else MotionCommand.UP


def intended_command(state: AgentState, grid_map: GridMap) -> MotionCommand:
    """Return the command chasing the state's next waypoint."""

    path = grid_map.path
    index = state.waypoint_index
    while index < len(path) and path[index] == state.position:
        index += 1

    if index >= len(path):
        if state.position == grid_map.goal:
            raise PathExhausted(f"Position {state.position} is the final waypoint")
        return command_toward(state.position, grid_map.goal)

    return command_toward(state.position, path[index])


def approach_command(grid_map: GridMap) -> MotionCommand:
    """The command of the path's last leg into the goal."""
    if len(grid_map.path) < 2:
        raise PathExhausted("A single-cell path has no approach into the goal")
    return command_toward(grid_map.path[-2], grid_map.goal)


def steering_command(state: AgentState, grid_map: GridMap) -> MotionCommand:
    """Chase the next waypoint, or keep to the final approach once past the goal."""
    try:
        return intended_command(state, grid_map)
    except PathExhausted:
        return approach_command(grid_map)


def advance_waypoint(path: tuple[Coord, ...], index: int, position: Coord) -> int:
    """Advance a waypoint index past any nearby waypoint the agent occupies."""
    for j in range(index, min(index + WAYPOINT_LOOKAHEAD, len(path))):
        if path[j] == position:
            return j + 1
    return index


def dead_reckon(grid_map: GridMap, state: AgentState, command: MotionCommand) -> AgentState:
    """Where a noise-free move would put the agent, ignoring obstacles and edges."""
    dx, dy = command.delta
    position = (state.position[0] + dx, state.position[1] + dy)
    return AgentState(position, advance_waypoint(grid_map.path, state.waypoint_index, position))


def transition_reward(
    action: Action, terminal: Terminal, reward_cfg: RewardConfig
) -> float:
    """Sum of the reward components that apply to a transition."""

    reward = reward_cfg.r_move if action is Action.MOVE else reward_cfg.r_local
    if terminal is Terminal.REACHED_GOAL:
        reward += reward_cfg.r_goal
    elif terminal.is_failure:
        reward += reward_cfg.r_fail
    return reward


def step(
    grid_map: GridMap,
    state: AgentState,
    action: Action,
    reward_cfg: RewardConfig,
    rng: np.random.Generator,
    noise: MotionNoise = DEFAULT_NOISE,
    command: MotionCommand | None = None,
) -> StepOutcome:
    """Sample the next state, observation, reward and cost of an action.

    Moves follow ``command`` when given, otherwise the command chasing the
    state's next waypoint. A noisy move enters its cells one at a time and
    stops at the first obstacle, map edge or goal it enters.
    """

    if not state.is_active:
        raise TerminalStateError(f"Can not step terminal state {state.terminal.value}")

    if action is Action.LOCALIZE:
        terminal = classify_localize(grid_map, state.position)
        next_state = state if terminal is Terminal.ACTIVE else state.with_terminal(terminal)
        observation: Observation = (
            Gps(state.position) if terminal is Terminal.ACTIVE else NO_OBSERVATION
        )
    else:
        if command is None:
            command = intended_command(state, grid_map)
        dx, dy = command.delta
        x, y = state.position
        terminal = Terminal.ACTIVE
        for _ in range(noise.sample_cells(rng)):
            x, y = x + dx, y + dy
            terminal = classify_move(grid_map, (x, y))
            if terminal is not Terminal.ACTIVE:
                break
        position = (x, y)
        next_state = AgentState(
            position,
            advance_waypoint(grid_map.path, state.waypoint_index, position),
            terminal,
        )
        observation = NO_OBSERVATION

    return StepOutcome(
        next_state=next_state,
        observation=observation,
        reward=transition_reward(action, terminal, reward_cfg),
        cost=1.0 if terminal.is_failure else 0.0,
    )


@dataclass(frozen=True)
class GenerativeModel:
    """A map, reward table and noise model bundled as a black-box simulator."""

    grid_map: GridMap
    rewards: RewardConfig = field(default_factory=RewardConfig)
    noise: MotionNoise = field(default=DEFAULT_NOISE)

    def step(
        self,
        state: AgentState,
        action: Action,
        rng: np.random.Generator,
        command: MotionCommand | None = None,
    ) -> StepOutcome:
        """Sample one transition of the bundled model."""
        return step(self.grid_map, state, action, self.rewards, rng, self.noise, command)
