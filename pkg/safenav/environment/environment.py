"""Support for the single-vehicle gymnasium environment."""

import gymnasium
import numpy as np
from gymnasium.spaces import Box, Discrete

from safenav.world import (
    DEFAULT_NOISE,
    AgentState,
    Gps,
    GridMap,
    MotionNoise,
    Observation,
    RewardConfig,
    TerminalStateError,
    render_map,
    step as model_step,
)

from .actions import ExecutedAction

ENV_NAME = "safenav_v0"
MAX_STEPS_FACTOR = 10
NO_FIX = (-1, -1, 0)


def env(
    grid_map: GridMap,
    rewards: RewardConfig | None = None,
    noise: MotionNoise = DEFAULT_NOISE,
    max_steps: int | None = None,
    render_mode=None,
):
    """Return a navigation environment."""

    return SafeNavEnv(
        grid_map=grid_map,
        rewards=rewards if rewards is not None else RewardConfig(),
        noise=noise,
        max_steps=max_steps,
        render_mode=render_mode,
    )


class SafeNavEnv(gymnasium.Env):
    """An environment holding the hidden true vehicle state.

    Observations are ``[x, y, 1]`` after a successful GPS fix and
    ``[-1, -1, 0]`` otherwise; moves never observe anything.
    """

    metadata = {"render_modes": ["human", "ansi"], "name": ENV_NAME}

    def __init__(
        self,
        grid_map: GridMap,
        rewards: RewardConfig,
        noise: MotionNoise = DEFAULT_NOISE,
        max_steps: int | None = None,
        render_mode=None,
    ):
        super().__init__()

        self.grid_map = grid_map
        self.rewards = rewards
        self.noise = noise
        self.max_steps = (
            max_steps if max_steps is not None else MAX_STEPS_FACTOR * len(grid_map.path)
        )
        self.render_mode = render_mode
        self._state: AgentState | None = None
        self.steps = 0

        self.action_space = Discrete(len(ExecutedAction))
        self.observation_space = Box(
            low=-1,
            high=max(grid_map.width, grid_map.height),
            shape=(3,),
            dtype=np.int64,
        )

    def reset(self, seed=None, options=None) -> tuple[np.ndarray, dict]:
        super().reset(seed=seed)
        self._state = AgentState(self.grid_map.start)
        self.steps = 0

        if self.render_mode == "human":
            self.render()

        return self._observe(None), self._info(0.0, None)

    def step(self, action: int):
        """
        Executes a concrete action on the hidden state.
        Returns observation, reward, terminated, truncated and info.
        """

        if self._state is None:
            raise RuntimeError("Call reset before step")
        if not self._state.is_active:
            raise TerminalStateError("Episode already ended; call reset")

        executed = ExecutedAction(action)
        outcome = model_step(
            self.grid_map,
            self._state,
            executed.action,
            self.rewards,
            self.np_random,
            self.noise,
            executed.command,
        )
        self._state = outcome.next_state
        self.steps += 1

        terminated = not self._state.is_active
        truncated = not terminated and self.steps >= self.max_steps

        if self.render_mode == "human":
            print(f"Action:   {executed.name}")
            print(f"Reward:   {outcome.reward}")
            self.render()

        return (
            self._observe(outcome.observation),
            outcome.reward,
            terminated,
            truncated,
            self._info(outcome.cost, outcome.observation),
        )

    def _observe(self, observation: Observation | None) -> np.ndarray:
        if isinstance(observation, Gps):
            return np.array([*observation.position, 1], dtype=np.int64)
        return np.array(NO_FIX, dtype=np.int64)

    def _info(self, cost: float, observation: Observation | None) -> dict:
        return {
            "terminal": self._state.terminal,
            "position": self._state.position,
            "cost": cost,
            "observation": observation,
            "steps": self.steps,
        }

    def render(self):
        """Renders the map with the true vehicle position."""
        if self.render_mode is None:
            gymnasium.logger.warn(
                "You are calling render method without specifying any render mode."
            )
            return None

        frame = render_map(self.grid_map, agent=self._state.position if self._state else None)
        if self.render_mode == "ansi":
            return frame

        print(f"\n----- Step {self.steps} ----- ")
        print(frame)
        if self._state is not None:
            print(f"Position: {self._state.position}  State: {self._state.terminal.value}")
        print("-" * 20)
        return None

    def state(self) -> AgentState:
        """Returns the hidden true vehicle state."""
        return self._state
