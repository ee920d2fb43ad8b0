"""Support for the POMCP planner: UCB1 search over histories with particle rollouts."""

import math
from dataclasses import dataclass, field

import numpy as np

from safenav.belief import DEFAULT_PARTICLE_COUNT, ParticleBelief, believed_state
from safenav.world import (
    ACTIONS,
    DEFAULT_NOISE,
    Action,
    AgentState,
    ConfigError,
    GenerativeModel,
    GridMap,
    MotionNoise,
    NoActiveParticles,
    RewardConfig,
    StepOutcome,
    dead_reckon,
    steering_command,
)

from .tree import ZERO_RETURNS, ActionEdge, Returns, TreeNode

DEFAULT_SIMULATIONS = 2000
DEFAULT_TREE_DEPTH = 8
DEFAULT_ROLLOUT_LOCALIZE_PROB = 0.1


@dataclass(frozen=True)
class SearchParams:
    """Parameters of a Monte-Carlo tree search."""

    n_sims: int = field(default=DEFAULT_SIMULATIONS)
    tree_depth: int = field(default=DEFAULT_TREE_DEPTH)
    gamma: float = field(default=0.999)
    kappa: float = field(default=150.0)
    n_p: int = field(default=DEFAULT_PARTICLE_COUNT)
    rollout_localize_prob: float = field(default=DEFAULT_ROLLOUT_LOCALIZE_PROB)

    def __post_init__(self):
        if self.n_sims < 1:
            raise ConfigError("n_sims must be at least 1")
        if self.tree_depth < 1:
            raise ConfigError("tree_depth must be at least 1")
        if not 0 < self.gamma < 1:
            raise ConfigError("gamma must lie in (0, 1)")
        if self.kappa < 0:
            raise ConfigError("kappa must not be negative")
        if self.n_p < 1:
            raise ConfigError("n_p must be at least 1")
        if not 0 <= self.rollout_localize_prob <= 1:
            raise ConfigError("rollout_localize_prob must lie in [0, 1]")


POMCP_SEARCH = SearchParams(gamma=0.999, kappa=150.0)


class PomcpSolver:
    """Builds a fresh search tree per decision and picks the greedy root action."""

    def __init__(
        self,
        model: GenerativeModel,
        params: SearchParams,
        rng: np.random.Generator,
    ):
        self.model = model
        self.params = params
        self.rng = rng

    def scalarize(self, edge: ActionEdge) -> float:
        """Value used to rank an edge during search."""
        return edge.value

    def greedy_action(self, node: TreeNode) -> Action:
        """Visited action with the highest scalarized value; ties go to Move."""
        best_action = Action.MOVE
        best_value = -math.inf
        for action in node.visited_actions():
            value = self.scalarize(node.edges[action])
            if value > best_value:
                best_action, best_value = action, value
        return best_action

    def legal_actions(self, believed: AgentState | None = None) -> tuple[Action, ...]:
        """Actions open to a history; surfacing is closed on a believed lane cell."""
        if believed is not None and self.model.grid_map.is_hazard(believed.position):
            return (Action.MOVE,)
        return ACTIONS

    def select_action(self, node: TreeNode, believed: AgentState | None = None) -> Action:
        """UCB1 selection; unvisited actions first, Move before Localize."""

        actions = self.legal_actions(believed)
        for action in actions:
            if node.edges[action].visit_count == 0:
                return action

        log_visits = math.log(node.visit_count)
        best_action = Action.MOVE
        best_score = -math.inf
        for action in actions:
            edge = node.edges[action]
            score = self.scalarize(edge) + self.params.kappa * math.sqrt(
                log_visits / edge.visit_count
            )
            if score > best_score:
                best_action, best_score = action, score
        return best_action

    def advance(
        self, state: AgentState, believed: AgentState, action: Action
    ) -> tuple[StepOutcome, AgentState]:
        """Step the true state along with the state the history believes in.

        A move follows the command steering the believed state, which then
        dead-reckons; a fix syncs the believed state with the true one.
        """

        if action is Action.MOVE:
            command = steering_command(believed, self.model.grid_map)
            outcome = self.model.step(state, action, self.rng, command)
            return outcome, dead_reckon(self.model.grid_map, believed, command)
        outcome = self.model.step(state, action, self.rng)
        return outcome, outcome.next_state

    def rollout_action(self, believed: AgentState) -> Action:
        """Default policy: mostly move, surfacing only where it is legal."""
        if Action.LOCALIZE not in self.legal_actions(believed):
            return Action.MOVE
        if self.rng.random() < self.params.rollout_localize_prob:
            return Action.LOCALIZE
        return Action.MOVE

    def rollout(
        self, state: AgentState, depth: int, believed: AgentState | None = None
    ) -> Returns:
        """Discounted returns of the default policy up to the depth limit."""

        believed = state if believed is None else believed
        reward = cost = 0.0
        discount = 1.0
        for _ in range(depth):
            if not state.is_active:
                break
            outcome, believed = self.advance(state, believed, self.rollout_action(believed))
            reward += discount * outcome.reward
            cost += discount * outcome.cost
            discount *= self.params.gamma
            state = outcome.next_state
        return Returns(reward, cost)

    def simulate(
        self,
        state: AgentState,
        node: TreeNode,
        depth: int,
        believed: AgentState | None = None,
    ) -> Returns:
        """Run one simulation through the tree, expanding at most one node."""

        if depth == 0 or not state.is_active:
            return ZERO_RETURNS

        believed = state if believed is None else believed
        action = self.select_action(node, believed)
        outcome, believed = self.advance(state, believed, action)
        edge = node.edges[action]

        child = edge.children.get(outcome.observation)
        if child is None:
            edge.children[outcome.observation] = TreeNode()
            future = self.rollout(outcome.next_state, depth - 1, believed)
        else:
            future = self.simulate(outcome.next_state, child, depth - 1, believed)

        returns = Returns(
            outcome.reward + self.params.gamma * future.reward,
            outcome.cost + self.params.gamma * future.cost,
        )
        node.visit_count += 1
        edge.update(returns)
        return returns

    def after_simulation(self, root: TreeNode):
        """Hook run after every root simulation."""

    def search(
        self,
        belief: ParticleBelief,
        root: TreeNode | None = None,
        n_sims: int | None = None,
    ) -> TreeNode:
        """Run simulations from particles sampled uniformly among active ones.

        Every simulation steers from the belief mean, as the low-level
        planner does when a move is executed.
        """

        active = belief.active_particles()
        if not active:
            raise NoActiveParticles("Belief holds no active particle to plan from")

        believed = believed_state(belief, self.model.grid_map)
        root = TreeNode() if root is None else root
        for _ in range(self.params.n_sims if n_sims is None else n_sims):
            state = active[self.rng.integers(len(active))]
            self.simulate(state, root, self.params.tree_depth, believed)
            self.after_simulation(root)
        return root

    def choose(self, root: TreeNode) -> Action:
        """Final action choice at the root."""
        return self.greedy_action(root)

    def plan(
        self,
        belief: ParticleBelief,
        root: TreeNode | None = None,
        n_sims: int | None = None,
    ) -> Action:
        """Search from the belief and return the chosen root action."""
        return self.choose(self.search(belief, root, n_sims))


def plan(
    belief: ParticleBelief,
    grid_map: GridMap,
    params: SearchParams,
    reward_cfg: RewardConfig,
    rng: np.random.Generator,
    noise: MotionNoise = DEFAULT_NOISE,
    root: TreeNode | None = None,
    n_sims: int | None = None,
) -> Action:
    """Plan one action with POMCP on a fresh (or supplied) tree."""
    solver = PomcpSolver(GenerativeModel(grid_map, reward_cfg, noise), params, rng)
    return solver.plan(belief, root, n_sims)
