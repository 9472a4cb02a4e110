"""Goal-directed MDP construction and problem generators.

A goal-directed MDP rewards exactly one thing: announcing arrival while at
the goal. An extra absorbing state ("done") and an extra action
("declare") are appended to the base transition structure; declaring from
anywhere leads to done, every action at done stays at done, and the only
nonzero reward is 1 for declaring at the goal. Because done pays nothing
forever, declaring can never profitably happen twice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mdp import SparseMdp

GRID_ACTIONS = ("north", "east", "south", "west")
_DELTAS = ((-1, 0), (0, 1), (1, 0), (0, -1))
# index of the two lateral (slip) directions for each move direction
_LATERAL = ((1, 3), (0, 2), (1, 3), (0, 2))


@dataclass(frozen=True)
class GoalDirectedMdp:
    """A SparseMdp plus its goal state and the absorbing done state.

    The declare action is always the last action index; done is always the
    last state index.
    """
    mdp: SparseMdp
    goal: int
    done: int

    @property
    def declare_action(self) -> int:
        return self.mdp.num_actions - 1

    def __eq__(self, other):
        if not isinstance(other, GoalDirectedMdp):
            return NotImplemented
        return self.mdp == other.mdp and self.goal == other.goal and self.done == other.done


@dataclass(frozen=True)
class NoiseProfile:
    """Transition noise for grid moves: intended-direction mass p_move,
    stay-in-place mass p_stay, and lateral-slip mass p_slip per side."""
    p_move: float
    p_stay: float
    p_slip: float

    def __post_init__(self):
        for name, p in (("p_move", self.p_move), ("p_stay", self.p_stay),
                        ("p_slip", self.p_slip)):
            if p < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {p}")
        total = self.p_move + self.p_stay + 2.0 * self.p_slip
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"noise masses sum to {total!r}, not 1")


NOISE_PROFILES = {
    "standard": NoiseProfile(p_move=0.8, p_stay=0.1, p_slip=0.05),
    "noisy": NoiseProfile(p_move=0.6, p_stay=0.2, p_slip=0.1),
}


@dataclass(frozen=True)
class GridSpec:
    """A rectangular gridworld: blocked cells, a goal cell, and the noise
    profile its four move actions use. Cells are (row, col), row 0 on top."""
    width: int
    height: int
    walls: frozenset[tuple[int, int]]
    goal_cell: tuple[int, int]
    noise: NoiseProfile

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be >= 1")
        for r, c in self.walls:
            if not (0 <= r < self.height and 0 <= c < self.width):
                raise ValueError(f"wall cell {(r, c)} out of bounds")
        gr, gc = self.goal_cell
        if not (0 <= gr < self.height and 0 <= gc < self.width):
            raise ValueError(f"goal cell {self.goal_cell} out of bounds")
        if self.goal_cell in self.walls:
            raise ValueError("goal cell must not be a wall")

    def free_cells(self) -> list[tuple[int, int]]:
        """Free cells in row-major order; this fixes the state indexing."""
        return [(r, c) for r in range(self.height) for c in range(self.width)
                if (r, c) not in self.walls]


def make_goal_directed(num_states: int, num_actions: int, transitions,
                       goal: int, discount: float) -> GoalDirectedMdp:
    """Wrap base dynamics into a goal-directed MDP.

    Appends the done state and the declare action, gives declare the
    transition-to-done semantics from every state, makes every action at
    done a self-loop, and sets the single nonzero reward.
    """
    if not (0 <= goal < num_states):
        raise ValueError(f"goal index {goal} out of range for {num_states} base states")
    done = num_states
    declare = num_actions
    trans = []
    for s in range(num_states):
        row = [list(transitions[s][a]) for a in range(num_actions)]
        row.append([(done, 1.0)])
        trans.append(row)
    trans.append([[(done, 1.0)] for _ in range(num_actions + 1)])
    rewards = np.zeros((num_states + 1, num_actions + 1))
    rewards[goal, declare] = 1.0
    mdp = SparseMdp(num_states + 1, num_actions + 1, trans, rewards, discount)
    return GoalDirectedMdp(mdp=mdp, goal=goal, done=done)


def _grid_transitions(width, height, walls, noise, blocked_edges):
    """Move dynamics over free cells. Movement into a wall, off the grid,
    or across a blocked edge redirects its mass to staying."""
    cells = [(r, c) for r in range(height) for c in range(width)
             if (r, c) not in walls]
    if not cells:
        raise ValueError("grid has no free cell")
    index = {cell: i for i, cell in enumerate(cells)}

    def target(cell, d):
        r, c = cell
        dr, dc = _DELTAS[d]
        nxt = (r + dr, c + dc)
        if nxt not in index or (cell, nxt) in blocked_edges:
            return cell
        return nxt

    transitions = []
    for cell in cells:
        row = []
        for d in range(4):
            mass: dict[tuple[int, int], float] = {}

            def put(dest, p):
                if p > 0.0:
                    mass[dest] = mass.get(dest, 0.0) + p

            put(target(cell, d), noise.p_move)
            put(cell, noise.p_stay)
            for lat in _LATERAL[d]:
                put(target(cell, lat), noise.p_slip)
            row.append(sorted((index[dest], p) for dest, p in mass.items()))
        transitions.append(row)
    return cells, index, transitions


def gen_gridworld(spec: GridSpec, discount: float) -> GoalDirectedMdp:
    """Goal-directed navigation MDP from a GridSpec: one state per free
    cell (row-major indexing, then done), four noisy move actions, and the
    declare action. Identical specs yield bit-identical MDPs."""
    cells, index, transitions = _grid_transitions(
        spec.width, spec.height, spec.walls, spec.noise, frozenset())
    return make_goal_directed(len(cells), 4, transitions,
                              index[spec.goal_cell], discount)


def glue_copies(spec: GridSpec, k: int, discount: float) -> GoalDirectedMdp:
    """k copies of the grid laid side by side, passable between adjacent
    copies only through one door row on the shared boundary (the middle
    row, or the topmost row whose facing boundary cells are both free).
    The goal lives in the last copy only."""
    if k < 1:
        raise ValueError("k must be >= 1")
    width = spec.width * k
    walls = frozenset((r, c + i * spec.width)
                      for i in range(k) for r, c in spec.walls)

    door_rows = [r for r in range(spec.height)
                 if (r, spec.width - 1) not in spec.walls and (r, 0) not in spec.walls]
    if k > 1 and not door_rows:
        raise ValueError("no free boundary cell to place a door between copies")
    mid = spec.height // 2
    door = mid if mid in door_rows else min(door_rows) if door_rows else 0

    blocked = set()
    for i in range(1, k):
        left = i * spec.width - 1
        for r in range(spec.height):
            if r == door:
                continue
            blocked.add(((r, left), (r, left + 1)))
            blocked.add(((r, left + 1), (r, left)))

    gr, gc = spec.goal_cell
    goal_cell = (gr, gc + (k - 1) * spec.width)
    cells, index, transitions = _grid_transitions(
        width, spec.height, walls, spec.noise, frozenset(blocked))
    return make_goal_directed(len(cells), 4, transitions, index[goal_cell], discount)


def random_mdp(num_states: int, num_actions: int, discount: float,
               rng: np.random.Generator, max_support: int = 4) -> SparseMdp:
    """Random stochastic MDP (not goal-directed); rewards uniform in [0,1],
    supports of size 1..max_support with probabilities bounded away from 0.
    Used by the contraction and randomized property tests."""
    transitions = []
    for _ in range(num_states):
        row = []
        for _ in range(num_actions):
            size = int(rng.integers(1, min(max_support, num_states) + 1))
            succs = rng.choice(num_states, size=size, replace=False)
            weights = rng.uniform(0.1, 1.0, size=size)
            probs = weights / weights.sum()
            row.append(sorted(zip(succs.tolist(), probs.tolist())))
        transitions.append(row)
    rewards = rng.uniform(0.0, 1.0, size=(num_states, num_actions))
    return SparseMdp(num_states, num_actions, transitions, rewards, discount)


def random_layered_acyclic_mdp(rng: np.random.Generator, max_states: int = 20,
                               num_actions: int = 2,
                               discount: float | None = None) -> GoalDirectedMdp:
    """Random strictly layered acyclic goal-directed MDP.

    The goal is the single layer-0 state; every action of a layer-L state
    distributes its whole mass over layer L-1, so the ideal-reachability
    distance equals the layer and a single goal-outward sweep resolves the
    optimal values exactly. Goal moves self-loop (declaring dominates them).
    """
    if discount is None:
        discount = float(rng.uniform(0.5, 0.99))
    num_layers = int(rng.integers(2, 6))
    remaining = int(rng.integers(num_layers, max_states))  # states beyond the goal
    layers: list[list[int]] = [[0]]
    next_id = 1
    for layer in range(1, num_layers + 1):
        layers_left = num_layers - layer
        size = 1 if layers_left >= remaining else int(rng.integers(1, remaining - layers_left + 1))
        layers.append(list(range(next_id, next_id + size)))
        next_id += size
        remaining -= size
        if remaining == 0:
            break
    num_states = next_id

    transitions: list[list[list[tuple[int, float]]]] = [[] for _ in range(num_states)]
    transitions[0] = [[(0, 1.0)] for _ in range(num_actions)]
    for layer_idx in range(1, len(layers)):
        below = layers[layer_idx - 1]
        for s in layers[layer_idx]:
            for _ in range(num_actions):
                size = int(rng.integers(1, min(3, len(below)) + 1))
                succs = rng.choice(below, size=size, replace=False)
                weights = rng.uniform(0.1, 1.0, size=size)
                probs = weights / weights.sum()
                transitions[s].append(sorted(zip(succs.tolist(), probs.tolist())))
    return make_goal_directed(num_states, num_actions, transitions, 0, discount)
