"""Ideal-reachability distances and the goal-outward sweep ordering.

A state t is ideally reachable from s in one step when t is a most-likely
successor of some action at s. The distance d(s) is the minimum number of
such steps needed to reach the goal; it drives the ordering the
distance-swept solvers use.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .mdp import SparseMdp

UNREACHABLE = -1


@dataclass(frozen=True)
class DistanceMap:
    """Per-state ideal-reachability distance to the goal.

    dist holds hop counts with UNREACHABLE (-1) for states that cannot
    ideally reach the goal; max_finite is the largest finite distance.
    sweep_order lists all states sorted by (distance, state index), with
    unreachable states placed after every finite-distance state so a sweep
    still touches them.
    """
    goal: int
    dist: np.ndarray
    max_finite: int
    sweep_order: np.ndarray

    def is_reachable(self, s: int) -> bool:
        return self.dist[s] != UNREACHABLE


def ideal_successors(mdp: SparseMdp, s: int) -> set[int]:
    """All most-likely successors at s, unioned over actions. Probability
    ties are all included."""
    out: set[int] = set()
    for a in range(mdp.num_actions):
        entries = mdp.successors(s, a)
        top = max(p for _, p in entries)
        out.update(sp for sp, p in entries if p == top)
    return out


def one_step_successors(mdp: SparseMdp, s: int) -> list[int]:
    """Sorted union of all successor supports at s (precomputed on the mdp)."""
    return mdp.nbr[mdp.nbr_ptr[s]:mdp.nbr_ptr[s + 1]].tolist()


def compute_distance_map(mdp: SparseMdp, goal: int) -> DistanceMap:
    """Breadth-first search from the goal over reversed ideal edges.

    d(goal) = 0; d(s) = k means the goal is ideally reachable from s in k
    steps and no fewer. Unreachability is a legal outcome, not an error.
    """
    n = mdp.num_states
    if not (0 <= goal < n):
        raise ValueError(f"goal index {goal} out of range for {n} states")

    reverse: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for t in ideal_successors(mdp, s):
            reverse[t].append(s)

    dist = np.full(n, UNREACHABLE, dtype=np.int64)
    dist[goal] = 0
    queue = deque([goal])
    while queue:
        t = queue.popleft()
        for s in reverse[t]:
            if dist[s] == UNREACHABLE:
                dist[s] = dist[t] + 1
                queue.append(s)

    max_finite = int(dist.max())  # dist[goal] = 0 guarantees a finite max
    key = np.where(dist == UNREACHABLE, np.int64(n), dist)
    order = np.lexsort((np.arange(n, dtype=np.int64), key)).astype(np.int64)
    dist.setflags(write=False)
    order.setflags(write=False)
    return DistanceMap(goal=int(goal), dist=dist, max_finite=max_finite, sweep_order=order)
