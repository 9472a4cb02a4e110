"""Tiny hand-checkable goal-directed MDPs used throughout the tests.

chain3: a deterministic 3-state walk toward the goal
    s2 --move--> s1 --move--> g (move self-loops at g)
    optimal values at discount 0.9: g=1, s1=0.9, s2=0.81, done=0.

split: one state with a risky move
    s0 --move--> g with 0.7, back to s0 with 0.3 (move self-loops at g)
    optimal value at s0 and discount 0.9: 0.63 / 0.73.
"""
from __future__ import annotations

from .problems import GoalDirectedMdp, make_goal_directed

# state indices before the done state is appended
CHAIN3_G, CHAIN3_S1, CHAIN3_S2, CHAIN3_DONE = 0, 1, 2, 3
SPLIT_G, SPLIT_S0, SPLIT_DONE = 0, 1, 2


def chain3(discount: float = 0.9) -> GoalDirectedMdp:
    transitions = [
        [[(CHAIN3_G, 1.0)]],   # g: move stays
        [[(CHAIN3_G, 1.0)]],   # s1: move to g
        [[(CHAIN3_S1, 1.0)]],  # s2: move to s1
    ]
    return make_goal_directed(3, 1, transitions, CHAIN3_G, discount)


def split(discount: float = 0.9) -> GoalDirectedMdp:
    transitions = [
        [[(SPLIT_G, 1.0)]],                   # g: move stays
        [[(SPLIT_G, 0.7), (SPLIT_S0, 0.3)]],  # s0: risky move
    ]
    return make_goal_directed(2, 1, transitions, SPLIT_G, discount)
