"""Shipped office-corridor navigation layouts.

Each layout is a central horizontal corridor with rooms above and below,
reached through single-door wall rows; room blocks are separated by wall
columns the corridor passes through. Four sizes ship (free-cell counts in
parentheses): A (55), B (191), C (514), D (961). The goal sits in the
top-left room, far from most of the map, which is what gives the
goal-outward and skip-test solvers something to exploit.
"""
from __future__ import annotations

from .problems import NOISE_PROFILES, GridSpec, NoiseProfile

# name -> (rooms per side, room width, room height)
LAYOUT_PARAMS = {
    "A": (3, 3, 2),
    "B": (5, 5, 3),
    "C": (9, 6, 4),
    "D": (12, 7, 5),
}


def office_layout(rooms_per_side: int, room_w: int, room_h: int,
                  noise: NoiseProfile) -> GridSpec:
    """Corridor-and-rooms grid: rooms_per_side rooms of room_w x room_h on
    each side of the corridor, each opened by one door cell."""
    width = rooms_per_side * (room_w + 1) + 1
    height = 2 * room_h + 3
    corridor = room_h + 1
    walls = set()
    for i in range(rooms_per_side + 1):
        col = i * (room_w + 1)
        walls.update((r, col) for r in range(height) if r != corridor)
    door_cols = {i * (room_w + 1) + 1 + room_w // 2 for i in range(rooms_per_side)}
    for door_row in (corridor - 1, corridor + 1):
        walls.update((door_row, c) for c in range(width) if c not in door_cols)
    return GridSpec(width=width, height=height, walls=frozenset(walls),
                    goal_cell=(0, 1), noise=noise)


def layout_names() -> tuple[str, ...]:
    return tuple(LAYOUT_PARAMS)


def layout(name: str, noise: str = "standard") -> GridSpec:
    """One of the shipped layouts A-D with the named noise profile."""
    if name not in LAYOUT_PARAMS:
        raise ValueError(f"unknown layout {name!r} (have {', '.join(LAYOUT_PARAMS)})")
    if noise not in NOISE_PROFILES:
        raise ValueError(f"unknown noise profile {noise!r} (have {', '.join(NOISE_PROFILES)})")
    rooms, room_w, room_h = LAYOUT_PARAMS[name]
    return office_layout(rooms, room_w, room_h, NOISE_PROFILES[noise])
