"""Brute-force set oracles for the grid-region algebra.

Regions are materialized as boolean membership grids over an explicit box,
twice the generator range so closures and fattenings never hit the rim.
Everything here works on raw grids and shares no code with the library.
"""

from __future__ import annotations

import math

import numpy as np

BOX = 64
SIZE = 2 * BOX


def grid_of(points, size: int = SIZE) -> np.ndarray:
    """Membership grid of the up-right closure of ``points``."""
    g = np.zeros((size, size), dtype=bool)
    for i, y in points:
        g[i:, y:] = True
    return g


def grid_generators(g: np.ndarray) -> list[tuple[int, int]]:
    """Pareto-minimal members: left and down neighbours both outside."""
    pad = np.zeros((g.shape[0] + 1, g.shape[1] + 1), dtype=bool)
    pad[1:, 1:] = g
    keep = g & ~pad[:-1, 1:] & ~pad[1:, :-1]
    return [(int(i), int(y)) for i, y in np.argwhere(keep)]


def grid_x_graph(g: np.ndarray) -> list[float]:
    """Least row per column; math.inf where the column misses the region."""
    out: list[float] = []
    for column in g:
        rows = np.nonzero(column)[0]
        out.append(int(rows[0]) if rows.size else math.inf)
    return out


def _dilate(g: np.ndarray) -> np.ndarray:
    # Chebyshev ball of radius one, separably: rows first, then columns.
    h = g.copy()
    h[1:, :] |= g[:-1, :]
    h[:-1, :] |= g[1:, :]
    out = h.copy()
    out[:, 1:] |= h[:, :-1]
    out[:, :-1] |= h[:, 1:]
    return out


def fattening_eps(src: np.ndarray, dst: np.ndarray) -> int | float:
    """Least eps whose dst-fattening covers src, by literal dilation."""
    if not src.any():
        return 0
    if not dst.any():
        return math.inf
    fat = dst.copy()
    eps = 0
    while (src & ~fat).any():
        fat = _dilate(fat)
        eps += 1
    return eps


def grid_closeness(a_pts, b_pts) -> tuple[int | float, int | float]:
    a, b = grid_of(a_pts), grid_of(b_pts)
    return fattening_eps(a, b), fattening_eps(b, a)


def point_region_dist(q, region_pts, size: int = SIZE) -> int | float:
    """Chebyshev distance from a point to the closure, member by member."""
    members = np.argwhere(grid_of(region_pts, size))
    if not members.size:
        return math.inf
    return int(np.abs(members - np.asarray(q)).max(axis=1).min())
