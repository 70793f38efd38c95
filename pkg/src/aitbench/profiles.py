"""Exact algebra of upwards-and-rightwards-closed subsets of the grid.

A profile is a region of pairs (i, psi) in N x N closed under increasing
either coordinate.  It is stored canonically by its generator antichain:
the Pareto-minimal points, sorted by i.  A point belongs to the region iff
some generator is coordinatewise below it, so membership is O(#generators)
and equal regions compare equal structurally.

Closeness is the least eps such that one region sits inside the other's
eps-neighbourhood under the max metric; it reduces to a max-min over the
two antichains, with infinity when the target region is empty.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import EmptyProfile, MalformedCode

Point = tuple[int, int]


def _canonical(points) -> tuple[Point, ...]:
    pts = sorted(set((int(i), int(y)) for i, y in points))
    if any(i < 0 or y < 0 for i, y in pts):
        raise ValueError("profile points must be nonnegative")
    # sorted by (i, psi): a point is dominated iff some earlier kept point
    # has psi <= its psi (its i is <= by sort order)
    keep: list[Point] = []
    best = math.inf
    for i, y in pts:
        if y < best:
            keep.append((i, y))
            best = y
    return tuple(keep)


@dataclass(frozen=True)
class Profile:
    """Canonical antichain of generators; empty tuple = empty region."""

    generators: tuple[Point, ...]
    clipped: bool = field(default=False, compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def contains(self, i: int, psi: int) -> bool:
        return any(gi <= i and gy <= psi for gi, gy in self.generators)

    @property
    def i_min(self) -> int:
        if self.is_empty:
            raise EmptyProfile("empty profile has no minimal column")
        return self.generators[0][0]

    @property
    def psi_min(self) -> int:
        if self.is_empty:
            raise EmptyProfile("empty profile has no minimal row")
        return self.generators[-1][1]


def close(points, clipped: bool = False) -> Profile:
    """Profile generated by ``points``: their upwards-rightwards closure."""
    return Profile(_canonical(points), clipped)


EMPTY = close(())
IDENTITY = close([(0, 0)])


@dataclass(frozen=True)
class GraphFn:
    """A non-increasing step view of a profile edge.

    ``points`` gives the value on each coordinate from the first generator
    to the last; ``tail`` is the constant value from there on.  Coordinates
    before the first point are outside the region (value None, think +inf).
    """

    kind: str  # "x": psi per column i; "y": i per row psi
    points: tuple[Point, ...]
    tail: int

    def at(self, coord: int) -> int | None:
        if not self.points or coord < self.points[0][0]:
            return None
        if coord >= self.points[-1][0]:
            return self.tail
        return self.points[coord - self.points[0][0]][1]


def _step_graph(kind: str, pairs: list[Point]) -> GraphFn:
    # pairs: generator antichain viewed as (coord, other); min of `other`
    # over generators with generator coord <= queried coord
    lo = pairs[0][0]
    hi = pairs[-1][0]
    pts: list[Point] = []
    best = math.inf
    k = 0
    for c in range(lo, hi + 1):
        while k < len(pairs) and pairs[k][0] <= c:
            best = min(best, pairs[k][1])
            k += 1
        pts.append((c, int(best)))
    return GraphFn(kind, tuple(pts), pts[-1][1])


def x_graph(p: Profile) -> GraphFn:
    """Least psi per column i: psi(i) = min over generators left of i."""
    if p.is_empty:
        raise EmptyProfile("no graphs of an empty profile")
    return _step_graph("x", sorted(p.generators))


def y_graph(p: Profile) -> GraphFn:
    """Least i per row psi: i(psi) = min over generators below psi."""
    if p.is_empty:
        raise EmptyProfile("no graphs of an empty profile")
    return _step_graph("y", sorted((y, i) for i, y in p.generators))


def boundary(p: Profile, box: tuple[int, int] | None = None) -> list[Point]:
    """Region points inside ``box`` with a left or lower neighbour outside."""
    if p.is_empty:
        return []
    bi, by = box if box is not None else (
        max(i for i, _ in p.generators),
        max(y for _, y in p.generators),
    )
    out: list[Point] = []
    for i in range(p.i_min, bi + 1):
        for y in range(p.psi_min, by + 1):
            if p.contains(i, y) and not (
                p.contains(i - 1, y) and p.contains(i, y - 1)
            ):
                out.append((i, y))
    return out


def graphs(
    p: Profile, box: tuple[int, int] | None = None
) -> tuple[GraphFn, GraphFn, list[Point], list[Point]]:
    """The four edge views: X-graph, Y-graph, generators, boundary."""
    return x_graph(p), y_graph(p), list(p.generators), boundary(p, box)


def sum_profiles(a: Profile, b: Profile) -> Profile:
    """Pointwise sum region: {(i, psi+phi) : (i,psi) in a, (i,phi) in b}.

    Realized on generators: every sum point is dominated by some
    (max(ga_i, gb_i), ga_psi + gb_psi), and each of those is a sum point.
    """
    if a.is_empty or b.is_empty:
        return EMPTY
    return close(
        (max(ga[0], gb[0]), ga[1] + gb[1])
        for ga in a.generators
        for gb in b.generators
    )


def _dist_to(point: Point, b: Profile) -> int | float:
    # least max-metric distance from a point to region b; b's region is
    # up-right closed so the distance to one generator's quadrant is the
    # positive part of the coordinate deficits
    i, y = point
    return min(
        (max(gb[0] - i, gb[1] - y, 0) for gb in b.generators), default=math.inf
    )


def closeness(a: Profile, b: Profile) -> tuple[int | float, int | float]:
    """(eps_ab, eps_ba): least eps with a inside the eps-fattening of b, and
    symmetrically.  Empty fits in anything at eps 0; nothing nonempty fits
    in empty, giving math.inf."""

    def one(src: Profile, dst: Profile) -> int | float:
        if src.is_empty:
            return 0
        return max(_dist_to(g, dst) for g in src.generators)

    return one(a, b), one(b, a)


def translate(p: Profile, dy: int) -> Profile:
    """Shift the region by ``dy`` rows; rows pushed below 0 clip and flag."""
    if p.is_empty:
        return p
    clip = any(y + dy < 0 for _, y in p.generators)
    return close(((i, max(y + dy, 0)) for i, y in p.generators), clipped=clip)


def sharp_finish(p: Profile, eps: int) -> bool:
    """Whether the region's X-graph ends with a drop larger than eps.

    The drop is the height difference between the last two distinct
    X-graph values; a single-level region finishes sharply by convention
    (its one drop comes from outside the represented range).
    """
    if p.is_empty:
        raise EmptyProfile("no finish on an empty profile")
    levels = sorted({y for _, y in p.generators}, reverse=True)
    if len(levels) < 2:
        return True
    return levels[-2] - levels[-1] > eps


_GEN_TOKEN = re.compile(r"\((\d+),(\d+)\)")


def to_text(p: Profile) -> str:
    """One-line form ``gen: (i1,p1) (i2,p2) ...`` sorted by first coordinate."""
    return ("gen: " + " ".join(f"({i},{y})" for i, y in p.generators)).rstrip()


def from_text(s: str) -> Profile:
    """Invert :func:`to_text`; whitespace between generators is free."""
    head, sep, body = s.partition(":")
    if head.strip() != "gen" or not sep:
        raise MalformedCode("profile text must start with 'gen:'")
    points: list[Point] = []
    for token in body.split():
        m = _GEN_TOKEN.fullmatch(token)
        if m is None:
            raise MalformedCode(f"bad generator token {token!r}")
        points.append((int(m.group(1)), int(m.group(2))))
    return close(points)
