"""Octilinear geometry for routed pin-to-pin edges.

An edge between two pins is realised as at most two straight segments that
meet at a pseudo-Steiner (PS) point. Which two segments are used is decided
by the edge's PS choice:

  C0  rectilinear side first, then the diagonal side
  C1  diagonal side first, then the rectilinear side
  C2  vertical first, then horizontal
  C3  horizontal first, then vertical

Tree length is the measure of the union of all routed segments, so wire that
two edges share on the same line is only counted once.
"""

import math
from enum import Enum, IntEnum
from itertools import groupby
from typing import Iterable, List, NamedTuple

SQRT2 = math.sqrt(2.0)


class Point(NamedTuple):
    x: int
    y: int


class PsChoice(IntEnum):
    C0 = 0
    C1 = 1
    C2 = 2
    C3 = 3


class Orientation(Enum):
    H = 'H'
    V = 'V'
    D45 = 'D45'
    D135 = 'D135'


class Segment(NamedTuple):
    """A straight piece of wire.

    `line_key` identifies the supporting line (y for H, x for V, y-x for D45,
    y+x for D135). `lo`/`hi` is the projection interval on the x axis, except
    for V segments which project on the y axis.
    """
    orientation: Orientation
    line_key: int
    lo: int
    hi: int

    @property
    def length(self) -> float:
        span = self.hi - self.lo
        if self.orientation in (Orientation.H, Orientation.V):
            return float(span)
        return span * SQRT2


def segment_between(p: Point, q: Point) -> List[Segment]:
    """Return the single segment joining p and q, or [] when p == q.

    Raises ValueError when p and q are not on a common H, V or 45/135 line.
    """
    dx = q.x - p.x
    dy = q.y - p.y
    if dx == 0 and dy == 0:
        return []
    if dy == 0:
        return [Segment(Orientation.H, p.y, min(p.x, q.x), max(p.x, q.x))]
    if dx == 0:
        return [Segment(Orientation.V, p.x, min(p.y, q.y), max(p.y, q.y))]
    if dx == dy:
        return [Segment(Orientation.D45, p.y - p.x, min(p.x, q.x), max(p.x, q.x))]
    if dx == -dy:
        return [Segment(Orientation.D135, p.y + p.x, min(p.x, q.x), max(p.x, q.x))]
    raise ValueError(f'{p} and {q} are not on an octilinear line')


def bend_point(a: Point, b: Point, c: PsChoice) -> Point:
    """Pseudo-Steiner point of edge (a, b) under choice c.

    Expects a and b already normalised (a.x <= b.x, ties by y).
    """
    dx = b.x - a.x
    dy = b.y - a.y
    ady = abs(dy)
    s = (dy > 0) - (dy < 0)
    if c == PsChoice.C2:
        return Point(a.x, b.y)
    if c == PsChoice.C3:
        return Point(b.x, a.y)
    if c == PsChoice.C0:
        if ady <= dx:
            return Point(b.x - ady, a.y)
        return Point(a.x, b.y - s * dx)
    # C1
    if ady <= dx:
        return Point(a.x + ady, b.y)
    return Point(b.x, a.y + s * dx)


def expand_edge(a: Point, b: Point, c: PsChoice) -> List[Segment]:
    """Route the pin-to-pin edge (a, b) under PS choice c.

    Returns 0, 1 or 2 segments. Straight and pure-diagonal edges give the same
    single segment for every choice.
    """
    if (b.x, b.y) < (a.x, a.y):
        a, b = b, a
    dx = b.x - a.x
    dy = b.y - a.y
    if dx == 0 or dy == 0 or dx == abs(dy):
        return segment_between(a, b)
    s = bend_point(a, b, PsChoice(c))
    return segment_between(a, s) + segment_between(s, b)


def octilinear_distance(a: Point, b: Point) -> float:
    dx = abs(a.x - b.x)
    dy = abs(a.y - b.y)
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def manhattan_distance(a: Point, b: Point) -> float:
    return float(abs(a.x - b.x) + abs(a.y - b.y))


def _interval_union(intervals: List[Segment]) -> int:
    total = 0
    cur_lo = cur_hi = None
    for seg in sorted(intervals, key=lambda s: (s.lo, s.hi)):
        if cur_hi is None or seg.lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = seg.lo, seg.hi
        elif seg.hi > cur_hi:
            cur_hi = seg.hi
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def _line_of(seg: Segment):
    return (seg.orientation.value, seg.line_key)


def union_length(segments: Iterable[Segment]) -> float:
    """Length of the union of `segments` (overlaps on a common line count once).

    Rectilinear and diagonal measures are accumulated separately as integers;
    sqrt(2) is applied once at the end.
    """
    segs = sorted((s for s in segments if s.hi > s.lo), key=_line_of)
    straight = 0
    diagonal = 0
    for (orientation, _), group in groupby(segs, key=_line_of):
        measure = _interval_union(list(group))
        if orientation in (Orientation.H.value, Orientation.V.value):
            straight += measure
        else:
            diagonal += measure
    return float(straight) + diagonal * SQRT2


def tree_length(net, particle) -> float:
    """Routed length of `particle` over `net` (overlaps removed).

    Raises InvalidTreeError when the particle's edges are not a spanning tree
    of the net.
    """
    from pipeline.encoding import InvalidTreeError, validate

    if not validate(net, particle):
        raise InvalidTreeError(f'particle is not a spanning tree of net {net.name!r}')
    segments: List[Segment] = []
    for edge in particle.edges:
        segments.extend(expand_edge(net.pin(edge.u), net.pin(edge.v), edge.choice))
    return union_length(segments)
