"""Brute-force reference solutions.

These are deliberately independent of `pipeline.geometry`: edges are routed
and overlaps removed with separate code so the engine can be checked
against them. Only the Point type is shared.

  exact_rsmt           exact rectilinear SMT via Hanan-grid Steiner subsets
  best_in_space_xsmt   best tree in the particle search space (all spanning
                       trees x all PS-choice vectors)
  pairwise_union_length  O(k^2) interval union by pairwise subtraction
  reference_mst_length   networkx MST of the complete pin graph
"""

import math
from collections import defaultdict
from itertools import combinations, product
from typing import Dict, Iterable, List, Sequence, Tuple

import networkx as nx

from pipeline.geometry import Point

EXACT_RSMT_MAX_PINS = 6
BEST_IN_SPACE_MAX_PINS = 5

_ROOT2 = math.sqrt(2.0)


def hanan_grid(pins: Sequence[Point]) -> List[Point]:
    xs = sorted({p.x for p in pins})
    ys = sorted({p.y for p in pins})
    return [Point(x, y) for x in xs for y in ys]


def _manhattan_mst(points: Sequence[Point]) -> int:
    """Prim's algorithm on the complete Manhattan graph, O(m^2)."""
    m = len(points)
    if m < 2:
        return 0
    inf = float('inf')
    dist = [inf] * m
    used = [False] * m
    dist[0] = 0
    total = 0
    for _ in range(m):
        u = -1
        for i in range(m):
            if not used[i] and (u < 0 or dist[i] < dist[u]):
                u = i
        used[u] = True
        total += dist[u]
        pu = points[u]
        for i in range(m):
            if not used[i]:
                d = abs(points[i].x - pu.x) + abs(points[i].y - pu.y)
                if d < dist[i]:
                    dist[i] = d
    return total


def exact_rsmt(net) -> float:
    """Exact rectilinear Steiner minimal tree length for nets of <= 6 pins.

    Minimum over Steiner subsets S of the Hanan grid (|S| <= n-2) of the
    Manhattan MST over pins + S.
    """
    pins = list(dict.fromkeys(net.pins))
    n = len(pins)
    if n > EXACT_RSMT_MAX_PINS:
        raise ValueError(f'exact_rsmt supports at most {EXACT_RSMT_MAX_PINS} pins, got {n}')
    pin_set = set(pins)
    candidates = [p for p in hanan_grid(pins) if p not in pin_set]
    best = _manhattan_mst(pins)
    for k in range(1, max(0, n - 2) + 1):
        for steiner in combinations(candidates, k):
            length = _manhattan_mst(pins + list(steiner))
            if length < best:
                best = length
    return float(best)


def _route(a: Point, b: Point, choice: int) -> List[Tuple[Point, Point]]:
    """Two-leg octilinear route of (a, b); legs as point pairs."""
    if (b.x, b.y) < (a.x, a.y):
        a, b = b, a
    dx = b.x - a.x
    dy = b.y - a.y
    if dx == 0 or dy == 0 or dx == abs(dy):
        return [(a, b)]
    sy = 1 if dy > 0 else -1
    if dx >= abs(dy):
        straight = (dx - abs(dy), 0)
        slanted = (abs(dy), dy)
    else:
        straight = (0, dy - sy * dx)
        slanted = (dx, sy * dx)
    if choice == 0:
        bend = Point(a.x + straight[0], a.y + straight[1])
    elif choice == 1:
        bend = Point(a.x + slanted[0], a.y + slanted[1])
    elif choice == 2:
        bend = Point(a.x, b.y)
    else:
        bend = Point(b.x, a.y)
    return [(a, bend), (bend, b)]


def _leg_key(p: Point, q: Point) -> Tuple[str, int, int, int]:
    if p.y == q.y:
        return ('H', p.y, min(p.x, q.x), max(p.x, q.x))
    if p.x == q.x:
        return ('V', p.x, min(p.y, q.y), max(p.y, q.y))
    if (q.y - p.y) == (q.x - p.x):
        return ('D45', p.y - p.x, min(p.x, q.x), max(p.x, q.x))
    return ('D135', p.y + p.x, min(p.x, q.x), max(p.x, q.x))


def _subtract(pieces: List[Tuple[int, int]], lo: int, hi: int) -> List[Tuple[int, int]]:
    out = []
    for a, b in pieces:
        if hi <= a or lo >= b:
            out.append((a, b))
            continue
        if a < lo:
            out.append((a, lo))
        if hi < b:
            out.append((hi, b))
    return out


def _pairwise_measure(keyed: Iterable[Tuple[str, int, int, int]]) -> float:
    lines: Dict[Tuple[str, int], List[Tuple[int, int]]] = defaultdict(list)
    for kind, key, lo, hi in keyed:
        if hi > lo:
            lines[(kind, key)].append((lo, hi))
    total = 0.0
    for (kind, _), intervals in lines.items():
        measure = 0
        for i, (lo, hi) in enumerate(intervals):
            pieces = [(lo, hi)]
            for plo, phi in intervals[:i]:
                pieces = _subtract(pieces, plo, phi)
            measure += sum(b - a for a, b in pieces)
        total += measure * (_ROOT2 if kind in ('D45', 'D135') else 1.0)
    return total


def pairwise_union_length(segments) -> float:
    """Union length of geometry segments by pairwise subtraction."""
    return _pairwise_measure(
        (s.orientation.value, s.line_key, s.lo, s.hi) for s in segments)


def _spanning_trees(n: int):
    pairs = list(combinations(range(1, n + 1), 2))
    for chosen in combinations(pairs, n - 1):
        label = list(range(n + 1))
        ok = True
        for u, v in chosen:
            lu, lv = label[u], label[v]
            if lu == lv:
                ok = False
                break
            label = [lu if x == lv else x for x in label]
        if ok:
            yield chosen


def best_in_space_xsmt(net, mode) -> float:
    """Shortest routed tree over every spanning tree and PS-choice vector.

    `mode` supplies the allowed choice digits (mode.choices). Nets of at most
    5 pins.
    """
    pins = list(net.pins)
    n = len(pins)
    if n > BEST_IN_SPACE_MAX_PINS:
        raise ValueError(f'best_in_space_xsmt supports at most {BEST_IN_SPACE_MAX_PINS} pins, got {n}')
    choices = [int(c) for c in mode.choices]
    best = float('inf')
    for tree in _spanning_trees(n):
        legs = [
            {c: [_leg_key(p, q) for p, q in _route(pins[u - 1], pins[v - 1], c)] for c in choices}
            for u, v in tree
        ]
        for vector in product(choices, repeat=len(tree)):
            keyed = [k for i, c in enumerate(vector) for k in legs[i][c]]
            length = _pairwise_measure(keyed)
            if length < best:
                best = length
    return best


def reference_mst_length(net, metric: str = 'manhattan') -> float:
    """MST length of the complete pin graph computed with networkx."""
    g = nx.Graph()
    pins = list(net.pins)
    for i, j in combinations(range(len(pins)), 2):
        dx = abs(pins[i].x - pins[j].x)
        dy = abs(pins[i].y - pins[j].y)
        if metric == 'manhattan':
            w = dx + dy
        elif metric == 'octilinear':
            w = max(dx, dy) + (_ROOT2 - 1.0) * min(dx, dy)
        else:
            raise ValueError(f'unknown metric {metric!r}')
        g.add_edge(i, j, weight=w)
    mst = nx.minimum_spanning_tree(g, weight='weight')
    return float(sum(d['weight'] for _, _, d in mst.edges(data=True)))


def probe_property6(net) -> Dict[str, float]:
    """Compare the rectilinear particle space against the exact RSMT."""
    from pipeline.encoding import RoutingMode

    in_space = best_in_space_xsmt(net, RoutingMode.RECTILINEAR)
    exact = exact_rsmt(net)
    return {'best_in_space': in_space, 'exact_rsmt': exact, 'gap': in_space - exact}
