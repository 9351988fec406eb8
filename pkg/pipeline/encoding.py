"""Edge-vertex particle encoding.

A candidate routing tree over an n-pin net is a spanning tree written as
n-1 edges, each edge carrying the PS choice that routes it. The text form is
the flat numeric string

    u1 v1 c1 u2 v2 c2 ... fitness

with 1-based pin indices, i.e. 3(n-1)+1 numbers.

This module also holds the union-find used to keep every operator output a
spanning tree, and the two initial-population builders (random tree and
distance MST).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from pipeline.geometry import (
    Point,
    PsChoice,
    expand_edge,
    manhattan_distance,
    octilinear_distance,
    union_length,
)

logger = logging.getLogger(__name__)

COORD_MIN = -(2 ** 31)
COORD_MAX = 2 ** 31 - 1


class InvalidTreeError(RuntimeError):
    """An edge list that should be a spanning tree is not one."""


class ParticleFormatError(ValueError):
    """Malformed particle text."""


class RoutingMode(Enum):
    RECTILINEAR = 'rect'
    XARCH = 'x'
    XARCH_TWO_CHOICE = 'x2'

    @property
    def choices(self) -> Tuple[PsChoice, ...]:
        if self is RoutingMode.RECTILINEAR:
            return (PsChoice.C2, PsChoice.C3)
        if self is RoutingMode.XARCH_TWO_CHOICE:
            return (PsChoice.C0, PsChoice.C1)
        return (PsChoice.C0, PsChoice.C1, PsChoice.C2, PsChoice.C3)

    def distance(self, a: Point, b: Point) -> float:
        if self is RoutingMode.RECTILINEAR:
            return manhattan_distance(a, b)
        return octilinear_distance(a, b)

    @classmethod
    def parse(cls, text: str) -> 'RoutingMode':
        aliases = {
            'rect': cls.RECTILINEAR, 'rectilinear': cls.RECTILINEAR, 'rsmt': cls.RECTILINEAR,
            'x': cls.XARCH, 'xarch': cls.XARCH, 'xsmt': cls.XARCH,
            'x2': cls.XARCH_TWO_CHOICE,
        }
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f'unknown routing mode {text!r} (expected rect, x or x2)') from None


@dataclass(frozen=True)
class Net:
    pins: Tuple[Point, ...]
    name: str = 'net'
    duplicates_dropped: int = field(default=0, compare=False)

    @classmethod
    def from_points(cls, name: str, points: Iterable[Tuple[int, int]]) -> 'Net':
        """Build a net, dropping repeated pins (first occurrence wins)."""
        seen = set()
        pins: List[Point] = []
        dropped = 0
        for x, y in points:
            p = Point(int(x), int(y))
            if not (COORD_MIN <= p.x <= COORD_MAX and COORD_MIN <= p.y <= COORD_MAX):
                raise ValueError(f'pin {p} is outside the 32-bit coordinate range')
            if p in seen:
                dropped += 1
                continue
            seen.add(p)
            pins.append(p)
        if len(pins) < 2:
            raise ValueError(f'net {name!r} needs at least 2 distinct pins, got {len(pins)}')
        if dropped:
            logger.warning('net %s: dropped %d duplicate pin(s)', name, dropped)
        return cls(tuple(pins), name, dropped)

    @property
    def n(self) -> int:
        return len(self.pins)

    def pin(self, index: int) -> Point:
        return self.pins[index - 1]


class Edge(NamedTuple):
    u: int
    v: int
    choice: PsChoice

    def key(self) -> Tuple[int, int]:
        """Orientation-free identity of the edge (min index first)."""
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def canonical(self) -> 'Edge':
        u, v = self.key()
        return Edge(u, v, self.choice)


@dataclass(frozen=True)
class Particle:
    """A routing tree candidate.

    `length` is None until the particle has been evaluated against its net;
    every operator returns particles with the cache cleared.
    """
    edges: Tuple[Edge, ...]
    length: Optional[float] = None
    recorded_fitness: Optional[float] = field(default=None, compare=False)

    @property
    def fitness(self) -> Optional[float]:
        if self.length is None:
            return None
        from pipeline.engine import fitness
        return fitness(self.length)

    def edge_keys(self) -> List[Tuple[int, int]]:
        return sorted(e.key() for e in self.edges)


class UnionFind:
    """Disjoint sets over pin indices 1..n (path halving, union by size)."""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False when they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


def validate(net: Net, p: Particle) -> bool:
    """True iff p's edges form a spanning tree over all pins of net."""
    n = net.n
    if len(p.edges) != n - 1:
        return False
    uf = UnionFind(n)
    for e in p.edges:
        if not (1 <= e.u <= n and 1 <= e.v <= n) or e.u == e.v:
            return False
        if not uf.union(e.u, e.v):
            return False
    return uf.components == 1


def in_domain(p: Particle, mode: RoutingMode) -> bool:
    allowed = set(mode.choices)
    return all(e.choice in allowed for e in p.edges)


def random_choice(mode: RoutingMode, rng: np.random.Generator) -> PsChoice:
    choices = mode.choices
    return choices[int(rng.integers(len(choices)))]


def random_spanning_tree(net: Net, mode: RoutingMode, rng: np.random.Generator) -> Particle:
    """Random tree: sample pin pairs, keep those that join two components."""
    n = net.n
    uf = UnionFind(n)
    edges: List[Edge] = []
    while len(edges) < n - 1:
        u = int(rng.integers(1, n + 1))
        v = int(rng.integers(1, n + 1))
        if u != v and uf.union(u, v):
            edges.append(Edge(u, v, random_choice(mode, rng)))
    return Particle(tuple(edges))


def mst_spanning_tree(net: Net, mode: RoutingMode, refine: bool = True) -> Particle:
    """Kruskal MST under the mode's distance (Manhattan or octilinear).

    Ties are broken by (u, v). With `refine`, each edge in turn then takes the
    PS choice that gives the shortest routed tree.
    """
    n = net.n
    pairs = sorted(
        (mode.distance(net.pin(u), net.pin(v)), u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
    )
    uf = UnionFind(n)
    default = mode.choices[0]
    edges: List[Edge] = []
    for _, u, v in pairs:
        if uf.union(u, v):
            edges.append(Edge(u, v, default))
            if len(edges) == n - 1:
                break
    if refine:
        edges = _refine_choices(net, edges, mode)
    return Particle(tuple(edges))


def _refine_choices(net: Net, edges: List[Edge], mode: RoutingMode) -> List[Edge]:
    routed = [
        {c: expand_edge(net.pin(e.u), net.pin(e.v), c) for c in mode.choices}
        for e in edges
    ]
    current = [e.choice for e in edges]
    for i in range(len(edges)):
        others = [s for j, c in enumerate(current) if j != i for s in routed[j][c]]
        best_choice = current[i]
        best_len = union_length(others + routed[i][best_choice])
        for c in mode.choices:
            length = union_length(others + routed[i][c])
            if length < best_len:
                best_choice, best_len = c, length
        current[i] = best_choice
    return [Edge(e.u, e.v, c) for e, c in zip(edges, current)]


def prepare_net(net: Net) -> Net:
    """Sort pins by (x, y) and drop duplicates."""
    pins = sorted(set(net.pins))
    if len(pins) < 2:
        raise ValueError(f'net {net.name!r} needs at least 2 distinct pins, got {len(pins)}')
    return Net(tuple(pins), net.name, net.duplicates_dropped + len(net.pins) - len(pins))


def restore_pin_order(net: Net, prepared: Net, p: Particle) -> Particle:
    """Re-index a particle of `prepare_net(net)` against the pins of `net`.

    Repeated pins in `net` map to their first occurrence. Routed length does
    not depend on edge direction, so the cached length carries over.
    """
    first: Dict[Point, int] = {}
    for i, pin in enumerate(net.pins, start=1):
        first.setdefault(pin, i)
    try:
        index = [first[pin] for pin in prepared.pins]
    except KeyError as e:
        raise ValueError(f'pin {e.args[0]} of net {prepared.name!r} is not in {net.name!r}') from None
    edges = tuple(Edge(index[e.u - 1], index[e.v - 1], e.choice) for e in p.edges)
    return Particle(edges, p.length, p.recorded_fitness)


def evaluate(net: Net, p: Particle) -> Particle:
    """Return p with its routed length cached."""
    if p.length is not None:
        return p
    from pipeline.geometry import tree_length
    return Particle(p.edges, tree_length(net, p))


def serialize(p: Particle) -> str:
    """Flat numeric string 'u v c ... fitness' (fitness to 4 decimals).

    Needs either an evaluated particle or one parsed with a recorded fitness.
    """
    fit = p.fitness
    if fit is None:
        fit = p.recorded_fitness
    if fit is None:
        raise ValueError('particle has no length or recorded fitness; evaluate it first')
    tokens = [f'{e.u} {e.v} {int(e.choice)}' for e in p.edges]
    tokens.append(f'{fit:.4f}')
    return ' '.join(tokens)


def parse(text: str, n: Optional[int] = None) -> Particle:
    """Parse the flat numeric particle string.

    `n` (pin count) is optional; without it the pin count is inferred from the
    token count. Raises ParticleFormatError on a wrong token count, on
    non-numeric tokens and on out-of-range indices or choice digits.
    """
    tokens = text.split()
    if len(tokens) < 4 or (len(tokens) - 1) % 3 != 0:
        raise ParticleFormatError(f'expected 3(n-1)+1 numbers, got {len(tokens)}')
    inferred = (len(tokens) - 1) // 3 + 1
    if n is not None and inferred != n:
        raise ParticleFormatError(
            f'expected {3 * (n - 1) + 1} numbers for {n} pins, got {len(tokens)}')
    try:
        numbers = [int(t) for t in tokens[:-1]]
        recorded = float(tokens[-1])
    except ValueError as e:
        raise ParticleFormatError(f'non-numeric token in particle: {e}') from None
    edges: List[Edge] = []
    for i in range(0, len(numbers), 3):
        u, v, c = numbers[i:i + 3]
        if not (1 <= u <= inferred and 1 <= v <= inferred):
            raise ParticleFormatError(f'edge {i // 3 + 1}: pin index out of range 1..{inferred}')
        if c not in (0, 1, 2, 3):
            raise ParticleFormatError(f'edge {i // 3 + 1}: choice digit {c} not in 0..3')
        edges.append(Edge(u, v, PsChoice(c)))
    return Particle(tuple(edges), recorded_fitness=recorded)
