"""Genetic update operators for the discrete swarm.

Two operator families, each usable in one of two transformation modes:

  PS  only PS-choice digits change; the tree topology is kept.
  E   edges may be replaced, so the topology changes too. Every intermediate
      edge set is guarded by a union-find so outputs stay spanning trees.

The discrete velocity update chains mutation, crossover with the personal
best and crossover with the global best, each behind its own probability gate.
"""

import logging
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from pipeline.encoding import (
    Edge,
    Net,
    Particle,
    RoutingMode,
    UnionFind,
    random_choice,
)

logger = logging.getLogger(__name__)


class TransformMode(Enum):
    PS = 'PS'
    E = 'E'

    @classmethod
    def parse(cls, text: str) -> 'TransformMode':
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f'unknown transformation {text!r} (expected PS or E)') from None


def mutate(
    p: Particle,
    mode: TransformMode,
    k: int,
    net: Net,
    rmode: RoutingMode,
    rng: np.random.Generator,
) -> Particle:
    """k-point mutation: k sequential single-edge changes.

    E mode deletes a random edge and reconnects the two resulting components
    with a random new edge. PS mode resamples one edge's PS choice.
    """
    if k < 1:
        raise ValueError(f'mutation points must be >= 1, got {k}')
    edges = list(p.edges)
    n = net.n
    for _ in range(k):
        r = int(rng.integers(len(edges)))
        if mode is TransformMode.PS:
            e = edges[r]
            edges[r] = Edge(e.u, e.v, random_choice(rmode, rng))
            continue
        uf = UnionFind(n)
        for i, e in enumerate(edges):
            if i != r:
                uf.union(e.u, e.v)
        while True:
            p1 = int(rng.integers(1, n + 1))
            p2 = int(rng.integers(1, n + 1))
            if uf.find(p1) != uf.find(p2):
                break
        edges[r] = Edge(p1, p2, random_choice(rmode, rng))
    return Particle(tuple(edges))


def crossover(
    p: Particle,
    guide: Particle,
    mode: TransformMode,
    net: Net,
    rmode: RoutingMode,
    rng: np.random.Generator,
    inherit_from_guide: bool = False,
) -> Particle:
    """Recombine p with a guide particle (its personal or the global best).

    E mode keeps the edges both parents share, then completes the tree with
    edges drawn at random from the parents' symmetric difference, skipping
    any that would close a cycle. PS mode keeps p's topology and, for every
    edge the guide also has, adopts the guide's choice with probability 1/2.
    """
    guide_choice: Dict[Tuple[int, int], Edge] = {e.key(): e for e in guide.edges}
    if mode is TransformMode.PS:
        child: List[Edge] = []
        for e in p.edges:
            g = guide_choice.get(e.key())
            if g is not None and rng.random() < 0.5:
                e = Edge(e.u, e.v, g.choice)
            child.append(e)
        return Particle(tuple(child))

    own = sorted(e.canonical() for e in p.edges)
    other = sorted(e.canonical() for e in guide.edges)
    own_keys = {e.key() for e in own}
    other_keys = {e.key() for e in other}

    set1 = [guide_choice[e.key()].canonical() if inherit_from_guide else e
            for e in own if e.key() in other_keys]
    set2 = [e for e in own if e.key() not in other_keys]
    set2 += [e for e in other if e.key() not in own_keys]

    n = net.n
    uf = UnionFind(n)
    child = []
    for e in set1:
        uf.union(e.u, e.v)
        child.append(e)
    # Rejected draws stay rejected once their endpoints are joined, so a walk
    # over a random permutation accepts the same edges as repeated draws.
    for idx in rng.permutation(len(set2)):
        if len(child) == n - 1:
            break
        e = set2[int(idx)]
        if uf.union(e.u, e.v):
            child.append(e)
    return Particle(tuple(child))


def apply_velocity(
    p: Particle,
    pbest: Particle,
    gbest: Particle,
    w: float,
    c1: float,
    c2: float,
    mode: TransformMode,
    k: int,
    net: Net,
    rmode: RoutingMode,
    rng: np.random.Generator,
    inherit_from_guide: bool = False,
) -> Particle:
    """Discrete position update: gbest-crossover(pbest-crossover(mutation(p))).

    r1, r2, r3 are drawn up front; mutation runs iff r1 < w, the pbest
    crossover iff r2 < c1 and the gbest crossover iff r3 < c2.
    """
    r1, r2, r3 = rng.random(3)
    x = p
    if r1 < w:
        x = mutate(x, mode, k, net, rmode, rng)
    if r2 < c1:
        x = crossover(x, pbest, mode, net, rmode, rng, inherit_from_guide)
    if r3 < c2:
        x = crossover(x, gbest, mode, net, rmode, rng, inherit_from_guide)
    return x
