"""Discrete particle swarm engine for Steiner tree construction.

Procedure:
  1. sort and deduplicate the net's pins
  2. build the initial swarm: random spanning trees plus one MST elite
  3. evaluate every particle; personal bests start as the particles
  4. per iteration, update w, c1, c2 linearly and pick the transformation
     mode of the current stage
  5. move every particle with the discrete velocity update
  6. re-evaluate; personal and global bests move on strict improvement only
  7. stop after the configured number of iterations

Selection minimises routed length. The fitness 1/(L+1) is reported only.
"""

import logging
import os
import time
from dataclasses import asdict, dataclass, field, replace
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv
from joblib import Parallel, delayed

from pipeline.encoding import (
    Net,
    Particle,
    RoutingMode,
    evaluate,
    mst_spanning_tree,
    prepare_net,
    random_spanning_tree,
)
from pipeline.operators import TransformMode, apply_velocity

load_dotenv()

logger = logging.getLogger(__name__)

MAX_STAGES = 6

Observer = Callable[[int, float, float, float, TransformMode, float], None]


def default_seed() -> int:
    return int(os.getenv('STEINER_SEED', '1'))


def default_threads() -> int:
    return max(1, int(os.getenv('STEINER_THREADS', '1')))


def fitness(length: float) -> float:
    """Reported fitness 1 / (L + 1)."""
    if length < 0:
        raise ValueError(f'length must be non-negative, got {length}')
    return 1.0 / (length + 1.0)


def schedule(start: float, end: float, eval: int, evaluations: int) -> float:
    """Linear schedule from `start` (eval 0) to `end` (eval == evaluations)."""
    return start - (start - end) * eval / evaluations


@dataclass(frozen=True)
class StagePlan:
    """Sequence of transformation modes over equal blocks of the iteration budget."""
    stages: Tuple[TransformMode, ...]

    def __post_init__(self):
        if not 1 <= len(self.stages) <= MAX_STAGES:
            raise ValueError(f'a stage plan has 1..{MAX_STAGES} stages, got {len(self.stages)}')

    @property
    def label(self) -> str:
        return ','.join(m.value for m in self.stages)

    @classmethod
    def enumerate(cls, depth: int) -> List[Tuple[str, 'StagePlan']]:
        """All 2^depth plans as (CMi, plan), E before PS in every position."""
        if not 1 <= depth <= MAX_STAGES:
            raise ValueError(f'depth must be in 1..{MAX_STAGES}, got {depth}')
        combos = product((TransformMode.E, TransformMode.PS), repeat=depth)
        return [(f'CM{i}', cls(tuple(c))) for i, c in enumerate(combos, start=1)]

    @classmethod
    def parse(cls, text: str, depth: int = 4) -> 'StagePlan':
        """Parse 'E,PS,E,PS', 'E:PS' or a CM alias such as 'CM6' (at `depth`)."""
        text = text.strip()
        if text.upper().startswith('CM'):
            plans = dict(cls.enumerate(depth))
            try:
                return plans[text.upper()]
            except KeyError:
                raise ValueError(f'{text!r} is not one of CM1..CM{len(plans)} at depth {depth}') from None
        parts = [t for t in text.replace(':', ',').split(',') if t.strip()]
        if not parts:
            raise ValueError('empty stage plan')
        return cls(tuple(TransformMode.parse(t) for t in parts))


CM6 = StagePlan((TransformMode.E, TransformMode.PS, TransformMode.E, TransformMode.PS))


def stage_mode(plan: StagePlan, eval: int, evaluations: int) -> TransformMode:
    """Mode of the block containing `eval`; the last block absorbs the remainder."""
    count = len(plan.stages)
    return plan.stages[min(eval * count // evaluations, count - 1)]


@dataclass(frozen=True)
class RunConfig:
    population: int = 50
    evaluations: int = 500
    w_start: float = 0.95
    w_end: float = 0.4
    c1_start: float = 0.82
    c1_end: float = 0.5
    c2_start: float = 0.4
    c2_end: float = 0.83
    mutation_points: int = 2
    mode: RoutingMode = RoutingMode.XARCH
    seed: int = field(default_factory=default_seed)
    stage_plan: StagePlan = CM6
    inherit_from_guide: bool = False
    mst_elite: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.population < 2:
            raise ValueError(f'population must be >= 2, got {self.population}')
        if self.evaluations < 1:
            raise ValueError(f'evaluations must be >= 1, got {self.evaluations}')
        if self.mutation_points < 1:
            raise ValueError(f'mutation points must be >= 1, got {self.mutation_points}')
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        for name in ('w_start', 'w_end', 'c1_start', 'c1_end', 'c2_start', 'c2_end'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f'{name} must lie in [0, 1], got {value}')

    def to_dict(self) -> Dict:
        d = asdict(self)
        d['mode'] = self.mode.value
        d['stage_plan'] = self.stage_plan.label
        return d

    @classmethod
    def from_dict(cls, d: Dict) -> 'RunConfig':
        d = dict(d)
        if 'mode' in d:
            d['mode'] = RoutingMode.parse(d['mode'])
        if 'stage_plan' in d:
            d['stage_plan'] = StagePlan.parse(d['stage_plan'])
        return cls(**d)


@dataclass
class SwarmState:
    particles: List[Particle]
    pbest: List[Particle]
    gbest: Particle
    iteration: int = 0
    history: List[float] = field(default_factory=list)


@dataclass(frozen=True)
class RunResult:
    net: Net
    best: Particle
    best_length: float
    fitness: float
    history: Tuple[float, ...]
    seed: int
    config: Dict = field(compare=False)
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class Stats:
    best: float
    mean: float
    stddev: float
    lengths: Tuple[float, ...]
    runtimes: Tuple[float, ...] = field(compare=False)
    results: Tuple[RunResult, ...] = field(compare=False)


def _stream(seed: int, iteration: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, iteration, index])


def initial_swarm(net: Net, cfg: RunConfig) -> List[Particle]:
    """Random spanning trees, the last slot taken by the distance-MST elite."""
    count = cfg.population - 1 if cfg.mst_elite else cfg.population
    swarm = [random_spanning_tree(net, cfg.mode, _stream(cfg.seed, 0, i)) for i in range(count)]
    if cfg.mst_elite:
        swarm.append(mst_spanning_tree(net, cfg.mode))
    return [evaluate(net, p) for p in swarm]


def _best_index(particles: List[Particle]) -> int:
    best = 0
    for i, p in enumerate(particles):
        if p.length < particles[best].length:
            best = i
    return best


def run(net: Net, cfg: RunConfig, observer: Optional[Observer] = None, threads: int = 1) -> RunResult:
    """Run the swarm on `net` and return the best tree found.

    The same config (seed included) always yields the same result,
    independent of `threads`.
    """
    started = time.perf_counter()
    net = prepare_net(net)
    particles = initial_swarm(net, cfg)
    state = SwarmState(particles=particles, pbest=list(particles),
                       gbest=particles[_best_index(particles)])

    def step(i: int, it: int, w: float, c1: float, c2: float, mode: TransformMode, gbest: Particle) -> Particle:
        moved = apply_velocity(
            state.particles[i], state.pbest[i], gbest, w, c1, c2, mode,
            cfg.mutation_points, net, cfg.mode, _stream(cfg.seed, it + 1, i),
            cfg.inherit_from_guide,
        )
        return evaluate(net, moved)

    pool = Parallel(n_jobs=threads, prefer='threads') if threads > 1 else None
    for it in range(cfg.evaluations):
        w = schedule(cfg.w_start, cfg.w_end, it, cfg.evaluations)
        c1 = schedule(cfg.c1_start, cfg.c1_end, it, cfg.evaluations)
        c2 = schedule(cfg.c2_start, cfg.c2_end, it, cfg.evaluations)
        mode = stage_mode(cfg.stage_plan, it, cfg.evaluations)
        gbest = state.gbest
        indices = range(cfg.population)
        if pool is None:
            moved = [step(i, it, w, c1, c2, mode, gbest) for i in indices]
        else:
            moved = pool(delayed(step)(i, it, w, c1, c2, mode, gbest) for i in indices)

        state.particles = list(moved)
        for i, p in enumerate(state.particles):
            if p.length < state.pbest[i].length:
                state.pbest[i] = p
        candidate = state.pbest[_best_index(state.pbest)]
        if candidate.length < state.gbest.length:
            state.gbest = candidate
        state.iteration = it + 1
        state.history.append(state.gbest.length)
        logger.debug('iter %d mode=%s w=%.3f c1=%.3f c2=%.3f best=%.4f',
                     it, mode.value, w, c1, c2, state.gbest.length)
        if observer is not None:
            observer(it, w, c1, c2, mode, state.gbest.length)

    elapsed = time.perf_counter() - started
    best = state.gbest
    logger.info('net %s (%d pins, %s): best length %.4f after %d iterations in %.2fs',
                net.name, net.n, cfg.mode.value, best.length, cfg.evaluations, elapsed)
    return RunResult(
        net=net,
        best=best,
        best_length=best.length,
        fitness=fitness(best.length),
        history=tuple(state.history),
        seed=cfg.seed,
        config=cfg.to_dict(),
        wall_time=elapsed,
    )


def run_many(net: Net, cfg: RunConfig, repeats: int, threads: int = 1) -> Stats:
    """Repeat `run` with seeds cfg.seed + i and aggregate best lengths."""
    if repeats < 1:
        raise ValueError(f'repeats must be >= 1, got {repeats}')
    configs = [replace(cfg, seed=cfg.seed + i) for i in range(repeats)]
    if threads > 1:
        results = Parallel(n_jobs=threads, prefer='threads')(delayed(run)(net, c) for c in configs)
    else:
        results = [run(net, c) for c in configs]
    lengths = np.array([r.best_length for r in results], dtype=float)
    return Stats(
        best=float(lengths.min()),
        mean=float(lengths.mean()),
        stddev=float(lengths.std()),
        lengths=tuple(float(x) for x in lengths),
        runtimes=tuple(r.wall_time for r in results),
        results=tuple(results),
    )
