"""Long-running reproductions of the benchmark experiments.

Deselected by default; run with `pytest -m slow`. Budgets are scaled down
from the published experiments, so only directions are asserted.
"""

import numpy as np
import pytest

from evaluation.evaluate import evaluate_recovery
from evaluation.oracle import exact_rsmt, pairwise_union_length, reference_mst_length
from evaluation.topology_inspector import distinct_topologies
from pipeline.encoding import RoutingMode, random_spanning_tree, validate
from pipeline.engine import RunConfig, StagePlan, run, run_many
from pipeline.geometry import Orientation, Segment, union_length
from pipeline.operators import TransformMode, apply_velocity, crossover, mutate
from tools.suite_generator import generate_random_suite

pytestmark = pytest.mark.slow

BUDGET = dict(population=20, evaluations=150)


@pytest.fixture(scope='module')
def suite():
    return generate_random_suite([20, 50, 100], 10, (0, 1000), seed=2024)


def mean_best(nets, **overrides):
    """Mean over nets of the best length found with one seeded run each."""
    cfg = RunConfig(**{**BUDGET, 'seed': 1, **overrides})
    return float(np.mean([run(net, cfg).best_length for net in nets]))


def test_union_length_matches_oracle_fuzz():
    rng = np.random.default_rng(0)
    orientations = list(Orientation)
    for _ in range(10_000):
        segs = []
        for _ in range(int(rng.integers(1, 10))):
            lo, hi = sorted(int(v) for v in rng.integers(0, 50, size=2))
            segs.append(Segment(orientations[int(rng.integers(4))], int(rng.integers(3)), lo, hi))
        assert union_length(segs) == pytest.approx(pairwise_union_length(segs), abs=1e-9)


def test_operator_closure_fuzz():
    rng = np.random.default_rng(1)
    nets = generate_random_suite(list(range(3, 51)), 1, (0, 200), seed=3)
    applied = 0
    while applied < 10_000:
        net = nets[int(rng.integers(len(nets)))]
        rmode = RoutingMode.XARCH if rng.random() < 0.5 else RoutingMode.RECTILINEAR
        mode = TransformMode.E if rng.random() < 0.5 else TransformMode.PS
        p, q, g = (random_spanning_tree(net, rmode, rng) for _ in range(3))
        for out in (mutate(p, mode, 2, net, rmode, rng),
                    crossover(p, q, mode, net, rmode, rng),
                    apply_velocity(p, q, g, 0.9, 0.8, 0.8, mode, 2, net, rmode, rng)):
            assert validate(net, out)
            applied += 1


def test_exact_recovery_on_small_nets():
    nets = generate_random_suite([3, 4, 5], 17, (0, 100), seed=5)[:50]
    cfg = RunConfig(population=50, evaluations=500, mode=RoutingMode.RECTILINEAR, seed=1)
    report = evaluate_recovery(nets, cfg, threads=4)
    assert report['below'] == 0
    assert report['rate'] >= 0.9


def test_mst_within_one_and_a_half_of_exact():
    nets = generate_random_suite([3, 4, 5, 6], 50, (0, 1000), seed=6)
    for net in nets:
        exact = exact_rsmt(net)
        mst = reference_mst_length(net, 'manhattan')
        assert exact <= mst < 1.5 * exact


def test_xarch_shorter_than_rectilinear(suite):
    x = mean_best(suite, mode=RoutingMode.XARCH)
    rect = mean_best(suite, mode=RoutingMode.RECTILINEAR)
    assert (rect - x) / rect >= 0.05


def test_four_choices_beat_two():
    gains = []
    for size in (50, 100):
        nets = generate_random_suite([size], 2, (0, 1000), seed=size)
        four = np.mean([run_many(net, RunConfig(**BUDGET, seed=1), 10).mean for net in nets])
        two = np.mean([run_many(net, RunConfig(**BUDGET, seed=1, mode=RoutingMode.XARCH_TWO_CHOICE), 10).mean
                       for net in nets])
        assert four <= two
        gains.append((two - four) / two)
    assert max(gains) >= 0.003


def test_four_stage_plan_beats_pure_ps(suite):
    staged = mean_best(suite, stage_plan=StagePlan.parse('E,PS,E,PS'))
    pure = mean_best(suite, stage_plan=StagePlan.parse('PS'))
    assert staged < pure


def test_two_point_mutation_is_never_worst(suite):
    means = {k: mean_best(suite, mutation_points=k) for k in (1, 2, 4)}
    assert means[2] <= max(means[1], means[4])


def test_monotone_and_deterministic(suite):
    cfg = RunConfig(**BUDGET, seed=9)
    for net in suite[:5]:
        results = [run(net, cfg) for _ in range(3)] + [run(net, cfg, threads=4)]
        assert all(r == results[0] for r in results)
        history = results[0].history
        assert all(b <= a for a, b in zip(history, history[1:]))


def test_rectilinear_multi_stage_gain(suite):
    staged = mean_best(suite, mode=RoutingMode.RECTILINEAR, stage_plan=StagePlan.parse('E,PS,E,PS'))
    pure = mean_best(suite, mode=RoutingMode.RECTILINEAR, stage_plan=StagePlan.parse('PS'))
    assert staged < pure


def test_several_topologies_of_near_equal_length():
    net = generate_random_suite([10], 1, (0, 100), seed=10)[0]
    stats = run_many(net, RunConfig(**BUDGET, seed=1), 20)
    assert len(distinct_topologies(stats.results, tolerance=0.005)) >= 2
