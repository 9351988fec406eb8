"""Tests for edge expansion and overlap-free tree length."""

import math
from itertools import product

import numpy as np
import pytest

from evaluation.oracle import pairwise_union_length
from pipeline.encoding import Edge, InvalidTreeError, Net, Particle, parse
from pipeline.geometry import (
    SQRT2,
    Orientation,
    Point,
    PsChoice,
    Segment,
    expand_edge,
    manhattan_distance,
    octilinear_distance,
    segment_between,
    tree_length,
    union_length,
)


def total(segments):
    return sum(s.length for s in segments)


def chain_endpoints(segments, a: Point, b: Point):
    """Walk the segments from a and return the point reached."""
    from tools.svg_render import _endpoints

    at = a
    for seg in segments:
        p, q = _endpoints(seg)
        assert at in (p, q)
        at = q if at == p else p
    return at


class TestExpandEdge:
    def test_pure_diagonal_is_one_segment(self):
        segs = expand_edge(Point(0, 0), Point(3, 3), PsChoice.C0)
        assert segs == [Segment(Orientation.D45, 0, 0, 3)]
        assert total(segs) == pytest.approx(3 * SQRT2)

    def test_c0_rectilinear_then_diagonal(self):
        segs = expand_edge(Point(0, 0), Point(4, 2), PsChoice.C0)
        assert segs == [
            Segment(Orientation.H, 0, 0, 2),
            Segment(Orientation.D45, -2, 2, 4),
        ]
        assert total(segs) == pytest.approx(2 + 2 * SQRT2)

    def test_c1_diagonal_then_rectilinear(self):
        segs = expand_edge(Point(0, 0), Point(4, 2), PsChoice.C1)
        assert segs == [
            Segment(Orientation.D45, 0, 0, 2),
            Segment(Orientation.H, 2, 2, 4),
        ]

    def test_c2_vertical_then_horizontal(self):
        segs = expand_edge(Point(0, 0), Point(4, 2), PsChoice.C2)
        assert segs == [
            Segment(Orientation.V, 0, 0, 2),
            Segment(Orientation.H, 2, 0, 4),
        ]
        assert total(segs) == 6

    def test_c3_horizontal_then_vertical(self):
        segs = expand_edge(Point(0, 0), Point(4, 2), PsChoice.C3)
        assert segs == [
            Segment(Orientation.H, 0, 0, 4),
            Segment(Orientation.V, 4, 0, 2),
        ]

    def test_steep_edge_puts_straight_part_on_vertical(self):
        assert expand_edge(Point(0, 0), Point(1, 3), PsChoice.C0) == [
            Segment(Orientation.V, 0, 0, 2),
            Segment(Orientation.D45, 2, 0, 1),
        ]
        assert expand_edge(Point(0, 0), Point(1, 3), PsChoice.C1) == [
            Segment(Orientation.D45, 0, 0, 1),
            Segment(Orientation.V, 1, 1, 3),
        ]

    def test_downward_edge_uses_135_degree_diagonal(self):
        segs = expand_edge(Point(0, 0), Point(4, -2), PsChoice.C0)
        assert segs == [
            Segment(Orientation.H, 0, 0, 2),
            Segment(Orientation.D135, 2, 2, 4),
        ]

    def test_endpoint_order_does_not_matter(self):
        for c in PsChoice:
            assert expand_edge(Point(4, 2), Point(0, 0), c) == expand_edge(Point(0, 0), Point(4, 2), c)

    def test_degenerate_edges_ignore_choice(self):
        for a, b in [((0, 0), (5, 0)), ((2, 1), (2, 7)), ((0, 4), (3, 1))]:
            routes = {tuple(expand_edge(Point(*a), Point(*b), c)) for c in PsChoice}
            assert len(routes) == 1
            assert len(next(iter(routes))) == 1

    def test_same_point_gives_nothing(self):
        assert expand_edge(Point(3, 3), Point(3, 3), PsChoice.C2) == []

    def test_every_choice_is_a_shortest_path(self):
        pts = [Point(x, y) for x, y in product(range(-3, 4), range(-2, 3))]
        for a, b in product(pts[::3], pts[1::2]):
            for c in (PsChoice.C0, PsChoice.C1):
                assert total(expand_edge(a, b, c)) == pytest.approx(octilinear_distance(a, b), abs=1e-9)
            dx, dy = abs(a.x - b.x), abs(a.y - b.y)
            straight = dx == 0 or dy == 0 or dx == dy
            expected = octilinear_distance(a, b) if straight else manhattan_distance(a, b)
            for c in (PsChoice.C2, PsChoice.C3):
                assert total(expand_edge(a, b, c)) == pytest.approx(expected, abs=1e-9)

    def test_diagonal_pair_collapses_for_rectilinear_choices(self):
        for c in (PsChoice.C2, PsChoice.C3):
            assert total(expand_edge(Point(0, 0), Point(1, 1), c)) == pytest.approx(SQRT2)
            assert total(expand_edge(Point(0, 0), Point(2, -2), c)) == pytest.approx(2 * SQRT2)

    def test_segments_chain_from_a_to_b(self):
        a, b = Point(1, 5), Point(8, 1)
        for c in PsChoice:
            segs = expand_edge(a, b, c)
            assert chain_endpoints(segs, a, b) == b

    def test_segment_between_rejects_non_octilinear(self):
        with pytest.raises(ValueError):
            segment_between(Point(0, 0), Point(2, 1))


class TestUnionLength:
    def test_overlap_on_one_line_counts_once(self):
        segs = [Segment(Orientation.H, 0, 0, 3), Segment(Orientation.H, 0, 2, 5)]
        assert union_length(segs) == 5

    def test_orientations_never_merge(self):
        segs = [Segment(Orientation.H, 0, 0, 3), Segment(Orientation.V, 0, 0, 3)]
        assert union_length(segs) == 6

    def test_parallel_lines_do_not_merge(self):
        segs = [Segment(Orientation.D45, 0, 0, 2), Segment(Orientation.D45, 1, 0, 2)]
        assert union_length(segs) == pytest.approx(4 * SQRT2)

    def test_zero_length_segments_are_ignored(self):
        assert union_length([Segment(Orientation.H, 0, 4, 4)]) == 0

    def test_matches_pairwise_oracle_on_one_line(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            segs = []
            for _ in range(20):
                lo, hi = sorted(int(v) for v in rng.integers(0, 60, size=2))
                segs.append(Segment(Orientation.D135, 7, lo, hi))
            assert union_length(segs) == pytest.approx(pairwise_union_length(segs), abs=1e-9)

    def test_permutation_and_split_invariance(self):
        rng = np.random.default_rng(5)
        orientations = list(Orientation)
        segs = []
        for _ in range(30):
            lo, hi = sorted(int(v) for v in rng.integers(0, 40, size=2))
            segs.append(Segment(orientations[int(rng.integers(4))], int(rng.integers(3)), lo, hi))
        base = union_length(segs)
        shuffled = [segs[i] for i in rng.permutation(len(segs))]
        assert union_length(shuffled) == pytest.approx(base, abs=1e-9)

        split = []
        for s in segs:
            mid = (s.lo + s.hi) // 2
            split += [s._replace(hi=mid), s._replace(lo=mid)]
        assert union_length(split) == pytest.approx(base, abs=1e-9)

    def test_subadditive(self):
        s1 = [Segment(Orientation.H, 0, 0, 5), Segment(Orientation.V, 2, 0, 3)]
        s2 = [Segment(Orientation.H, 0, 3, 8)]
        assert union_length(s1 + s2) <= union_length(s1) + union_length(s2)


class TestTreeLength:
    def test_two_collinear_pins(self):
        net = Net.from_points('n', [(0, 0), (5, 0)])
        for c in PsChoice:
            assert tree_length(net, Particle((Edge(1, 2, c),))) == 5

    def test_shared_wire_is_counted_once(self):
        net = Net.from_points('n', [(0, 0), (2, 0), (4, 0)])
        p = Particle((Edge(1, 3, PsChoice.C2), Edge(1, 2, PsChoice.C2)))
        assert tree_length(net, p) == 4

    def test_overlapping_bends(self):
        # both edges leave (0, 0) vertically under C2 and share x=0 from 0 to 2
        net = Net.from_points('n', [(0, 0), (3, 2), (5, 4)])
        p = Particle((Edge(1, 2, PsChoice.C2), Edge(1, 3, PsChoice.C2)))
        assert tree_length(net, p) == 14 - 2

    def test_table1_particle(self, table1, table1_particle):
        p = parse(table1_particle, table1.n)
        length = tree_length(table1, p)
        assert math.isfinite(length) and length > 0

    def test_matches_pairwise_oracle(self, six_pin, random_tree):
        for seed in range(10):
            p = random_tree(six_pin, seed=seed)
            segs = [s for e in p.edges for s in expand_edge(six_pin.pin(e.u), six_pin.pin(e.v), e.choice)]
            assert tree_length(six_pin, p) == pytest.approx(pairwise_union_length(segs), abs=1e-9)

    def test_rectilinear_length_is_integral(self, table1, random_tree):
        from pipeline.encoding import RoutingMode

        for seed in range(5):
            length = tree_length(table1, random_tree(table1, RoutingMode.RECTILINEAR, seed))
            assert length == pytest.approx(round(length), abs=1e-9)

    def test_rejects_non_tree(self):
        net = Net.from_points('n', [(0, 0), (1, 0), (2, 0)])
        with pytest.raises(InvalidTreeError):
            tree_length(net, Particle((Edge(1, 2, PsChoice.C0), Edge(2, 1, PsChoice.C0))))
