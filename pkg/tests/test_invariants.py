import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funrips import (Line, Presentation, SampledSpace, bottleneck,
                     build_function_rips, hilbert_function,
                     matching_distance_mc, pointwise_dimension_curve,
                     sample_circle, slice_line, slice_vertical,
                     smoothed_presentation, truncate_barcode,
                     vertical_bottleneck_grades)
from funrips.modalg.grmat import GradedMatrix

INF = math.inf


def exhaustive_bottleneck(A, B, cap):
    """Enumeration oracle for <= 6 bars: all partial matchings."""
    A = truncate_barcode(A, cap)
    B = truncate_barcode(B, cap)
    na, nb = len(A), len(B)
    best = INF if (na or nb) else 0.0
    for k in range(min(na, nb) + 1):
        for asub in itertools.combinations(range(na), k):
            for bperm in itertools.permutations(range(nb), k):
                cost = 0.0
                for i, j in zip(asub, bperm):
                    cost = max(cost, abs(A[i][0] - B[j][0]),
                               abs(A[i][1] - B[j][1]))
                for i in set(range(na)) - set(asub):
                    cost = max(cost, (A[i][1] - A[i][0]) / 2)
                for j in set(range(nb)) - set(bperm):
                    cost = max(cost, (B[j][1] - B[j][0]) / 2)
                best = min(best, cost)
    return best


def pres(rows, cols, columns, field=2):
    return Presentation(GradedMatrix(rows, cols, columns, field))


class TestSliceVertical:
    def test_free_generator_visible_after_birth_scale(self):
        P = pres([(1.0, 3.0)], np.zeros((0, 2)), [])
        assert slice_vertical(P, 2.0) == [(3.0, INF)]
        assert slice_vertical(P, 0.5) == []

    def test_interval_slice(self):
        P = pres([(0.0, 0.0)], [(0.0, 2.0)], [((0, 1),)])
        assert slice_vertical(P, 1.0) == [(0.0, 2.0)]

    def test_relation_outside_slice_ignored(self):
        P = pres([(0.0, 0.0)], [(5.0, 2.0)], [((0, 1),)])
        assert slice_vertical(P, 1.0) == [(0.0, INF)]

    def test_requires_two_params(self):
        P = pres([(0.0,)], np.zeros((0, 1)), [])
        with pytest.raises(ValueError, match="2 parameters"):
            slice_vertical(P, 1.0)

    def test_zero_length_bars_dropped(self):
        P = pres([(0.0, 1.0)], [(0.0, 1.0)], [((0, 1),)])
        assert slice_vertical(P, 0.5) == []

    def test_alive_bars_match_hilbert(self):
        rng = np.random.default_rng(0)
        for _ in range(15):
            nr = int(rng.integers(1, 5))
            rg = np.round(rng.uniform(0, 2, (nr, 2)), 1)
            nc = int(rng.integers(0, 6))
            cg = np.round(rg[rng.integers(0, nr, nc)] + rng.uniform(0, 2, (nc, 2)), 1)
            cols = [tuple((i, 1) for i in range(nr)
                          if np.all(rg[i] <= cg[j]) and rng.random() < 0.6)
                    for j in range(nc)]
            P = pres(rg, cg, cols)
            for delta in rng.uniform(0, 2.5, 4):
                bars = slice_vertical(P, float(delta))
                for y in rng.uniform(0, 3, 4):
                    alive = sum(1 for b, d in bars if b <= y < d)
                    assert alive == hilbert_function(P, [(delta, y)])[0]


class TestSliceLine:
    def test_push_is_max_coordinate_gap(self):
        line = Line((0.0, 0.0), (1.0, 1.0))
        assert line.push((2.0, 0.0)) == 2.0

    def test_degenerate_direction_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            Line((0.0, 0.0), (1.0, 0.0))

    def test_agrees_with_slice_vertical_on_steep_lines(self):
        # a near-vertical line through (delta, 0) reparameterizes the slice
        rng = np.random.default_rng(1)
        for _ in range(10):
            nr = int(rng.integers(1, 4))
            rg = np.round(rng.uniform(0, 1, (nr, 2)), 2)
            nc = int(rng.integers(0, 4))
            cg = np.round(rg[rng.integers(0, nr, nc)] + rng.uniform(0, 1, (nc, 2)), 2)
            cols = [tuple((i, 1) for i in range(nr)
                          if np.all(rg[i] <= cg[j]) and rng.random() < 0.7)
                    for j in range(nc)]
            P = pres(rg, cg, cols)
            delta = float(np.round(rng.uniform(0.3, 1.5), 2))
            tiny = 1e-9
            line = Line((delta - tiny / 2, 0.0), (tiny, 1.0))
            # grades past the slice scale reach the line only at enormous
            # parameters; the slice is reproduced below that horizon
            horizon = 1e6
            got = [bar for bar in slice_line(P, line) if bar[0] < horizon]
            want = slice_vertical(P, delta)
            assert len(got) == len(want)
            for (b1, d1), (b2, d2) in zip(sorted(got), sorted(want)):
                assert b1 == pytest.approx(b2, abs=1e-6)
                if d2 == INF:
                    assert d1 == INF or d1 > horizon
                else:
                    assert d1 == pytest.approx(d2, abs=1e-6)

    def test_complex_slicing_matches_presentation_slicing(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            n = int(rng.integers(4, 8))
            sp = SampledSpace.from_coords(rng.uniform(0, 2, (n, 2)),
                                          rng.uniform(0, 1, n))
            c = build_function_rips(sp, 2)
            from funrips import homology_presentation
            P = homology_presentation(c, 1)
            line = Line((0.0, 0.0), tuple(rng.uniform(0.3, 1.0, 2)))
            a = slice_line(c, line, degree=1)
            b = slice_line(P, line)
            assert len(a) == len(b)
            for (b1, d1), (b2, d2) in zip(sorted(a), sorted(b)):
                assert b1 == pytest.approx(b2)
                assert (d1 == d2 == INF) or d1 == pytest.approx(d2)

    def test_complex_needs_degree(self):
        sp = SampledSpace.from_coords(np.zeros((1, 2)), np.zeros(1))
        c = build_function_rips(sp, 0)
        with pytest.raises(ValueError, match="degree"):
            slice_line(c, Line((0.0, 0.0), (1.0, 1.0)))


class TestBottleneck:
    def test_identical(self):
        bars = [(0.0, 2.0), (1.0, INF)]
        assert bottleneck(bars, bars, 10.0) == 0.0

    def test_deletion_cost(self):
        assert bottleneck([(0.0, 2.0)], [], 10.0) == 1.0

    def test_hand_example(self):
        assert bottleneck([(0.0, 4.0), (1.0, 2.0)], [(0.5, 4.0)], 10.0) == 0.5

    def test_truncation_applied(self):
        # both infinite bars cap at 10, so they match at birth difference
        assert bottleneck([(1.0, INF)], [(2.0, INF)], 10.0) == 1.0

    def test_random_vs_exhaustive_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(120):
            na, nb = int(rng.integers(0, 7)), int(rng.integers(0, 7))
            A = [(float(b), float(b) + float(rng.uniform(0.05, 4)))
                 for b in rng.uniform(0, 6, na)]
            B = [(float(b), float(b) + float(rng.uniform(0.05, 4)))
                 for b in rng.uniform(0, 6, nb)]
            assert bottleneck(A, B, 10.0) == pytest.approx(
                exhaustive_bottleneck(A, B, 10.0), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 5), st.floats(0.01, 4)),
                    max_size=5).map(
                        lambda v: [(b, b + l) for b, l in v]),
           st.lists(st.tuples(st.floats(0, 5), st.floats(0.01, 4)),
                    max_size=5).map(
                        lambda v: [(b, b + l) for b, l in v]),
           st.lists(st.tuples(st.floats(0, 5), st.floats(0.01, 4)),
                    max_size=5).map(
                        lambda v: [(b, b + l) for b, l in v]))
    def test_pseudometric(self, A, B, C):
        dab = bottleneck(A, B, 10.0)
        assert dab == pytest.approx(bottleneck(B, A, 10.0))
        assert bottleneck(A, A, 10.0) == 0.0
        assert bottleneck(A, C, 10.0) <= dab + bottleneck(B, C, 10.0) + 1e-9

    def test_invalid_truncation(self):
        with pytest.raises(ValueError):
            bottleneck([], [], 0.0)


class TestMatchingDistance:
    def make_interval(self, lo, hi):
        return pres([lo], [hi], [((0, 1),)])

    def test_identical_is_zero(self):
        P = self.make_interval((0.0, 0.0), (2.0, 2.0))
        for seed in (0, 1, 2):
            assert matching_distance_mc(P, P, 50, seed=seed) == 0.0

    def test_diagonal_shift_estimate(self):
        s = 0.5
        P = self.make_interval((0.0, 0.0), (2.0, 2.0))
        Q = self.make_interval((s, s), (2.0 + s, 2.0 + s))
        est = matching_distance_mc(P, Q, 1000, seed=7)
        assert 0.8 * s <= est <= s + 1e-9

    def test_monotone_in_line_count(self):
        P = self.make_interval((0.0, 0.0), (2.0, 2.0))
        Q = self.make_interval((0.3, 0.1), (2.0, 2.4))
        e1 = matching_distance_mc(P, Q, 50, seed=3)
        e2 = matching_distance_mc(P, Q, 200, seed=3)
        assert e1 <= e2 + 1e-12  # first 50 lines are a prefix of the 200

    def test_complexes_with_degree(self):
        sp = SampledSpace.from_coords(
            np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            np.zeros(4))
        c = build_function_rips(sp, 2)
        assert matching_distance_mc(c, c, 20, seed=1, degree=1) == 0.0

    def test_bounded_by_fine_line_grid_supremum(self):
        P = self.make_interval((0.0, 0.0), (2.0, 2.0))
        Q = self.make_interval((0.2, 0.0), (2.0, 2.0))
        est = matching_distance_mc(P, Q, 300, seed=5)
        sup = 0.0
        for bx in np.linspace(-0.5, 2.5, 12):
            for by in np.linspace(-0.5, 2.5, 12):
                for t in np.linspace(0.05, 0.95, 12):
                    d = (t, 1 - t)
                    line = Line((bx, by), (d[0] / max(d), d[1] / max(d)))
                    w = min(line.dir)
                    sup = max(sup, w * bottleneck(slice_line(P, line),
                                                  slice_line(Q, line), 10.0))
        assert est <= sup + 1e-6


class TestVerticalBottleneckGrades:
    def test_single_pair(self):
        assert vertical_bottleneck_grades([(1.0, 0.0)], [(1.0, 0.5)]) == 0.5

    def test_first_coordinate_mismatch(self):
        assert vertical_bottleneck_grades([(1.0, 0.0)], [(2.0, 0.0)]) == INF

    def test_cardinality_mismatch(self):
        assert vertical_bottleneck_grades([(1.0, 0.0)],
                                          [(1.0, 0.0), (1.0, 1.0)]) == INF

    def test_tolerance_allows_first_coord_slack(self):
        d = vertical_bottleneck_grades([(1.0, 0.0)], [(1.2, 0.5)],
                                       first_coord_tol=0.25)
        assert d == 0.5

    def test_optimal_assignment(self):
        A = [(0.0, 0.0), (0.0, 10.0)]
        B = [(0.0, 1.0), (0.0, 9.0)]
        assert vertical_bottleneck_grades(A, B) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            vertical_bottleneck_grades([(1.0, 0.0)], [(1.0,)])


class TestPointwiseDimensionCurve:
    def test_no_cycles_anywhere(self):
        sp = SampledSpace.from_coords(np.array([[0.0, 0.0], [1.0, 0.0]]),
                                      np.zeros(2))
        c = build_function_rips(sp, 2)
        assert pointwise_dimension_curve(c, 1, [0.5, 1.0, 2.0]) == [0, 0, 0]

    def test_square_cycle_window(self):
        sp = SampledSpace.from_coords(
            np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            np.zeros(4))
        c = build_function_rips(sp, 2)
        deltas = [0.5, 1.0, 1.2, np.sqrt(2.0), 2.0]
        assert pointwise_dimension_curve(c, 1, deltas) == [0, 1, 1, 0, 0]

    def test_dense_circle_stabilizes_at_one(self):
        space = sample_circle(1.0, 120, seed=0)
        c = build_function_rips(space, 2, max_scale=1.7)
        deltas = np.linspace(0.3, 0.8, 6)
        curve = pointwise_dimension_curve(c, 1, deltas)
        assert curve[-3:] == [1, 1, 1]
