from fractions import Fraction

import pytest

from maxvar.lattice import (
    EnumerationCapExceeded,
    ShellTable,
    admissible_boxes_through,
    box_lattice_trace,
    box_realization,
    check_gap_monotonicity,
    check_log_concavity,
    l1_ball_count,
    l1_ball_points,
)


def brute_count(d, k):
    """Independent enumeration oracle: count |p|_1 <= k by brute force."""
    from itertools import product

    return sum(
        1 for p in product(range(-k, k + 1), repeat=d) if sum(abs(c) for c in p) <= k
    )


class TestCount:
    def test_one_dimensional_closed_form(self):
        assert l1_ball_count(1, 5) == 11
        for k in range(0, 200):
            assert l1_ball_count(1, k) == 2 * k + 1

    def test_origin_only(self):
        assert l1_ball_count(2, 0) == 1
        assert l1_ball_count(7, 0) == 1

    def test_d2_example(self):
        assert l1_ball_count(2, 3) == 25

    def test_d2_closed_form(self):
        for k in range(0, 100):
            assert l1_ball_count(2, k) == k * k + (k + 1) * (k + 1)

    def test_matches_enumeration_oracle(self):
        for d in range(1, 4):
            for k in range(0, 7):
                assert l1_ball_count(d, k) == brute_count(d, k), (d, k)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            l1_ball_count(0, 3)
        with pytest.raises(ValueError):
            l1_ball_count(2, -1)


class TestPoints:
    def test_unit_cross_polytope(self):
        assert l1_ball_points(2, 1) == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]

    def test_one_dimensional(self):
        assert l1_ball_points(1, 2) == [(-2,), (-1,), (0,), (1,), (2,)]

    def test_d3_radius_1(self):
        assert len(l1_ball_points(3, 1)) == 7

    def test_length_matches_count(self):
        for d in range(1, 5):
            for k in range(0, 13):
                assert len(l1_ball_points(d, k)) == l1_ball_count(d, k)

    def test_lexicographic_order(self):
        pts = l1_ball_points(3, 4)
        assert pts == sorted(pts)

    def test_cap(self):
        with pytest.raises(EnumerationCapExceeded):
            l1_ball_points(2, 100, cap=10)


class TestShellTable:
    def test_strict_increase(self):
        for d in (1, 2, 5):
            t = ShellTable.build(d, 60)
            assert all(t.counts[k + 1] > t.counts[k] for k in range(60))

    def test_shells_sum_to_counts(self):
        t = ShellTable.build(3, 40)
        assert sum(t.shell(k) for k in range(41)) == t.count(40)

    def test_ratio_strictly_decreasing(self):
        # equivalent formulation of log-concavity
        for d in (1, 2, 3, 4):
            t = ShellTable.build(d, 50)
            ratios = [Fraction(t.counts[k + 1], t.counts[k]) for k in range(50)]
            assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_invalid_table_rejected(self):
        with pytest.raises(ValueError):
            ShellTable(1, (1, 3, 3))
        with pytest.raises(ValueError):
            ShellTable(1, (2, 3))


class TestLogConcavity:
    def test_d1(self):
        # N(1,k)^2 = 4k^2+4k+1 > (2k+3)(2k-1)
        assert check_log_concavity(1, 100) == []

    def test_d2_spot(self):
        assert 5 * 5 > 13 * 1
        assert check_log_concavity(2, 1) == []

    def test_medium_run(self):
        assert check_log_concavity(3, 300) == []

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            check_log_concavity(0, 10)
        with pytest.raises(ValueError):
            check_log_concavity(2, 0)


class TestGapMonotonicity:
    def test_d1_with_hand_values(self):
        assert Fraction(1, 1) - Fraction(1, 3) > Fraction(1, 3) - Fraction(1, 5)
        assert check_gap_monotonicity(1, 100) == []

    def test_d2_spot(self):
        assert Fraction(1) - Fraction(1, 5) > Fraction(1, 5) - Fraction(1, 13)
        assert check_gap_monotonicity(2, 0) == []

    def test_medium_run(self):
        assert check_gap_monotonicity(4, 60) == []


class TestAdmissibleBoxes:
    def test_single_point_support(self):
        boxes = list(admissible_boxes_through((0, 0), ((0, 0), (0, 0))))
        assert (((0, 0), (0, 0))) in boxes

    def test_balanced_counts_only(self):
        boxes = list(
            admissible_boxes_through((3, 0), ((0, 0), (0, 0)), max_side=4)
        )
        assert (((0, 0), (3, 2))) in boxes  # counts (4, 3)
        for lower, upper in boxes:
            counts = [u - l + 1 for l, u in zip(lower, upper)]
            assert max(counts) - min(counts) <= 1
            assert all(l <= p <= u for l, u, p in zip(lower, upper, (3, 0)))
        assert (((0, -1), (3, 0))) not in boxes  # counts (4, 2)

    def test_one_dimensional_intervals(self):
        # exactly the intervals [l, u] with l <= 0 and u >= 5, up to the cap
        assert set(admissible_boxes_through((5,), ((0,), (0,)), max_side=6)) == {
            ((0,), (5,))
        }
        assert set(admissible_boxes_through((5,), ((0,), (0,)), max_side=7)) == {
            ((0,), (5,)),
            ((-1,), (5,)),
            ((0,), (6,)),
        }

    def test_every_yield_is_realizable(self):
        for box in admissible_boxes_through((2, -1), ((0, 0), (1, 1)), max_side=5):
            center, radius = box_realization(*box)
            assert box_lattice_trace(center, radius) == box

    def test_realizable_cubes_are_yielded(self):
        # sample real cubes on a quarter grid; every nonempty trace through the
        # point that meets the support box must be produced by the iterator
        point = (1, 0)
        support = ((0, 0), (0, 0))
        yielded = set(admissible_boxes_through(point, support, max_side=6))
        for cx4 in range(-6, 7):
            for cy4 in range(-6, 7):
                for r4 in range(0, 13):
                    center = (Fraction(cx4, 2), Fraction(cy4, 2))
                    trace = box_lattice_trace(center, Fraction(r4, 2))
                    if trace is None:
                        continue
                    lower, upper = trace
                    if not all(
                        l <= p <= u for l, u, p in zip(lower, upper, point)
                    ):
                        continue
                    if not all(l <= 0 <= u for l, u in zip(lower, upper)):
                        continue
                    if max(u - l + 1 for l, u in zip(lower, upper)) > 6:
                        continue
                    assert trace in yielded, trace

    def test_empty_when_disjoint_under_cap(self):
        boxes = list(
            admissible_boxes_through((10, 0), ((0, 0), (0, 0)), max_side=3)
        )
        assert boxes == []

    def test_invalid_support_box(self):
        with pytest.raises(ValueError):
            list(admissible_boxes_through((0, 0), ((1, 0), (0, 0))))

    def test_cap_enforced(self):
        with pytest.raises(EnumerationCapExceeded):
            list(
                admissible_boxes_through(
                    (0, 0), ((-8, -8), (8, 8)), max_side=17, cap=50
                )
            )


def test_realization_rejects_unbalanced():
    with pytest.raises(ValueError):
        box_realization((0, 0), (3, 1))
