from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from diskdispersal.geometry import (
    Point,
    circle_circle_candidates,
    circle_circle_candidates_sq,
    dist2,
    is_packing,
    overlap,
    translate,
    within_move,
)
from diskdispersal.numerics import (
    DomainError,
    Ordering,
    compare,
    quadext,
    s_add,
    s_mul,
    s_sub,
)


def P(x, y):
    return Point(F(x), F(y))


coords = st.fractions(min_value=-50, max_value=50, max_denominator=16)
points = st.builds(P, coords, coords)


class TestDist2:
    def test_pythagorean_triple(self):
        assert dist2(P(0, 0), P(3, 4)) == F(25)

    def test_half_units(self):
        assert dist2(P(F(1, 2), 0), P(0, F(1, 2))) == F(1, 2)

    def test_radical_squares_away(self):
        q = Point(F(1), quadext(0, 1, 3))
        assert dist2(P(1, 0), q) == F(3)

    @given(points, points)
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, a, b):
        assert dist2(a, b) == dist2(b, a)

    @given(points, points)
    @settings(max_examples=100, deadline=None)
    def test_matches_independent_expansion(self, a, b):
        # textbook polynomial, term by term
        expect = (a.x * a.x - 2 * a.x * b.x + b.x * b.x
                  + a.y * a.y - 2 * a.y * b.y + b.y * b.y)
        assert dist2(a, b) == expect


class TestOverlap:
    def test_touching_is_not_overlap(self):
        assert overlap(P(0, 0), P(2, 0)) is False

    def test_unit_apart_overlaps(self):
        assert overlap(P(0, 0), P(1, 0)) is True

    def test_root_five_apart(self):
        assert overlap(P(0, 0), P(2, 1)) is False

    @given(points, points)
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_compare(self, a, b):
        assert overlap(a, b) == (compare(dist2(a, b), F(4)) is Ordering.LESS)


class TestIsPacking:
    def test_touching_chain(self):
        assert is_packing([P(0, 0), P(2, 0), P(4, 0)]) is None

    def test_first_violation_reported(self):
        assert is_packing([P(0, 0), P(1, 0)]) == (0, 1)

    def test_empty(self):
        assert is_packing([]) is None

    def test_lexicographic_first_pair(self):
        assert is_packing([P(0, 0), P(1, 0), P(F(3, 2), 0)]) == (0, 1)

    def test_subset_of_packing_is_packing(self):
        disks = [P(2 * i, 2 * j) for i in range(4) for j in range(4)]
        assert is_packing(disks) is None
        assert is_packing(disks[3:9]) is None

    @given(st.lists(points, max_size=7), st.fractions(max_denominator=8),
           st.fractions(max_denominator=8))
    @settings(max_examples=100, deadline=None)
    def test_translation_invariance(self, disks, vx, vy):
        moved = [translate(p, vx, vy) for p in disks]
        assert is_packing(disks) == is_packing(moved)

    def test_bucketed_matches_naive(self):
        import random
        rng = random.Random(7)
        disks = [P(F(rng.randint(0, 160), 4), F(rng.randint(0, 160), 4))
                 for _ in range(200)]
        from diskdispersal.geometry import _is_packing_bucketed
        naive = None
        for i in range(len(disks)):
            for j in range(i + 1, len(disks)):
                if naive is None and overlap(disks[i], disks[j]):
                    naive = (i, j)
        assert _is_packing_bucketed(disks) == naive


class TestWithinMove:
    def test_tangency_move_at_budget(self):
        target = Point(F(1), quadext(0, 1, 3))
        assert within_move(P(1, 0), target, F(3), "euclidean") is True

    def test_identity_move(self):
        assert within_move(P(5, 5), P(5, 5), F(0), "euclidean") is True
        assert within_move(P(5, 5), P(5, 5), F(0), "rectilinear") is True

    def test_diagonal_rejected_rectilinear(self):
        assert within_move(P(0, 0), P(1, 1), F(100), "rectilinear") is False

    def test_axis_moves_rectilinear(self):
        assert within_move(P(0, 0), P(0, 3), F(9), "rectilinear") is True
        assert within_move(P(0, 0), P(3, 0), F(8), "rectilinear") is False


class TestCircleIntersections:
    def test_symmetric_pair(self):
        pts = circle_circle_candidates(P(0, 0), 2, P(2, 0), 2)
        assert len(pts) == 2
        ys = sorted(pts, key=lambda p: 0 if compare(p.y, F(0)) is Ordering.LESS else 1)
        assert all(p.x == F(1) for p in pts)
        assert compare(s_mul(ys[0].y, ys[0].y), F(3)) is Ordering.EQUAL
        assert compare(ys[1].y, quadext(0, 1, 3)) is Ordering.EQUAL

    def test_disjoint(self):
        assert circle_circle_candidates(P(0, 0), 2, P(5, 0), 2) == []

    def test_tangent_single_point(self):
        pts = circle_circle_candidates(P(0, 0), 2, P(4, 0), 2)
        assert pts == [P(2, 0)]

    def test_coincident_centers_error(self):
        with pytest.raises(DomainError):
            circle_circle_candidates(P(1, 1), 2, P(1, 1), 3)

    @given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6),
           st.integers(-6, 6), st.integers(1, 5), st.integers(1, 5))
    @settings(max_examples=150, deadline=None)
    def test_points_satisfy_both_circle_equations(self, x1, y1, x2, y2, r1, r2):
        if (x1, y1) == (x2, y2):
            return
        c1, c2 = P(x1, y1), P(x2, y2)
        for p in circle_circle_candidates(c1, r1, c2, r2):
            assert compare(dist2(p, c1), F(r1 * r1)) is Ordering.EQUAL
            assert compare(dist2(p, c2), F(r2 * r2)) is Ordering.EQUAL

    def test_squared_radius_form_for_irrational_radius(self):
        # circle around origin with squared radius 3 meets the unit-ring
        # of (2, 0): candidates where a move budget of sqrt(3) is tight
        pts = circle_circle_candidates_sq(P(0, 0), F(3), P(2, 0), F(4))
        assert pts
        for p in pts:
            assert compare(dist2(p, P(0, 0)), F(3)) is Ordering.EQUAL
            assert compare(dist2(p, P(2, 0)), F(4)) is Ordering.EQUAL
