"""Points, unit disks and the exact predicates the solver is built on.

A disk is an *open* unit disk identified by its center point.  Two disks
overlap iff their centers are strictly closer than 2; touching disks (center
distance exactly 2) do not overlap.  Move budgets are closed: a move of
length exactly d is allowed.  All distance work happens on squared distances
so that rational inputs stay rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .numerics import (
    DomainError,
    Ordering,
    Scalar,
    approx_float,
    compare,
    format_scalar,
    frac,
    quadext,
    s_add,
    s_square,
    s_sub,
    sign_eq,
    sign_le,
    sign_lt,
)

__all__ = [
    "Point",
    "Disk",
    "FOUR",
    "dist2",
    "overlap",
    "is_packing",
    "within_move",
    "circle_circle_candidates",
    "circle_circle_candidates_sq",
    "translate",
    "point_key",
]

FOUR = Fraction(4)


@dataclass(frozen=True)
class Point:
    x: Scalar
    y: Scalar

    def is_rational(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.y, Fraction)

    def __repr__(self):
        return f"({format_scalar(self.x)}, {format_scalar(self.y)})"


# a unit disk is represented by its center
Disk = Point


def dist2(a: Point, b: Point) -> Scalar:
    """Squared Euclidean distance between two points."""
    return s_add(s_square(s_sub(a.x, b.x)), s_square(s_sub(a.y, b.y)))


def overlap(a: Disk, b: Disk) -> bool:
    """Strict overlap test: center distance < 2.  Touching is not overlap.

    Raises IndeterminateError when interval operands straddle the threshold.
    """
    return sign_lt(dist2(a, b), FOUR, f"overlap({a}, {b})")


def is_packing(disks: Sequence[Disk]) -> Optional[tuple[int, int]]:
    """None if no pair of disks overlaps, else the first violating pair.

    Pairs are reported lexicographically.  For large all-rational inputs a
    spatial bucket pass finds the same first pair without the quadratic scan.
    """
    n = len(disks)
    if n > 128 and all(d.is_rational() for d in disks):
        return _is_packing_bucketed(disks)
    for i in range(n):
        for j in range(i + 1, n):
            if overlap(disks[i], disks[j]):
                return (i, j)
    return None


def _is_packing_bucketed(disks: Sequence[Disk]) -> Optional[tuple[int, int]]:
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, d in enumerate(disks):
        key = (d.x.numerator // (2 * d.x.denominator),
               d.y.numerator // (2 * d.y.denominator))
        buckets.setdefault(key, []).append(i)
    best: Optional[tuple[int, int]] = None
    for (cx, cy), members in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                other = buckets.get((cx + dx, cy + dy))
                if other is None:
                    continue
                for i in members:
                    for j in other:
                        if j <= i:
                            continue
                        pair = (i, j)
                        if best is not None and pair >= best:
                            continue
                        if overlap(disks[i], disks[j]):
                            best = pair
    return best


def within_move(origin: Point, target: Point, d2, variant: str) -> bool:
    """Whether moving a center from origin to target respects the budget.

    euclidean: squared displacement <= d2 (equality allowed).
    rectilinear: displacement must be axis-parallel and its square <= d2.
    """
    d2 = frac(d2)
    if d2 < 0:
        raise DomainError("negative squared move radius")
    if variant == "euclidean":
        return sign_le(dist2(origin, target), d2, "move bound")
    if variant == "rectilinear":
        dx = s_sub(origin.x, target.x)
        dy = s_sub(origin.y, target.y)
        if sign_eq(dx, Fraction(0), "axis check"):
            return sign_le(s_square(dy), d2, "move bound")
        if sign_eq(dy, Fraction(0), "axis check"):
            return sign_le(s_square(dx), d2, "move bound")
        return False
    raise ValueError(f"unknown variant {variant!r}")


def circle_circle_candidates_sq(c1: Point, r1_sq, c2: Point, r2_sq) -> list[Point]:
    """Intersection points of two circles given by center and squared radius.

    Centers must be rational and distinct; squared radii rational.  The
    returned coordinates share one radicand, so every point is exactly
    checkable.  Empty when the circles are disjoint or nested; a single
    point at tangency.
    """
    if not (c1.is_rational() and c2.is_rational()):
        raise DomainError("circle intersection needs rational centers")
    r1_sq, r2_sq = frac(r1_sq), frac(r2_sq)
    dx = c2.x - c1.x
    dy = c2.y - c1.y
    dd = dx * dx + dy * dy
    if dd == 0:
        raise DomainError("coincident circle centers")
    # foot of the radical line along the center segment: c1 + t*(dx, dy)
    t = (r1_sq - r2_sq + dd) / (2 * dd)
    fx = c1.x + t * dx
    fy = c1.y + t * dy
    h2 = r1_sq - t * t * dd  # squared offset / dd gives the radicand
    if h2 < 0:
        return []
    if h2 == 0:
        return [Point(fx, fy)]
    c = h2 / dd
    p1 = Point(quadext(fx, -dy, c), quadext(fy, dx, c))
    p2 = Point(quadext(fx, dy, c), quadext(fy, -dx, c))
    pts = [p1, p2]
    pts.sort(key=point_key)
    return pts


def circle_circle_candidates(c1: Point, r1, c2: Point, r2) -> list[Point]:
    r1, r2 = frac(r1), frac(r2)
    if r1 < 0 or r2 < 0:
        raise DomainError("negative radius")
    return circle_circle_candidates_sq(c1, r1 * r1, c2, r2 * r2)


def translate(p: Point, vx, vy) -> Point:
    return Point(s_add(p.x, frac(vx)), s_add(p.y, frac(vy)))


def point_key(p: Point) -> tuple:
    """Deterministic sort key (float approximation plus repr tiebreak)."""
    return (approx_float(p.x), approx_float(p.y),
            format_scalar(p.x), format_scalar(p.y))
