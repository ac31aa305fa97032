"""Decision procedure: enumerate candidate moved-sets, decide placements.

The search enumerates every subset A (|A| <= k) whose removal leaves the
remaining disks pairwise non-overlapping -- exactly the vertex covers of the
intersection graph, non-minimal ones included -- and asks for each whether
the disks of A admit new positions.  Placement feasibility runs through
three stages:

1. structured exact candidates (tangency intersections, budget-tight
   points, axis extremes), verified with exact arithmetic;
2. a numeric penalty descent whose solutions are snapped to dyadic
   rationals and re-verified exactly;
3. an exhaustive grid sweep over each movable's reachable region that
   either finds an exact grid witness or *proves* infeasibility: if no
   grid assignment survives with every constraint relaxed by the maximal
   rounding perturbation (sqrt(2)*delta per moved endpoint), no continuous
   solution exists.

Yes answers always carry a witness that validates exactly; No answers are
backed by a grid refutation for every candidate set; anything else is
reported Unknown rather than guessed.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .geometry import (
    Point,
    circle_circle_candidates_sq,
    dist2,
    point_key,
    within_move,
)
from .instance_io import Instance, LatticeBlock, Witness
from .kernel import derived_d, kernelize
from .numerics import (
    IndeterminateError,
    Ordering,
    approx_float,
    compare,
    format_scalar,
    frac,
    quadext,
    set_precision_cap,
)
from .udg import IntersectionGraph, build_graph

__all__ = [
    "SolverConfig",
    "Answer",
    "Feasibility",
    "solve",
    "enumerate_candidate_sets",
    "feasibility",
]

FOUR = Fraction(4)


@dataclass
class SolverConfig:
    max_set_size: Optional[int] = None      # cap on |A|; None means k
    delta: Fraction = Fraction(1, 64)       # finest refutation grid
    delta_start: Fraction = Fraction(1, 4)  # first (coarse) refutation grid
    enable_candidates: bool = True
    enable_numeric: bool = True
    enable_grid: bool = True
    candidate_cap: int = 600                # per-movable candidate list cap
    numeric_starts: int = 5
    numeric_iters: int = 400
    grid_node_budget: int = 1_500_000
    precision_cap: Optional[int] = None     # interval escalation bits
    time_budget: Optional[float] = None     # wall-clock seconds
    jobs: int = 1

    def __post_init__(self):
        self.delta = frac(self.delta)
        self.delta_start = frac(self.delta_start)
        if self.delta <= 0 or self.delta_start <= 0:
            raise ValueError("grid resolution must be positive")


@dataclass(frozen=True)
class Answer:
    verdict: str                      # yes | no | unknown
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    log: tuple[str, ...] = ()

    def __str__(self):
        if self.verdict == "yes":
            return f"yes ({len(self.witness.moves)} moves)"
        if self.verdict == "unknown":
            return f"unknown ({self.reason})"
        return "no"


@dataclass(frozen=True)
class Feasibility:
    status: str                       # feasible | infeasible | unknown
    assignment: Optional[dict[int, Point]] = None
    delta: Optional[Fraction] = None  # grid used for an infeasibility proof
    reason: Optional[str] = None


class _Budget:
    def __init__(self, seconds: Optional[float]):
        self.t0 = time.monotonic()
        self.seconds = seconds

    def exceeded(self) -> bool:
        return self.seconds is not None and \
            time.monotonic() - self.t0 > self.seconds


# ---------------------------------------------------------------------------
# candidate moved-set enumeration

def enumerate_candidate_sets(g: IntersectionGraph, k: int) -> Iterator[list[int]]:
    """All vertex covers of size <= k, by increasing size then lexicographic.

    Removal of such a set, and only such a set, leaves a packing.  A bounded
    edge-branching pass first establishes the minimum cover size (pruning the
    sweep); the lexicographic sweep then emits every cover, supersets of
    minimal covers included.
    """
    if k < 0:
        return
    min_size = _min_cover_size(g, k)
    if min_size is None:
        return
    edge_pairs = g.edges
    for size in range(min_size, k + 1):
        for combo in itertools.combinations(range(g.n), size):
            chosen = set(combo)
            if all(i in chosen or j in chosen for i, j in edge_pairs):
                yield list(combo)


def _min_cover_size(g: IntersectionGraph, k: int) -> Optional[int]:
    best: list[Optional[int]] = [None]

    def rec(chosen: set[int], depth: int):
        if best[0] is not None and depth >= best[0]:
            return
        for i, j in g.edges:
            if i not in chosen and j not in chosen:
                if depth == k:
                    return
                for w in (i, j):
                    chosen.add(w)
                    rec(chosen, depth + 1)
                    chosen.remove(w)
                return
        best[0] = depth

    rec(set(), 0)
    return best[0]


# ---------------------------------------------------------------------------
# exact constraint checks

def _sep_ok(a: Point, b: Point) -> bool:
    """Exact: centers at distance >= 2. Indeterminate counts as failure."""
    try:
        o = compare(dist2(a, b), FOUR)
    except IndeterminateError:
        return False
    return o in (Ordering.GREATER, Ordering.EQUAL)


def _move_ok(origin: Point, target: Point, d2: Fraction, variant: str) -> bool:
    try:
        return within_move(origin, target, d2, variant)
    except IndeterminateError:
        return False


def _blocks_ok(p: Point, blocks: Sequence[LatticeBlock]) -> bool:
    for b in blocks:
        for q in b.near_points(p, Fraction(2)):
            if not _sep_ok(p, q):
                return False
    return True


def _exact_assignment_ok(origins: Sequence[Point], targets: Sequence[Point],
                         fixed: Sequence[Point], d2: Fraction, variant: str,
                         blocks: Sequence[LatticeBlock]) -> bool:
    for o, t in zip(origins, targets):
        if not _move_ok(o, t, d2, variant):
            return False
        if not _blocks_ok(t, blocks):
            return False
        for f in fixed:
            if not _sep_ok(t, f):
                return False
    for a in range(len(targets)):
        for b in range(a + 1, len(targets)):
            if not _sep_ok(targets[a], targets[b]):
                return False
    return True


# ---------------------------------------------------------------------------
# stage 1: structured candidates

def _point_id(p: Point) -> tuple[str, str]:
    return (format_scalar(p.x), format_scalar(p.y))


def _candidates_for(origin: Point, anchors: Sequence[Point], d2: Fraction,
                    variant: str, cap: int) -> list[Point]:
    """Structured target positions for one movable disk.

    Anchors are rational centers the target might end up tangent to; the
    reachable ones (within d+4 of the origin) seed tangency circles.
    """
    out: list[Point] = [origin]
    d_up = derived_d(d2)
    reach2 = (d_up + 4) * (d_up + 4)
    near: list[Point] = []
    if origin.is_rational():
        for a in anchors:
            dd = dist2(a, origin)
            if isinstance(dd, Fraction) and dd <= reach2:
                near.append(a)
    if variant == "euclidean":
        for ai in range(len(near)):
            u = near[ai]
            du = dist2(u, origin)
            if isinstance(du, Fraction) and du > 0:
                # tangency to u along the line towards the origin
                c = du
                ux, uy = u.x, u.y
                dx, dy = origin.x - ux, origin.y - uy
                out.append(Point(quadext(ux, 2 * dx / c, c),
                                 quadext(uy, 2 * dy / c, c)))
                if origin.is_rational():
                    out.extend(circle_circle_candidates_sq(u, FOUR, origin, d2))
            for bi in range(ai + 1, len(near)):
                v = near[bi]
                duv = dist2(u, v)
                if isinstance(duv, Fraction) and 0 < duv <= 16:
                    out.extend(circle_circle_candidates_sq(u, FOUR, v, FOUR))
        if origin.is_rational():
            out.append(Point(quadext(origin.x, 1, d2), origin.y))
            out.append(Point(quadext(origin.x, -1, d2), origin.y))
            out.append(Point(origin.x, quadext(origin.y, 1, d2)))
            out.append(Point(origin.x, quadext(origin.y, -1, d2)))
    else:  # rectilinear: axis extremes plus axis-aligned tangencies
        if origin.is_rational():
            out.append(Point(quadext(origin.x, 1, d2), origin.y))
            out.append(Point(quadext(origin.x, -1, d2), origin.y))
            out.append(Point(origin.x, quadext(origin.y, 1, d2)))
            out.append(Point(origin.x, quadext(origin.y, -1, d2)))
            for u in near:
                dy2 = (origin.y - u.y) ** 2
                if dy2 <= 4:
                    out.append(Point(quadext(u.x, 1, 4 - dy2), origin.y))
                    out.append(Point(quadext(u.x, -1, 4 - dy2), origin.y))
                dx2 = (origin.x - u.x) ** 2
                if dx2 <= 4:
                    out.append(Point(origin.x, quadext(u.y, 1, 4 - dx2)))
                    out.append(Point(origin.x, quadext(u.y, -1, 4 - dx2)))
    seen: set[tuple[str, str]] = set()
    uniq: list[Point] = []
    for p in sorted(out, key=point_key):
        pid = _point_id(p)
        if pid not in seen:
            seen.add(pid)
            uniq.append(p)
    return uniq[:cap]


def _stage_candidates(fixed: Sequence[Point], movables: Sequence[Point],
                      d2: Fraction, variant: str, cfg: SolverConfig,
                      blocks: Sequence[LatticeBlock],
                      budget: _Budget) -> Optional[dict[int, Point]]:
    placed: list[Point] = []
    rational_fixed = [f for f in fixed if f.is_rational()]

    def rec(idx: int) -> bool:
        if budget.exceeded():
            return False
        if idx == len(movables):
            return True
        anchors = rational_fixed + [p for p in placed if p.is_rational()]
        cands = _candidates_for(movables[idx], anchors, d2, variant,
                                cfg.candidate_cap)
        for p in cands:
            if not _move_ok(movables[idx], p, d2, variant):
                continue
            if not all(_sep_ok(p, f) for f in fixed):
                continue
            if not all(_sep_ok(p, q) for q in placed):
                continue
            if not _blocks_ok(p, blocks):
                continue
            placed.append(p)
            if rec(idx + 1):
                return True
            placed.pop()
        return False

    if rec(0):
        return dict(enumerate(placed))
    return None


# ---------------------------------------------------------------------------
# stage 2: numeric descent, snapped and re-verified exactly

def _penalty_and_grad(pos: list[list[float]], origins_f: list[tuple[float, float]],
                      fixed_f: list[tuple[float, float]], d2f: float,
                      axes: Optional[list[tuple[float, float]]]):
    n = len(pos)
    pen = 0.0
    grad = [[0.0, 0.0] for _ in range(n)]
    for i in range(n):
        xi, yi = pos[i]
        for j in range(i + 1, n):
            dx, dy = xi - pos[j][0], yi - pos[j][1]
            dd = dx * dx + dy * dy
            if dd < 4.0:
                v = 4.0 - dd
                pen += v * v
                grad[i][0] += -4.0 * v * dx
                grad[i][1] += -4.0 * v * dy
                grad[j][0] += 4.0 * v * dx
                grad[j][1] += 4.0 * v * dy
        for fx, fy in fixed_f:
            dx, dy = xi - fx, yi - fy
            dd = dx * dx + dy * dy
            if dd < 4.0:
                v = 4.0 - dd
                pen += v * v
                grad[i][0] += -4.0 * v * dx
                grad[i][1] += -4.0 * v * dy
        ox, oy = origins_f[i]
        dx, dy = xi - ox, yi - oy
        dd = dx * dx + dy * dy
        if dd > d2f:
            v = dd - d2f
            pen += v * v
            grad[i][0] += 4.0 * v * dx
            grad[i][1] += 4.0 * v * dy
    if axes is not None:
        for i in range(n):
            ax, ay = axes[i]
            g = grad[i][0] * ax + grad[i][1] * ay
            grad[i] = [g * ax, g * ay]
    return pen, grad


def _descend(start: list[list[float]], origins_f, fixed_f, d2f,
             axes, iters: int) -> Optional[list[list[float]]]:
    pos = [list(p) for p in start]
    lr = 0.05
    for _ in range(iters):
        pen, grad = _penalty_and_grad(pos, origins_f, fixed_f, d2f, axes)
        if pen < 1e-22:
            return pos
        trial = [[pos[i][0] - lr * grad[i][0], pos[i][1] - lr * grad[i][1]]
                 for i in range(len(pos))]
        pen2, _ = _penalty_and_grad(trial, origins_f, fixed_f, d2f, axes)
        if pen2 < pen:
            pos = trial
            lr = min(lr * 1.3, 0.5)
        else:
            lr *= 0.5
            if lr < 1e-12:
                break
    pen, _ = _penalty_and_grad(pos, origins_f, fixed_f, d2f, axes)
    return pos if pen < 1e-22 else None


def _snap_and_verify(sol: list[list[float]], origins: Sequence[Point],
                     fixed: Sequence[Point], d2: Fraction, variant: str,
                     blocks, axes_idx: Optional[list[int]]) -> Optional[list[Point]]:
    for bits in range(0, 24):
        scale = 1 << bits
        targets = []
        for i, (x, y) in enumerate(sol):
            qx = Fraction(round(x * scale), scale)
            qy = Fraction(round(y * scale), scale)
            if axes_idx is not None:
                # lock the off-axis coordinate to the origin's exact value
                if axes_idx[i] == 0:
                    qy = origins[i].y
                else:
                    qx = origins[i].x
            targets.append(Point(qx, qy))
        if _exact_assignment_ok(origins, targets, fixed, d2, variant, blocks):
            return targets
    return None


def _stage_numeric(fixed: Sequence[Point], movables: Sequence[Point],
                   d2: Fraction, variant: str, cfg: SolverConfig,
                   blocks, budget: _Budget) -> Optional[dict[int, Point]]:
    if not all(p.is_rational() for p in movables):
        return None
    if not all(f.is_rational() for f in fixed):
        return None
    origins_f = [(approx_float(p.x), approx_float(p.y)) for p in movables]
    fixed_f = [(approx_float(f.x), approx_float(f.y)) for f in fixed]
    d2f = float(frac(d2))
    d_f = math.sqrt(d2f)
    rng = random.Random(987654321)
    n = len(movables)

    axis_combos: list[Optional[list[int]]]
    if variant == "rectilinear":
        axis_combos = [list(c) for c in itertools.product((0, 1), repeat=n)]
    else:
        axis_combos = [None]

    for axes_idx in axis_combos:
        axes = None
        if axes_idx is not None:
            axes = [(1.0, 0.0) if a == 0 else (0.0, 1.0) for a in axes_idx]
        starts = [[list(p) for p in origins_f]]
        for _ in range(cfg.numeric_starts):
            jig = []
            for i, (ox, oy) in enumerate(origins_f):
                if axes_idx is None:
                    jig.append([ox + rng.uniform(-d_f, d_f),
                                oy + rng.uniform(-d_f, d_f)])
                elif axes_idx[i] == 0:
                    jig.append([ox + rng.uniform(-d_f, d_f), oy])
                else:
                    jig.append([ox, oy + rng.uniform(-d_f, d_f)])
            starts.append(jig)
        for st in starts:
            if budget.exceeded():
                return None
            sol = _descend(st, origins_f, fixed_f, d2f, axes, cfg.numeric_iters)
            if sol is None:
                continue
            snapped = _snap_and_verify(sol, movables, fixed, d2, variant,
                                       blocks, axes_idx)
            if snapped is not None:
                return dict(enumerate(snapped))
    return None


# ---------------------------------------------------------------------------
# stage 3: grid sweep with Lipschitz slack (proof-grade refutation)

def _stage_grid(fixed: Sequence[Point], movables: Sequence[Point],
                d2: Fraction, variant: str, cfg: SolverConfig,
                blocks, budget: _Budget) -> Feasibility:
    """Sweep delta grids coarse to fine.

    Outcomes: an exact grid witness (feasible); a completed sweep with no
    assignment surviving the relaxed constraints (infeasible, certificate
    delta); or unknown when the node budget or indeterminacy interferes.
    """
    if not all(p.is_rational() for p in movables) or \
            not all(f.is_rational() for f in fixed):
        return Feasibility("unknown", reason="non-rational centers")
    d_up = derived_d(d2)
    deltas: list[Fraction] = []
    dlt = cfg.delta_start
    while dlt > cfg.delta:
        deltas.append(dlt)
        dlt = dlt / 2
    deltas.append(cfg.delta)

    exhausted_unknown = False
    for delta in deltas:
        if budget.exceeded():
            return Feasibility("unknown", reason="time budget")
        res = _grid_pass(fixed, movables, d2, variant, cfg, blocks, delta,
                         budget)
        if res.status in ("feasible", "infeasible"):
            return res
        exhausted_unknown = True
    reason = res.reason if exhausted_unknown else "grid inconclusive"
    return Feasibility("unknown", reason=reason)


def _grid_pass(fixed, movables, d2: Fraction, variant: str, cfg, blocks,
               delta: Fraction, budget: _Budget) -> Feasibility:
    """One sweep at a fixed resolution, on integer-rescaled coordinates.

    Everything is multiplied by one common denominator so that the hot
    loops run on plain integers; all tests remain exact.  Relaxed
    separation thresholds have the form (2 - s*sqrt(2))^2 =
    (4 + 2s^2) - 4s*sqrt(2) with s = delta for moved-fixed pairs and
    s = 2*delta for moved-moved pairs.
    """
    M = delta.denominator
    for p in list(fixed) + list(movables):
        M = math.lcm(M, p.x.denominator, p.y.denominator)
    M = math.lcm(M, d2.denominator)
    MM = M * M
    step = int(delta * M)
    four = 4 * MM
    d2i = d2 * MM
    assert d2i.denominator == 1
    d2i = d2i.numerator
    sA1, sB1 = four + 2 * step * step, 4 * step * M
    s2 = 2 * step
    sA2, sB2 = four + 2 * s2 * s2, 4 * s2 * M
    mvA = d2i + 2 * step * step
    mv_rhs = 8 * step * step * d2i

    def sep_rel(D: int, A: int, B: int) -> bool:
        t = A - D
        return t <= 0 or t * t <= 2 * B * B

    def mv_rel(V: int) -> bool:
        t = V - mvA
        return t <= 0 or t * t <= mv_rhs

    d_up = derived_d(d2)
    amax = int((d_up + 2 * delta) / delta) + 1
    if variant == "euclidean":
        disps = [(a * step, b * step)
                 for a in range(-amax, amax + 1)
                 for b in range(-amax, amax + 1)
                 if mv_rel((a * step) ** 2 + (b * step) ** 2)]
    else:
        axis = [a * step for a in range(-amax, amax + 1)
                if mv_rel((a * step) ** 2)]
        seen = {(0, 0)}
        disps = [(0, 0)] if 0 in axis else []
        for v in axis:
            for d_ in ((v, 0), (0, v)):
                if d_ not in seen:
                    seen.add(d_)
                    disps.append(d_)
        disps.sort()

    fixed_i = [(int(f.x * M), int(f.y * M)) for f in fixed]
    movers_i = [(int(o.x * M), int(o.y * M)) for o in movables]

    nodes = 0
    per_disk: list[list[tuple[int, int]]] = []
    for ox, oy in movers_i:
        pts = []
        for vx, vy in disps:
            px, py = ox + vx, oy + vy
            good = True
            for fx, fy in fixed_i:
                dx, dy = px - fx, py - fy
                if not sep_rel(dx * dx + dy * dy, sA1, sB1):
                    good = False
                    break
            if good and blocks:
                p = Point(Fraction(px, M), Fraction(py, M))
                for b in blocks:
                    for q in b.near_points(p, Fraction(2) + delta):
                        qx, qy = int(q.x * M), int(q.y * M)
                        dx, dy = px - qx, py - qy
                        if not sep_rel(dx * dx + dy * dy, sA1, sB1):
                            good = False
                            break
                    if not good:
                        break
            if good:
                pts.append((px, py))
        per_disk.append(pts)
        nodes += len(disps) * (len(fixed_i) + 1)
        if nodes > cfg.grid_node_budget:
            return Feasibility("unknown", reason="grid node budget")

    # most-constrained-first ordering keeps the DFS shallow; results map
    # back through the permutation
    order = sorted(range(len(movables)), key=lambda i: (len(per_disk[i]), i))
    menus = [per_disk[i] for i in order]
    origins = [movers_i[i] for i in order]

    chosen: list[tuple[int, int]] = []
    found_relaxed = [False]
    found_exact: list[Optional[list[tuple[int, int]]]] = [None]
    visited = [0]

    def point_exact(idx: int, px: int, py: int) -> bool:
        # incremental exact check; callers guarantee the chosen prefix is
        # itself exact when this is consulted
        ox, oy = origins[idx]
        dx, dy = px - ox, py - oy
        if dx * dx + dy * dy > d2i:
            return False
        for fx, fy in fixed_i:
            ex, ey = px - fx, py - fy
            if ex * ex + ey * ey < four:
                return False
        for qx, qy in chosen:
            dx, dy = px - qx, py - qy
            if dx * dx + dy * dy < four:
                return False
        if blocks:
            if not _blocks_ok(Point(Fraction(px, M), Fraction(py, M)),
                              blocks):
                return False
        return True

    def rec(idx: int, prefix_exact: bool) -> None:
        """Explore relaxed completions; prune to exact-viable branches once
        relaxed-feasibility is already established."""
        visited[0] += 1
        if visited[0] > cfg.grid_node_budget:
            raise _NodeBudget
        if idx == len(menus):
            found_relaxed[0] = True
            if prefix_exact:
                found_exact[0] = list(chosen)
            return
        for p in menus[idx]:
            if found_exact[0] is not None:
                return
            ok = True
            for qx, qy in chosen:
                dx, dy = p[0] - qx, p[1] - qy
                if not sep_rel(dx * dx + dy * dy, sA2, sB2):
                    ok = False
                    break
            if not ok:
                continue
            pe = prefix_exact and point_exact(idx, p[0], p[1])
            if found_relaxed[0] and not pe:
                continue
            chosen.append(p)
            rec(idx + 1, pe)
            chosen.pop()

    try:
        rec(0, True)
    except _NodeBudget:
        return Feasibility("unknown", reason="grid node budget")
    except IndeterminateError as e:
        return Feasibility("unknown", reason=str(e))
    if found_exact[0] is not None:
        assignment = {}
        for pos, slot in enumerate(order):
            px, py = found_exact[0][pos]
            assignment[slot] = Point(Fraction(px, M), Fraction(py, M))
        return Feasibility("feasible", assignment)
    if not found_relaxed[0]:
        return Feasibility("infeasible", delta=delta)
    return Feasibility("unknown",
                       reason=f"relaxed grid assignments remain at delta {delta}")


class _NodeBudget(Exception):
    pass


# ---------------------------------------------------------------------------
# feasibility pipeline and the top-level solve

def feasibility(fixed: Sequence[Point], movables: Sequence[Point], d2,
                variant: str, cfg: Optional[SolverConfig] = None,
                blocks: Sequence[LatticeBlock] = ()) -> Feasibility:
    """Decide whether the movable disks admit new positions.

    ``fixed`` must already be a packing.  See the module docstring for the
    three stages and their guarantees.
    """
    cfg = cfg or SolverConfig()
    d2 = frac(d2)
    budget = _Budget(cfg.time_budget)
    if not movables:
        return Feasibility("feasible", {})

    if cfg.enable_candidates:
        got = _stage_candidates(fixed, movables, d2, variant, cfg, blocks,
                                budget)
        if got is not None:
            return Feasibility("feasible", got)
    if cfg.enable_numeric:
        got = _stage_numeric(fixed, movables, d2, variant, cfg, blocks,
                             budget)
        if got is not None:
            return Feasibility("feasible", got)
    if cfg.enable_grid:
        return _stage_grid(fixed, movables, d2, variant, cfg, blocks, budget)
    return Feasibility("unknown", reason="all stages disabled")


def solve(inst: Instance, cfg: Optional[SolverConfig] = None) -> Answer:
    """Full decision pipeline over an explicit-disk instance."""
    cfg = cfg or SolverConfig()
    if inst.blocks:
        raise ValueError("solve requires explicit disks; expand blocks first")
    if cfg.precision_cap is not None:
        old_cap = set_precision_cap(cfg.precision_cap)
        try:
            return solve(inst, _without_cap(cfg))
        finally:
            set_precision_cap(old_cap)
    budget = _Budget(cfg.time_budget)

    kr = kernelize(inst)
    if kr is None:
        return Answer("no", log=("conflict matching exceeds the move budget",))
    kinst, report = kr
    g = build_graph(kinst.disks)
    if not g.edges:
        return Answer("yes", Witness({}),
                      log=("already a packing after reduction",))

    cap = inst.k if cfg.max_set_size is None else min(inst.k, cfg.max_set_size)
    log: list[str] = [f"kernel kept {len(kinst.disks)} of {len(inst.disks)} disks"]
    unknowns = 0

    sets = enumerate_candidate_sets(g, cap)
    for verdicts in _dispatch(sets, kinst, cfg, budget):
        for cand, res in verdicts:
            if res.status == "feasible":
                moves = {}
                for slot, target in res.assignment.items():
                    orig_idx = report.kept[cand[slot]]
                    if target != inst.disks[orig_idx]:
                        moves[orig_idx] = target
                return Answer("yes", Witness(moves),
                              log=tuple(log + [f"moved set {cand}"]))
            if res.status == "infeasible":
                log.append(f"set {cand}: refuted at delta {res.delta}")
            else:
                unknowns += 1
                log.append(f"set {cand}: unknown ({res.reason})")
        if budget.exceeded():
            return Answer("unknown", reason="time budget", log=tuple(log))
    if budget.exceeded():
        # the dispatcher stopped early; an incomplete sweep proves nothing
        return Answer("unknown", reason="time budget", log=tuple(log))
    if unknowns:
        return Answer("unknown",
                      reason=f"{unknowns} candidate sets undecided",
                      log=tuple(log))
    if cap < inst.k:
        # the cap hid part of the search space, so a clean sweep is not a
        # refutation of the full problem
        return Answer("unknown", reason=f"moved-set size capped at {cap}",
                      log=tuple(log))
    return Answer("no", log=tuple(log))


def _without_cap(cfg: SolverConfig) -> SolverConfig:
    import dataclasses
    return dataclasses.replace(cfg, precision_cap=None)


def _dispatch(sets: Iterable[list[int]], kinst: Instance, cfg: SolverConfig,
              budget: _Budget):
    """Evaluate candidate sets in canonical chunks.

    With jobs > 1 the sets of a chunk are evaluated speculatively in a
    thread pool, but results are always consumed in canonical order, so the
    answer (witness included) is identical at any parallelism width.
    """
    def run(cand: list[int]):
        fixed = [d for i, d in enumerate(kinst.disks) if i not in set(cand)]
        movables = [kinst.disks[i] for i in cand]
        return cand, feasibility(fixed, movables, kinst.d2, kinst.variant,
                                 cfg)

    if cfg.jobs <= 1:
        for cand in sets:
            if budget.exceeded():
                return
            yield [run(cand)]
        return
    from concurrent.futures import ThreadPoolExecutor
    chunk_size = max(1, cfg.jobs)
    it = iter(sets)
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        while True:
            chunk = list(itertools.islice(it, chunk_size))
            if not chunk:
                return
            if budget.exceeded():
                return
            yield list(pool.map(run, chunk))
