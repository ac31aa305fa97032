"""Instance/witness model, bit-exact text formats, and witness validation.

Huge reduction-style instances carry most of their disks implicitly as
lattice-fill blocks: axis-aligned rectangles filled with disks on a regular
grid, minus rectangular holes where gadgets live.  Blocks are never movable;
validation checks them against explicit disks through nearest-grid-point
queries instead of materialising millions of circles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .geometry import Disk, Point, dist2, within_move
from .numerics import (
    IndeterminateError,
    Ordering,
    Scalar,
    compare,
    format_scalar,
    frac,
    parse_scalar,
    to_interval,
)

__all__ = [
    "Rect",
    "LatticeBlock",
    "Instance",
    "Witness",
    "ParseError",
    "ValidationResult",
    "DEFAULT_EPS",
    "parse_instance",
    "write_instance",
    "parse_witness",
    "write_witness",
    "validate_witness",
    "apply_witness",
    "expand_blocks",
    "count_block_disks",
]

DEFAULT_EPS = Fraction(1, 10 ** 9)

INSTANCE_HEADER = "DISKDISPERSAL v1"
WITNESS_HEADER = "DISPERSALMOVES v1"


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line
        self.msg = msg


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError("degenerate rectangle bounds")

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def min_dist2_to(self, other: "Rect") -> Fraction:
        dx = max(Fraction(0), max(self.x0, other.x0) - min(self.x1, other.x1))
        dy = max(Fraction(0), max(self.y0, other.y0) - min(self.y1, other.y1))
        return dx * dx + dy * dy


@dataclass(frozen=True)
class LatticeBlock:
    """Implicit disks at (x0 + i*step, y0 + j*step) inside the rectangle.

    Grid points lying inside any hole rectangle (inclusive bounds) carry no
    disk.  The generators cut holes one unit wider than each gadget so that
    fill disks keep a clear margin from gadget disks.
    """

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction
    step: Fraction
    holes: tuple[Rect, ...] = ()

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError("degenerate block bounds")
        if self.step <= 0:
            raise ValueError("block step must be positive")

    @property
    def nx(self) -> int:
        return int((self.x1 - self.x0) / self.step)

    @property
    def ny(self) -> int:
        return int((self.y1 - self.y0) / self.step)

    def _point_alive(self, x: Fraction, y: Fraction) -> bool:
        return not any(h.contains(x, y) for h in self.holes)

    def iter_disks(self) -> Iterator[Point]:
        for i in range(self.nx + 1):
            x = self.x0 + i * self.step
            for j in range(self.ny + 1):
                y = self.y0 + j * self.step
                if self._point_alive(x, y):
                    yield Point(x, y)

    def near_points(self, p: Point, reach: Fraction) -> Iterator[Point]:
        """Lattice points of the block within Chebyshev distance reach of p."""
        px, py = p.x, p.y
        if isinstance(px, Fraction):
            xlo = xhi = px
        else:
            iv = to_interval(px, 64)
            xlo, xhi = iv.lo, iv.hi
        if isinstance(py, Fraction):
            ylo = yhi = py
        else:
            iv = to_interval(py, 64)
            ylo, yhi = iv.lo, iv.hi
        i0 = max(0, _ceil_div(xlo - reach - self.x0, self.step))
        i1 = min(self.nx, _floor_div(xhi + reach - self.x0, self.step))
        j0 = max(0, _ceil_div(ylo - reach - self.y0, self.step))
        j1 = min(self.ny, _floor_div(yhi + reach - self.y0, self.step))
        for i in range(i0, i1 + 1):
            x = self.x0 + i * self.step
            for j in range(j0, j1 + 1):
                y = self.y0 + j * self.step
                if self._point_alive(x, y):
                    yield Point(x, y)


def _floor_div(a: Fraction, b: Fraction) -> int:
    q = a / b
    return q.numerator // q.denominator


def _ceil_div(a: Fraction, b: Fraction) -> int:
    return -_floor_div(-a, b)


@dataclass(frozen=True)
class Instance:
    variant: str
    k: int
    d2: Fraction
    disks: tuple[Disk, ...]
    blocks: tuple[LatticeBlock, ...] = ()

    def __post_init__(self):
        if self.variant not in ("euclidean", "rectilinear"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.d2 < 0:
            raise ValueError("d2 must be nonnegative")


@dataclass
class Witness:
    moves: dict[int, Point]


# ---------------------------------------------------------------------------
# parsing / writing

def _logical_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((no, body.split()))
    return out


class _Cursor:
    def __init__(self, lines):
        self.lines = lines
        self.pos = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.lines):
            last = self.lines[-1][0] if self.lines else 0
            raise ParseError(last + 1, f"unexpected end of file, expected {what}")
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def _expect_kv(cursor: _Cursor, key: str) -> tuple[int, str]:
    no, toks = cursor.next(f"'{key}:'")
    if len(toks) != 2 or toks[0] != f"{key}:":
        raise ParseError(no, f"expected '{key}: <value>'")
    return no, toks[1]


def _rat(no: int, tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(no, f"bad rational {tok!r}") from None


def parse_instance(text: str) -> Instance:
    cur = _Cursor(_logical_lines(text))
    no, toks = cur.next("header")
    if " ".join(toks) != INSTANCE_HEADER:
        raise ParseError(no, f"expected header {INSTANCE_HEADER!r}")

    no, variant = _expect_kv(cur, "variant")
    if variant not in ("euclidean", "rectilinear"):
        raise ParseError(no, f"unknown variant {variant!r}")

    no, ktok = _expect_kv(cur, "k")
    try:
        k = int(ktok)
    except ValueError:
        raise ParseError(no, f"bad integer {ktok!r}") from None
    if k < 0:
        raise ParseError(no, "k must be nonnegative")

    no, dtok = _expect_kv(cur, "d2")
    d2 = _rat(no, dtok)
    if d2 < 0:
        raise ParseError(no, "d2 must be nonnegative")

    no, ntok = _expect_kv(cur, "disks")
    try:
        n = int(ntok)
    except ValueError:
        raise ParseError(no, f"bad integer {ntok!r}") from None
    if n < 0:
        raise ParseError(no, "disk count must be nonnegative")

    disks = []
    for _ in range(n):
        no, toks = cur.next("disk coordinates")
        if len(toks) != 2:
            raise ParseError(no, "expected two coordinates")
        disks.append(Point(_parse_coord(no, toks[0]), _parse_coord(no, toks[1])))

    blocks: list[LatticeBlock] = []
    if not cur.done():
        no, btok = _expect_kv(cur, "blocks")
        try:
            nb = int(btok)
        except ValueError:
            raise ParseError(no, f"bad integer {btok!r}") from None
        for _ in range(nb):
            no, toks = cur.next("block definition")
            if len(toks) != 8 or toks[4] != "step" or toks[6] != "holes":
                raise ParseError(
                    no, "expected 'x0 y0 x1 y1 step <s> holes <h>'")
            x0, y0, x1, y1 = (_rat(no, t) for t in toks[:4])
            step = _rat(no, toks[5])
            try:
                nh = int(toks[7])
            except ValueError:
                raise ParseError(no, f"bad integer {toks[7]!r}") from None
            if step <= 0:
                raise ParseError(no, "block step must be positive")
            if x0 > x1 or y0 > y1:
                raise ParseError(no, "block rectangle is inverted")
            holes = []
            for _ in range(nh):
                hno, htoks = cur.next("hole rectangle")
                if len(htoks) != 4:
                    raise ParseError(hno, "expected 'x0 y0 x1 y1'")
                hx0, hy0, hx1, hy1 = (_rat(hno, t) for t in htoks)
                if hx0 > hx1 or hy0 > hy1:
                    raise ParseError(hno, "hole rectangle is inverted")
                holes.append(Rect(hx0, hy0, hx1, hy1))
            blocks.append(LatticeBlock(x0, y0, x1, y1, step, tuple(holes)))

    if not cur.done():
        no, toks = cur.next("")
        raise ParseError(no, f"unexpected trailing content {' '.join(toks)!r}")
    return Instance(variant, k, d2, tuple(disks), tuple(blocks))


def _parse_coord(no: int, tok: str) -> Scalar:
    try:
        return parse_scalar(tok)
    except ValueError:
        raise ParseError(no, f"bad coordinate {tok!r}") from None


def write_instance(inst: Instance) -> str:
    out = [INSTANCE_HEADER,
           f"variant: {inst.variant}",
           f"k: {inst.k}",
           f"d2: {inst.d2}",
           f"disks: {len(inst.disks)}"]
    for d in inst.disks:
        out.append(f"{format_scalar(d.x)} {format_scalar(d.y)}")
    out.append(f"blocks: {len(inst.blocks)}")
    for b in inst.blocks:
        out.append(f"{b.x0} {b.y0} {b.x1} {b.y1} step {b.step} holes {len(b.holes)}")
        for h in b.holes:
            out.append(f"{h.x0} {h.y0} {h.x1} {h.y1}")
    return "\n".join(out) + "\n"


def parse_witness(text: str) -> Witness:
    cur = _Cursor(_logical_lines(text))
    no, toks = cur.next("header")
    if " ".join(toks) != WITNESS_HEADER:
        raise ParseError(no, f"expected header {WITNESS_HEADER!r}")
    no, mtok = _expect_kv(cur, "moves")
    try:
        m = int(mtok)
    except ValueError:
        raise ParseError(no, f"bad integer {mtok!r}") from None
    moves: dict[int, Point] = {}
    for _ in range(m):
        no, toks = cur.next("move line")
        if len(toks) != 4 or toks[1] != "->":
            raise ParseError(no, "expected '<index> -> <x> <y>'")
        try:
            idx = int(toks[0])
        except ValueError:
            raise ParseError(no, f"bad index {toks[0]!r}") from None
        if idx < 0:
            raise ParseError(no, "negative disk index")
        if idx in moves:
            raise ParseError(no, f"duplicate move for disk {idx}")
        moves[idx] = Point(_parse_coord(no, toks[2]), _parse_coord(no, toks[3]))
    if not cur.done():
        no, toks = cur.next("")
        raise ParseError(no, f"unexpected trailing content {' '.join(toks)!r}")
    return Witness(moves)


def write_witness(w: Witness) -> str:
    out = [WITNESS_HEADER, f"moves: {len(w.moves)}"]
    for idx in sorted(w.moves):
        p = w.moves[idx]
        out.append(f"{idx} -> {format_scalar(p.x)} {format_scalar(p.y)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationResult:
    status: str  # accept | reject | indeterminate
    reason: Optional[str] = None
    detail: object = None
    eps: Optional[Fraction] = None

    @property
    def accepted(self) -> bool:
        return self.status == "accept"

    def __str__(self):
        if self.status == "accept":
            return f"accept({self.eps})" if self.eps is not None else "accept"
        if self.reason and self.detail is not None:
            return f"{self.status}({self.reason}, {self.detail})"
        if self.reason:
            return f"{self.status}({self.reason})"
        return self.status


def _pair_separated(a: Point, b: Point, threshold: Fraction) -> bool:
    """dist2(a, b) >= threshold, raising on indeterminate interval overlap."""
    o = compare(dist2(a, b), threshold)
    if o is Ordering.INDETERMINATE:
        raise IndeterminateError(f"separation of {a} and {b}")
    return o is not Ordering.LESS


def _packing_violation(disks: Sequence[Point], threshold: Fraction):
    n = len(disks)
    if n > 128 and all(d.is_rational() for d in disks):
        return _packing_violation_bucketed(disks, threshold)
    for i in range(n):
        for j in range(i + 1, n):
            if not _pair_separated(disks[i], disks[j], threshold):
                return (i, j)
    return None


def _packing_violation_bucketed(disks, threshold):
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, d in enumerate(disks):
        key = (d.x.numerator // (2 * d.x.denominator),
               d.y.numerator // (2 * d.y.denominator))
        buckets.setdefault(key, []).append(i)
    best = None
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
                        if best is not None and (i, j) >= best:
                            continue
                        if not _pair_separated(disks[i], disks[j], threshold):
                            best = (i, j)
    return best


def validate_witness(inst: Instance, w: Witness,
                     eps: Optional[Fraction] = None) -> ValidationResult:
    """Check a move assignment against an instance.

    eps=None is exact mode.  In tolerant mode separation thresholds drop to
    4 - eps and the move budget grows to d2 + eps; acceptance is then
    reported together with the eps used.
    """
    for idx in w.moves:
        if not (0 <= idx < len(inst.disks)):
            raise ValueError(f"witness index {idx} out of range")
    if len(w.moves) > inst.k:
        return ValidationResult("reject", "budget", len(w.moves), eps)

    sep = Fraction(4) if eps is None else Fraction(4) - eps
    budget = inst.d2 if eps is None else inst.d2 + eps

    try:
        for idx, target in sorted(w.moves.items()):
            if not within_move(inst.disks[idx], target, budget, inst.variant):
                return ValidationResult("reject", "move", idx, eps)

        final = [w.moves.get(i, d) for i, d in enumerate(inst.disks)]
        bad = _packing_violation(final, sep)
        if bad is not None:
            return ValidationResult("reject", "packing", bad, eps)

        for block in inst.blocks:
            if block.step < 2:
                return ValidationResult("reject", "block-step", block.step, eps)
            for i, p in enumerate(final):
                for q in block.near_points(p, Fraction(2)):
                    if not _pair_separated(p, q, sep):
                        return ValidationResult("reject", "block", i, eps)
        for bi in range(len(inst.blocks)):
            for bj in range(bi + 1, len(inst.blocks)):
                pair = _blocks_conflict(inst.blocks[bi], inst.blocks[bj], sep)
                if pair is not None:
                    return ValidationResult("reject", "block", (bi, bj), eps)
    except IndeterminateError as e:
        return ValidationResult("indeterminate", str(e), None, eps)

    return ValidationResult("accept", None, None, eps)


def _blocks_conflict(a: LatticeBlock, b: LatticeBlock, sep: Fraction):
    ra = Rect(a.x0, a.y0, a.x1, a.y1)
    rb = Rect(b.x0, b.y0, b.x1, b.y1)
    if ra.min_dist2_to(rb) >= sep:
        return None
    # blocks approach each other: walk the points of a near b's rectangle
    for p in a.iter_disks():
        if (rb.x0 - 2 <= p.x <= rb.x1 + 2) and (rb.y0 - 2 <= p.y <= rb.y1 + 2):
            for q in b.near_points(p, Fraction(2)):
                if not _pair_separated(p, q, sep):
                    return (p, q)
    return None


def apply_witness(inst: Instance, w: Witness) -> Instance:
    disks = tuple(w.moves.get(i, d) for i, d in enumerate(inst.disks))
    return Instance(inst.variant, inst.k, inst.d2, disks, inst.blocks)


def count_block_disks(inst: Instance, cap: int = 10 ** 6) -> int:
    total = 0
    for b in inst.blocks:
        for _ in b.iter_disks():
            total += 1
            if total > cap:
                return total
    return total


def expand_blocks(inst: Instance, cap: int = 10 ** 6) -> Instance:
    """Materialise block disks as explicit disks appended after the originals.

    Existing disk indices (and hence witnesses) stay valid.
    """
    extra: list[Point] = []
    for b in inst.blocks:
        for p in b.iter_disks():
            extra.append(p)
            if len(extra) > cap:
                raise ValueError(f"block expansion exceeds cap of {cap} disks")
    return Instance(inst.variant, inst.k, inst.d2,
                    inst.disks + tuple(extra), ())
