"""Exact interval homeomorphisms and infinite block towers.

Everything lives on [-1, 1] over exact rationals.  PLHomeo is the workhorse:
an orientation-preserving homeomorphism stored as its breakpoint graph, closed
under composition, inverse, and conjugation.  LazyHomeo layers an infinite
cell plan on top, for maps that no finite breakpoint list can hold: towers of
conjugated blocks accumulating at a fixed point.  Evaluation takes a depth;
outside the cells materialized at that depth the map falls back to the
identity, which is the fixed-point closure of these constructions.

The two headline constructions are the six self-conjugacy equations
(solve_case) and Denjoy insertion (denjoy_blowup), plus the boundary-holonomy
admissibility rule for foliated I-bundles over a surface with boundary.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .surface_core import SurfaceComponent

Q = Fraction
DEFAULT_DEPTH = 12

Iv = tuple[Fraction, Fraction]
UNIT: Iv = (Q(-1), Q(1))


def _aff(src: Iv, dst: Iv, x: Fraction) -> Fraction:
    """Image of x under the increasing affine map taking src onto dst."""
    a, b = src
    c, d = dst
    return c + (x - a) * (d - c) / (b - a)


def _drop_collinear(pts: tuple[Iv, ...]) -> tuple[Iv, ...]:
    out = [pts[0]]
    for p in pts[1:]:
        while len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (p[0] - x1) == (p[1] - y1) * (x1 - x0):
                out.pop()
            else:
                break
        out.append(p)
    return tuple(out)


# -- piecewise-linear homeomorphisms ----------------------------------------


@dataclass(frozen=True)
class PLHomeo:
    """Orientation-preserving PL homeomorphism of [-1, 1].

    `points` is the full breakpoint graph, endpoints included; construction
    normalizes away collinear interior points, so equality is semantic.
    """

    points: tuple[Iv, ...]

    def __post_init__(self) -> None:
        pts = tuple((Q(x), Q(y)) for x, y in self.points)
        if not pts or pts[0] != (Q(-1), Q(-1)) or pts[-1] != (Q(1), Q(1)):
            raise ValueError("a pl map must fix -1 and 1")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or y1 <= y0:
                raise ValueError("a pl map must be strictly increasing")
        object.__setattr__(self, "points", _drop_collinear(pts))

    @classmethod
    def identity(cls) -> "PLHomeo":
        return cls(((Q(-1), Q(-1)), (Q(1), Q(1))))

    @cached_property
    def _xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.points)

    def __call__(self, x) -> Fraction:
        x = Q(x)
        if x < -1 or x > 1:
            raise ValueError(f"{x} is outside [-1, 1]")
        xs = self._xs
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        (x0, y0), (x1, y1) = self.points[lo], self.points[lo + 1]
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def inverse(self) -> "PLHomeo":
        return PLHomeo(tuple((y, x) for x, y in self.points))

    def compose(self, other: "PLHomeo") -> "PLHomeo":
        """self after other."""
        inv = other.inverse()
        xs = sorted({x for x, _ in other.points} | {inv(x) for x, _ in self.points})
        return PLHomeo(tuple((x, self(other(x))) for x in xs))

    def conjugate(self, by: "PLHomeo") -> "PLHomeo":
        """The copy of self transported through `by`: by . self . by^-1."""
        return by.compose(self).compose(by.inverse())

    def power(self, n: int) -> "PLHomeo":
        base = self if n >= 0 else self.inverse()
        out = PLHomeo.identity()
        for _ in range(abs(n)):
            out = base.compose(out)
        return out

    def mirrored(self) -> "PLHomeo":
        """Conjugate by x -> -x (stays orientation-preserving)."""
        return PLHomeo(tuple((-x, -y) for x, y in reversed(self.points)))

    def is_identity(self) -> bool:
        return self.points == ((Q(-1), Q(-1)), (Q(1), Q(1)))


def plh(*pairs) -> PLHomeo:
    """PLHomeo through the given interior breakpoints; endpoints implied."""
    interior = tuple((Q(x), Q(y)) for x, y in pairs)
    return PLHomeo(((Q(-1), Q(-1)),) + interior + ((Q(1), Q(1)),))


_PAIR_RE = re.compile(r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*\)")


def parse_pl(text: str) -> PLHomeo:
    """Read a `plh (x0,y0) (x1,y1) ...` literal with rational coordinates."""
    body = text.strip()
    if body.startswith("plh"):
        body = body[3:]
    pairs = _PAIR_RE.findall(body)
    leftover = _PAIR_RE.sub("", body).strip()
    if leftover:
        raise ValueError(f"unparsed pl literal fragment {leftover!r}")
    try:
        coords = [(Q(a), Q(b)) for a, b in pairs]
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"bad rational in pl literal: {err}") from None
    return plh(*coords)


def format_pl(h: PLHomeo) -> str:
    body = " ".join(f"({x},{y})" for x, y in h.points[1:-1])
    return f"plh {body}".rstrip()


def fixed_intervals(h: PLHomeo) -> tuple[Iv, ...]:
    """Maximal fixed sets of h, as closed intervals (points have lo == hi)."""
    found: list[Iv] = []
    for (x0, y0), (x1, y1) in zip(h.points, h.points[1:]):
        m = (y1 - y0) / (x1 - x0)
        if m == 1:
            if y0 == x0:
                found.append((x0, x1))
        else:
            xs = (y0 - m * x0) / (1 - m)
            if x0 <= xs <= x1:
                found.append((xs, xs))
    out: list[Iv] = []
    for lo, hi in sorted(found):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(hi, out[-1][1]))
        else:
            out.append((lo, hi))
    return tuple(out)


def displacement_pattern(h: PLHomeo) -> tuple[str, ...]:
    """Conjugacy invariant: fixed components ('p' point / 'i' interval)
    alternating with the sign of h(x) - x on the gaps between them."""
    out: list[str] = []
    prev: Fraction | None = None
    for a, b in fixed_intervals(h):
        if prev is not None:
            mid = (prev + a) / 2
            out.append("+" if h(mid) > mid else "-")
        out.append("i" if a != b else "p")
        prev = b
    return tuple(out)


def transport(h: PLHomeo, src: Iv, dst: Iv) -> PLHomeo:
    """[-1,1]-model of h restricted to src, which h must carry onto dst."""
    a, b = src
    if h(a) != dst[0] or h(b) != dst[1]:
        raise ValueError("map does not carry the source cell onto the target cell")
    xs = sorted({a, b} | {x for x, _ in h.points if a < x < b})
    return PLHomeo(tuple((_aff(src, UNIT, x), _aff(dst, UNIT, h(x))) for x in xs))


def concatenate(u: PLHomeo, v: PLHomeo, a=Q(0)) -> PLHomeo:
    """The map that is the affine copy of u on [-1, a] and of v on [a, 1].

    The choice of a changes the map but not its conjugacy class; see
    conjugator_between for the explicit conjugator.
    """
    a = Q(a)
    if not -1 < a < 1:
        raise ValueError("concatenation point must be interior")
    lo = tuple((_aff(UNIT, (Q(-1), a), x), _aff(UNIT, (Q(-1), a), y)) for x, y in u.points)
    hi = tuple((_aff(UNIT, (a, Q(1)), x), _aff(UNIT, (a, Q(1)), y)) for x, y in v.points)
    return PLHomeo(lo + hi[1:])


def conjugator_between(a1, a2) -> PLHomeo:
    """PL map carrying the a1-concatenation subdivision to the a2 one."""
    return plh((Q(a1), Q(a2)))


# -- lazily evaluated cell plans ---------------------------------------------


@dataclass(frozen=True)
class Cell:
    """One block of a plan: the affine copy of `block` mapping src onto dst.

    Cells with src == dst fix their endpoints; shift cells (src != dst) carry
    conjugators between towers.
    """

    src: Iv
    dst: Iv
    block: PLHomeo
    label: str = ""

    def apply(self, x: Fraction) -> Fraction:
        if self.block.is_identity():
            return _aff(self.src, self.dst, x)
        return _aff(UNIT, self.dst, self.block(_aff(self.src, UNIT, x)))


@dataclass(frozen=True)
class LazyHomeo:
    """Homeomorphism given by a depth-indexed cell plan.

    plan(d) returns the cells materialized at depth d, pairwise
    non-overlapping; deeper plans extend shallower ones toward the
    accumulation points.  Off all cells the map is evaluated as the identity
    (the fixed-point closure), and `pins` force isolated exact values.
    """

    plan: Callable[[int], tuple[Cell, ...]]
    pins: tuple[Iv, ...] = ()
    label: str = ""

    def at(self, x, depth: int = DEFAULT_DEPTH) -> tuple[Fraction, bool]:
        """(value, resolved): resolved is False on the beyond-depth fallback."""
        x = Q(x)
        if x < -1 or x > 1:
            raise ValueError(f"{x} is outside [-1, 1]")
        for px, py in self.pins:
            if x == px:
                return py, True
        for cell in self.plan(depth):
            if cell.src[0] <= x <= cell.src[1]:
                return cell.apply(x), True
        return x, False

    def __call__(self, x, depth: int = DEFAULT_DEPTH) -> Fraction:
        return self.at(x, depth)[0]

    def inverse(self) -> "LazyHomeo":
        plan = self.plan

        @functools.cache
        def inv_plan(d: int) -> tuple[Cell, ...]:
            return tuple(
                Cell(c.dst, c.src, c.block.inverse(), _flip_label(c.label))
                for c in plan(d)
            )

        return LazyHomeo(inv_plan, tuple((y, x) for x, y in self.pins),
                         _flip_label(self.label))

    def mirrored(self) -> "LazyHomeo":
        plan = self.plan

        @functools.cache
        def mir_plan(d: int) -> tuple[Cell, ...]:
            return tuple(
                Cell((-c.src[1], -c.src[0]), (-c.dst[1], -c.dst[0]),
                     c.block.mirrored(), c.label)
                for c in plan(d)
            )

        return LazyHomeo(mir_plan, tuple((-x, -y) for x, y in self.pins),
                         self.label)

    def describe(self, depth: int = 4) -> tuple[str, ...]:
        lines = []
        for c in sorted(self.plan(depth), key=lambda c: c.src):
            tag = c.label or format_pl(c.block)
            lines.append(
                f"[{c.src[0]},{c.src[1]}] -> [{c.dst[0]},{c.dst[1]}]: {tag}"
            )
        return tuple(lines)


def _flip_label(label: str) -> str:
    if not label or label == "id":
        return label
    return label[:-3] if label.endswith("^-1") else label + "^-1"


def evaluate(h: PLHomeo | LazyHomeo, x, depth: int = DEFAULT_DEPTH) -> Fraction:
    """Value of h at x; LazyHomeo maps are materialized to `depth` cells."""
    if isinstance(h, PLHomeo):
        return h(x)
    return h(x, depth)


def _at(h: PLHomeo | LazyHomeo, x: Fraction, depth: int) -> tuple[Fraction, bool]:
    if isinstance(h, PLHomeo):
        return h(x), True
    return h.at(x, depth)


def _grid(n: int) -> Iterable[Fraction]:
    return (Q(-1) + Q(2 * i, n + 1) for i in range(1, n + 1))


# -- the six self-conjugacy constructions -------------------------------------

# Two tower shapes carry all six: the symmetric double tower
# [-1,-1/2],[-1/2,-1/3],... ,[1/3,1/2],[1/2,1] accumulating at 0 from both
# sides, and the single tower [-1,0],[0,1/2],[1/2,2/3],... accumulating at 1
# (mirrored for the left-handed relations).  In each case the relation's
# right-hand side has the same block sequence on a shifted subdivision, and
# the witness is the cell-matching map with identity blocks.


def _sym_cell(k: int, side: int) -> Iv:
    if side < 0:
        return (Q(-1, k), Q(-1, k + 1))
    return (Q(1, k + 1), Q(1, k))


def _right_cell(k: int) -> Iv:
    if k == 0:
        return (Q(-1), Q(0))
    return (Q(k - 1, k), Q(k, k + 1))


def _tower_double(u: PLHomeo, v: PLHomeo, alternate: bool) -> LazyHomeo:
    ui, vi = u.inverse(), v.inverse()

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = []
        for k in range(1, d + 1):
            odd = k % 2 == 1
            bu, lu = (u, "u") if odd or not alternate else (ui, "u^-1")
            bv, lv = (v, "v") if odd or not alternate else (vi, "v^-1")
            cells.append(Cell(_sym_cell(k, -1), _sym_cell(k, -1), bu, lu))
            cells.append(Cell(_sym_cell(k, +1), _sym_cell(k, +1), bv, lv))
        return tuple(sorted(cells, key=lambda c: c.src))

    return LazyHomeo(plan, pins=((Q(0), Q(0)),), label="tau")


def _shift_double() -> LazyHomeo:
    idm = PLHomeo.identity()

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = []
        for k in range(1, d + 1):
            src_l, src_r = _sym_cell(k, -1), _sym_cell(k, +1)
            if k == 1:
                dst_l, dst_r = src_l, src_r
            else:
                # the affine copy of cell k-1 inside the middle half
                dst_l = (Q(-1, 2 * (k - 1)), Q(-1, 2 * k))
                dst_r = (Q(1, 2 * k), Q(1, 2 * (k - 1)))
            cells.append(Cell(src_l, dst_l, idm, "id"))
            cells.append(Cell(src_r, dst_r, idm, "id"))
        return tuple(sorted(cells, key=lambda c: c.src))

    return LazyHomeo(plan, pins=((Q(0), Q(0)),), label="shift")


def _tower_right(u: PLHomeo, alternate: bool) -> LazyHomeo:
    ui = u.inverse()

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = []
        for k in range(0, d + 1):
            b, lab = (u, "u") if not alternate or k % 2 == 0 else (ui, "u^-1")
            cells.append(Cell(_right_cell(k), _right_cell(k), b, lab))
        return tuple(cells)

    return LazyHomeo(plan, label="tau")


def _shift_right() -> LazyHomeo:
    idm = PLHomeo.identity()

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = [Cell(_right_cell(0), _right_cell(0), idm, "id")]
        for k in range(1, d + 1):
            plo, phi = _right_cell(k - 1)
            dst = ((plo + 1) / 2, (phi + 1) / 2)
            cells.append(Cell(_right_cell(k), dst, idm, "id"))
        return tuple(cells)

    return LazyHomeo(plan, label="shift")


def _chain(parts: tuple) -> LazyHomeo:
    """Assemble outer PL blocks and embedded lazy maps into one plan.

    parts: tuples (interval, PLHomeo, label) or (interval, LazyHomeo).
    """

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = []
        for part in parts:
            iv, h = part[0], part[1]
            if isinstance(h, PLHomeo):
                cells.append(Cell(iv, iv, h, part[2]))
            else:
                for c in h.plan(d):
                    cells.append(Cell(
                        (_aff(UNIT, iv, c.src[0]), _aff(UNIT, iv, c.src[1])),
                        (_aff(UNIT, iv, c.dst[0]), _aff(UNIT, iv, c.dst[1])),
                        c.block, c.label,
                    ))
        return tuple(sorted(cells, key=lambda c: c.src))

    pins = []
    for part in parts:
        iv, h = part[0], part[1]
        if isinstance(h, LazyHomeo):
            pins.extend(
                (_aff(UNIT, iv, x), _aff(UNIT, iv, y)) for x, y in h.pins
            )
    return LazyHomeo(plan, pins=tuple(pins), label="chain")


@dataclass(frozen=True)
class ConjugacyWitness:
    """Conjugator h with h . tau = target . h, cell by cell up to `depth`."""

    h: LazyHomeo
    relation: str  # one of "a".."f"
    depth: int


CASES = ("a", "b", "c", "d", "e", "f")
_NEEDS_V = {"a": True, "b": True, "c": False, "d": True, "e": False, "f": True}


def solve_case(case: str, u: PLHomeo, v: PLHomeo | None = None,
               depth: int = DEFAULT_DEPTH) -> tuple[LazyHomeo, ConjugacyWitness]:
    """Build tau conjugate to the stated concatenation of u, v, tau, tau^-1.

    a) u.tau^-1.v   b) u.tau.v   c) u.tau   d) tau.v   e) u.tau^-1   f) tau^-1.v
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if _NEEDS_V[case] and v is None:
        raise ValueError(f"case {case} needs v")
    if not _NEEDS_V[case] and v is not None:
        raise ValueError(f"case {case} takes no v")
    if case == "a":
        tau, h = _tower_double(u, v, alternate=True), _shift_double()
    elif case == "b":
        tau, h = _tower_double(u, v, alternate=False), _shift_double()
    elif case == "c":
        tau, h = _tower_right(u, alternate=False), _shift_right()
    elif case == "e":
        tau, h = _tower_right(u, alternate=True), _shift_right()
    elif case == "d":
        tau = _tower_right(v.mirrored(), alternate=False).mirrored()
        h = _shift_right().mirrored()
    else:  # f
        tau = _tower_right(v.mirrored(), alternate=True).mirrored()
        h = _shift_right().mirrored()
    return tau, ConjugacyWitness(h, case, depth)


def case_target(case: str, u: PLHomeo | None, v: PLHomeo | None,
                tau: LazyHomeo) -> LazyHomeo:
    """The relation's right-hand side as a concatenation plan."""
    half = Q(1, 2)
    if case == "a":
        return _chain((((Q(-1), -half), u, "u"), ((-half, half), tau.inverse()),
                       ((half, Q(1)), v, "v")))
    if case == "b":
        return _chain((((Q(-1), -half), u, "u"), ((-half, half), tau),
                       ((half, Q(1)), v, "v")))
    if case == "c":
        return _chain((((Q(-1), Q(0)), u, "u"), ((Q(0), Q(1)), tau)))
    if case == "e":
        return _chain((((Q(-1), Q(0)), u, "u"), ((Q(0), Q(1)), tau.inverse())))
    if case == "d":
        return _chain((((Q(-1), Q(0)), tau), ((Q(0), Q(1)), v, "v")))
    if case == "f":
        return _chain((((Q(-1), Q(0)), tau.inverse()), ((Q(0), Q(1)), v, "v")))
    raise ValueError(f"unknown case {case!r}")


def check_witness(case: str, u: PLHomeo | None, v: PLHomeo | None,
                  tau: LazyHomeo, witness: ConjugacyWitness,
                  depth: int | None = None,
                  samples: int = 1200) -> tuple[Fraction, int]:
    """Sup of |h(tau(x)) - target(h(x))| over the resolved grid points.

    Returns (residual, resolved-point count).  Points where any factor falls
    back beyond its depth are skipped: the construction is only materialized
    that far, and within it the conjugacy is exact.
    """
    if depth is None:
        depth = witness.depth
    target = case_target(case, u, v, tau)
    h = witness.h
    sup, n = Q(0), 0
    for x in _grid(samples):
        tx, r1 = tau.at(x, depth)
        left, r2 = h.at(tx, depth)
        hx, r3 = h.at(x, depth)
        right, r4 = target.at(hx, depth)
        if r1 and r2 and r3 and r4:
            n += 1
            sup = max(sup, abs(left - right))
    return sup, n


# -- conjugacy testing ---------------------------------------------------------


def conjugator(f: PLHomeo, g: PLHomeo) -> LazyHomeo:
    """An explicit c with c . f = g . c, as orbit towers on the fixed-set gaps.

    Requires matching displacement patterns; raises otherwise.  Fixed
    components map to each other affinely, and each fixed-point-free gap is
    tiled by fundamental domains [f^n(x0), f^n+1(x0)] matched to the g-side.
    """
    if displacement_pattern(f) != displacement_pattern(g):
        raise ValueError("maps have different displacement patterns")
    ff, fg = fixed_intervals(f), fixed_intervals(g)
    idm = PLHomeo.identity()
    pins = tuple((a1, a2) for (a1, b1), (a2, _b2) in zip(ff, fg) if a1 == b1)

    finv, ginv = f.inverse(), g.inverse()

    @functools.cache
    def plan(d: int) -> tuple[Cell, ...]:
        cells = []
        for (a1, b1), (a2, b2) in zip(ff, fg):
            if a1 != b1:
                cells.append(Cell((a1, b1), (a2, b2), idm, "id"))
        for i in range(len(ff) - 1):
            x0 = (ff[i][1] + ff[i + 1][0]) / 2
            z0 = (fg[i][1] + fg[i + 1][0]) / 2
            base = plh(*sorted(((x0, z0), (f(x0), g(z0)))))
            gw = fbw = idm  # g^n and f^-n, advanced together
            xa, za = x0, z0
            for n in range(d):
                xb, zb = f(xa), g(za)
                src = (xa, xb) if xa < xb else (xb, xa)
                dst = (za, zb) if za < zb else (zb, za)
                comp = gw.compose(base).compose(fbw)
                cells.append(Cell(src, dst, transport(comp, src, dst),
                                  f"g^{n}.c.f^-{n}"))
                gw, fbw = g.compose(gw), fbw.compose(finv)
                xa, za = xb, zb
            gw = fw = idm  # g^-n and f^n this time
            xa, za = x0, z0
            for n in range(1, d + 1):
                gw, fw = ginv.compose(gw), f.compose(fw)
                xb, zb = finv(xa), ginv(za)
                src = (xa, xb) if xa < xb else (xb, xa)
                dst = (za, zb) if za < zb else (zb, za)
                comp = gw.compose(base).compose(fw)
                cells.append(Cell(src, dst, transport(comp, src, dst),
                                  f"g^-{n}.c.f^{n}"))
                xa, za = xb, zb
        return tuple(sorted(cells, key=lambda c: c.src))

    return LazyHomeo(plan, pins=pins, label="conjugator")


def are_conjugate(f: PLHomeo, g: PLHomeo, depth: int = 6,
                  samples: int = 240) -> bool:
    """Decide conjugacy by displacement pattern, then verify the witness."""
    if displacement_pattern(f) != displacement_pattern(g):
        return False
    c = conjugator(f, g)
    for x in _grid(samples):
        left, r1 = c.at(f(x), depth)
        cx, r2 = c.at(x, depth)
        if r1 and r2 and left != g(cx):
            raise AssertionError("conjugator failed its own residual check")
    return True


# -- Denjoy insertion ----------------------------------------------------------


def _default_lengths(n: int) -> Fraction:
    return Q(1, 8) * Q(1, 4) ** abs(n)


@dataclass(frozen=True)
class Blowup:
    """A homeomorphism with intervals inserted along a finite orbit segment.

    `map` acts on the renormalized [-1, 1]; `inserted` lists (old point, old
    gap length); `gaps` the inserted intervals in new coordinates; `seams`
    the old-coordinate zones where the truncated orbit forced plain
    interpolation, so the collapse identity is only guaranteed off them.
    """

    source: PLHomeo
    map: PLHomeo
    inserted: tuple[Iv, ...]
    gaps: tuple[tuple[Fraction, Fraction, Fraction], ...]
    seams: tuple[Iv, ...]

    @property
    def total(self) -> Fraction:
        return sum((l for _, l in self.inserted), Q(0))

    def insert(self, x) -> Fraction:
        """Old coordinate -> new (left gap end at inserted points)."""
        x = Q(x)
        s = sum((l for q, l in self.inserted if q < x), Q(0))
        return (2 * (x + s) - self.total) / (2 + self.total)

    def project(self, y) -> Fraction:
        """New coordinate -> old; constant on each gap."""
        y = Q(y)
        if y < -1 or y > 1:
            raise ValueError(f"{y} is outside [-1, 1]")
        anchors: list[Iv] = [(Q(-1), Q(-1))]
        for lo, hi, q in self.gaps:
            anchors.append((lo, q))
            anchors.append((hi, q))
        anchors.append((Q(1), Q(1)))
        for (y0, x0), (y1, x1) in zip(anchors, anchors[1:]):
            if y0 <= y <= y1:
                if x0 == x1:
                    return x0
                return x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        raise AssertionError("unreachable")

    def in_gap(self, y) -> bool:
        y = Q(y)
        return any(lo < y < hi for lo, hi, _ in self.gaps)


def denjoy_blowup(mu: PLHomeo, points: Iterable, lengths=None, *,
                  depth: int = 16) -> Blowup:
    """Insert an interval at each point of the mu-orbit of `points`.

    The orbit is followed `depth` steps each way; gap lengths come from
    `lengths(n)` at orbit position n (geometric with ratio 1/4 by default).
    Off the gaps the new map is the old one transported through the
    insertion; each gap maps affinely onto the gap at the next orbit point,
    so a gap at a fixed point is fixed pointwise.  Where the truncation cuts
    the orbit, the map interpolates plainly; those zones are reported as
    seams and shrink as depth grows.
    """
    rule = lengths if lengths is not None else _default_lengths
    gap: dict[Fraction, Fraction] = {}
    inv = mu.inverse()
    for p in points:
        p = Q(p)
        if not -1 < p < 1:
            raise ValueError("blow-up points must be interior")
        if p not in gap:
            gap[p] = Q(rule(0))
        q = p
        for n in range(1, depth + 1):
            q = mu(q)
            if q in gap:
                break
            gap[q] = Q(rule(n))
        q = p
        for n in range(1, depth + 1):
            q = inv(q)
            if q in gap:
                break
            gap[q] = Q(rule(-n))

    inserted = tuple(sorted(gap.items()))
    total = sum(gap.values())

    def beta(x: Fraction) -> Fraction:
        return x + sum((l for q, l in inserted if q < x), Q(0))

    def norm(t: Fraction) -> Fraction:
        return (2 * t - total) / (2 + total)

    anchors = sorted(
        {Q(-1), Q(1)}
        | {x for x, _ in mu.points}
        | set(gap)
        | {e for iv in fixed_intervals(mu) for e in iv}
    )
    pairs = [(norm(beta(x)), norm(beta(mu(x)))) for x in anchors]
    for q, l in inserted:
        mq = mu(q)
        if mq in gap:
            pairs.append((norm(beta(q) + l), norm(beta(mq) + gap[mq])))
    pairs.sort()
    kept = [pairs[0]]
    for x, y in pairs[1:]:
        if x > kept[-1][0] and y > kept[-1][1]:
            kept.append((x, y))
    if kept[-1] != (Q(1), Q(1)):
        kept.append((Q(1), Q(1)))
    mu_prime = PLHomeo(tuple(kept))

    gaps = tuple(
        (norm(beta(q)), norm(beta(q) + l), q) for q, l in inserted
    )
    b = Blowup(mu, mu_prime, inserted, gaps, ())
    return Blowup(mu, mu_prime, inserted, gaps, _truncation_seams(b))


def collapse(b: Blowup) -> PLHomeo:
    """Crush every gap back to its point: the blown-up map in old coordinates."""
    pairs = [(b.project(x), b.project(y)) for x, y in b.map.points]
    kept = [pairs[0]]
    for x, y in pairs[1:]:
        if x > kept[-1][0] and y > kept[-1][1]:
            kept.append((x, y))
    return PLHomeo(tuple(kept))


def _pl_difference(f: PLHomeo, g: PLHomeo) -> tuple[Iv, ...]:
    """Closure of {f != g}, as merged intervals on the joint subdivision."""
    xs = sorted({x for x, _ in f.points} | {x for x, _ in g.points})
    out: list[Iv] = []
    for x0, x1 in zip(xs, xs[1:]):
        if f(x0) != g(x0) or f(x1) != g(x1):
            if out and out[-1][1] == x0:
                out[-1] = (out[-1][0], x1)
            else:
                out.append((x0, x1))
    return tuple(out)


def _truncation_seams(b: Blowup) -> tuple[Iv, ...]:
    """Old-coordinate zones where project(map(y)) != source(project(y)).

    Both sides are piecewise linear in the new coordinate, so disagreement is
    decided endpoint-wise on their joint subdivision.  The zones sit where
    the truncated orbit ends: the last materialized gap has no aligned image
    gap, and the map interpolates plainly across it.
    """
    mu, mp = b.source, b.map
    mpinv = mp.inverse()
    ys = {x for x, _ in mp.points}
    for lo, hi, _q in b.gaps:
        ys |= {lo, hi, mpinv(lo), mpinv(hi)}
    for x, _ in mu.points:
        yy = b.insert(x)
        ys |= {yy, mpinv(yy)}
    grid = sorted(ys)
    agree = [b.project(mp(y)) == mu(b.project(y)) for y in grid]
    merged: list[Iv] = []
    for i in range(len(grid) - 1):
        if agree[i] and agree[i + 1]:
            continue
        if merged and merged[-1][1] == grid[i]:
            merged[-1] = (merged[-1][0], grid[i + 1])
        else:
            merged.append((grid[i], grid[i + 1]))
    out: list[Iv] = []
    for y0, y1 in merged:
        x0, x1 = b.project(y0), b.project(y1)
        if x0 == x1:
            continue  # deviation confined to one gap's interior
        if out and out[-1][1] >= x0:
            out[-1] = (out[-1][0], x1)
        else:
            out.append((x0, x1))
    return tuple(out)


# -- foliated I-bundle boundary holonomy ---------------------------------------


@dataclass(frozen=True)
class IBundleVerdict:
    accepted: bool
    rule: str


def validate_ibundle_spec(
    component: SurfaceComponent,
    assignment: Mapping[int, PLHomeo] | Sequence[PLHomeo],
) -> IBundleVerdict:
    """Admissibility of boundary holonomies for a foliated I-bundle.

    Over a non-planar component one boundary circle may carry arbitrary
    holonomy with the rest trivial; over a planar one (never a disk) two
    circles may carry mutually inverse holonomies, up to conjugacy.
    """
    if component.boundary == 0:
        raise ValueError("the base surface must have boundary")
    if component.is_disk():
        raise ValueError("a disk admits no such foliated I-bundle")
    if not isinstance(assignment, Mapping):
        assignment = dict(enumerate(assignment))
    for i in assignment:
        if not 0 <= i < component.boundary:
            raise ValueError(f"no boundary circle {i}")
    loaded = sorted(
        i for i, h in assignment.items() if not h.is_identity()
    )
    if component.genus > 0:
        if len(loaded) <= 1:
            return IBundleVerdict(True, "one boundary circle carries the "
                                        "holonomy, the rest are trivial")
        return IBundleVerdict(False, "a non-planar base admits only one "
                                     "holonomy-carrying boundary circle")
    if not loaded:
        return IBundleVerdict(True, "trivial product bundle")
    if len(loaded) == 2:
        h1, h2 = assignment[loaded[0]], assignment[loaded[1]]
        if are_conjugate(h2, h1.inverse()):
            return IBundleVerdict(True, "planar base with an inverse pair "
                                        "of boundary holonomies")
        return IBundleVerdict(False, "the two holonomies are not mutually "
                                     "inverse up to conjugacy")
    return IBundleVerdict(False, "a planar base admits exactly an inverse "
                                 "pair of holonomy-carrying circles")
