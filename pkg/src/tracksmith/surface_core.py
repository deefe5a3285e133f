"""Complexity bookkeeping for compact orientable surfaces.

A surface is a finite multiset of connected components, each recorded as a
(genus, boundary-count) pair.  The component complexity c0 is that pair with
the lexicographic order, and the convention that every real component beats
the empty surface.  The surface complexity c1 lists the c0 values of the
components that are neither disks nor annuli, in descending order; tuples of
different lengths are compared after right-padding the shorter one with the
empty sentinel.  Cutting along an essential, non boundary-parallel simple
closed curve strictly decreases c1, which is what makes c1 usable as a
termination measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class SurfaceComponent:
    """Connected compact orientable surface with `genus` and `boundary` circles."""

    genus: int
    boundary: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.boundary < 0:
            raise ValueError(f"bad component ({self.genus},{self.boundary})")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    def c0(self) -> tuple[int, int]:
        return (self.genus, self.boundary)

    def is_disk(self) -> bool:
        return self.genus == 0 and self.boundary == 1

    def is_annulus(self) -> bool:
        return self.genus == 0 and self.boundary == 2


Surface = tuple[SurfaceComponent, ...]

# Sentinel standing in for c0 of the empty surface: smaller than the c0 of
# any real component, including a sphere at (0, 0).
C0_EMPTY: tuple[int, int] = (-1, -1)


def surface(*pairs: tuple[int, int]) -> Surface:
    return tuple(SurfaceComponent(g, b) for g, b in pairs)


def euler(s: Iterable[SurfaceComponent]) -> int:
    return sum(comp.euler for comp in s)


def c1(s: Iterable[SurfaceComponent]) -> tuple[tuple[int, int], ...]:
    """Descending c0 tuple over the components that carry complexity.

    Disk and annulus components contribute nothing and are dropped, so the
    empty tuple is the minimum and is reached exactly by (unions of) disks
    and annuli.
    """
    values = [comp.c0() for comp in s if not (comp.is_disk() or comp.is_annulus())]
    values.sort(reverse=True)
    return tuple(values)


def compare_c1_values(
    a: tuple[tuple[int, int], ...], b: tuple[tuple[int, int], ...]
) -> int:
    """Lexicographic comparison with right padding by the empty sentinel."""
    n = max(len(a), len(b))
    pa = tuple(a) + (C0_EMPTY,) * (n - len(a))
    pb = tuple(b) + (C0_EMPTY,) * (n - len(b))
    if pa < pb:
        return -1
    if pa > pb:
        return 1
    return 0


def compare_c1(a: Iterable[SurfaceComponent], b: Iterable[SurfaceComponent]) -> int:
    return compare_c1_values(c1(a), c1(b))


def c1_less(a: Iterable[SurfaceComponent], b: Iterable[SurfaceComponent]) -> bool:
    return compare_c1(a, b) < 0


def cut_nonseparating(comp: SurfaceComponent) -> Surface:
    """Cut along a nonseparating simple closed curve: (g,b) -> (g-1, b+2)."""
    if comp.genus < 1:
        raise ValueError("nonseparating curve needs genus >= 1")
    return (SurfaceComponent(comp.genus - 1, comp.boundary + 2),)


def cut_separating(
    comp: SurfaceComponent, left: tuple[int, int]
) -> Surface:
    """Cut along a separating curve leaving `left = (g1, b1)` of the old
    genus and boundary on one side.

    Each side gains the cut circle as one new boundary component.  The curve
    must be essential (neither side a disk) and non boundary-parallel
    (neither side an annulus), which rules out sides with (g, b) in
    {(0,0), (0,1)} before the cut circle is added.
    """
    g1, b1 = left
    g2, b2 = comp.genus - g1, comp.boundary - b1
    if g1 < 0 or b1 < 0 or g2 < 0 or b2 < 0:
        raise ValueError("side does not fit inside the component")
    for g, b in ((g1, b1), (g2, b2)):
        if g == 0 and b == 0:
            raise ValueError("side would be a disk: curve not essential")
        if g == 0 and b == 1:
            raise ValueError("side would be an annulus: curve boundary-parallel")
    pieces = sorted(
        (SurfaceComponent(g1, b1 + 1), SurfaceComponent(g2, b2 + 1)),
        key=lambda comp: comp.c0(),
        reverse=True,
    )
    return tuple(pieces)


def all_cuts(comp: SurfaceComponent) -> Iterator[Surface]:
    """Every surface obtainable by one essential non boundary-parallel cut."""
    if comp.genus >= 1:
        yield cut_nonseparating(comp)
    seen: set[Surface] = set()
    for g1 in range(comp.genus + 1):
        for b1 in range(comp.boundary + 1):
            g2, b2 = comp.genus - g1, comp.boundary - b1
            if (g1, b1) in {(0, 0), (0, 1)} or (g2, b2) in {(0, 0), (0, 1)}:
                continue
            cut = cut_separating(comp, (g1, b1))
            if cut not in seen:
                seen.add(cut)
                yield cut


def replace_component(
    s: Iterable[SurfaceComponent], comp: SurfaceComponent, pieces: Surface
) -> Surface:
    """Surface obtained by cutting `comp` inside `s` into `pieces`."""
    out = list(s)
    out.remove(comp)
    out.extend(pieces)
    out.sort(key=lambda c: c.c0(), reverse=True)
    return tuple(out)
