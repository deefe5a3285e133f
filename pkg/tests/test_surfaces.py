from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import oracle_c1, oracle_c1_less, oracle_cuts, oracle_euler
from tracksmith.surface_core import (
    C0_EMPTY,
    SurfaceComponent,
    all_cuts,
    c1,
    c1_less,
    compare_c1,
    cut_nonseparating,
    cut_separating,
    euler,
    replace_component,
    surface,
)

components = st.tuples(st.integers(0, 5), st.integers(0, 6)).map(
    lambda t: SurfaceComponent(*t)
)
surfaces = st.lists(components, max_size=5).map(tuple)


def test_component_basics():
    t = SurfaceComponent(2, 3)
    assert t.euler == -5
    assert t.c0() == (2, 3)
    assert SurfaceComponent(0, 1).is_disk()
    assert SurfaceComponent(0, 2).is_annulus()
    assert not SurfaceComponent(1, 0).is_disk()
    with pytest.raises(ValueError):
        SurfaceComponent(-1, 0)


def test_c0_empty_below_everything():
    for g in range(4):
        for b in range(4):
            assert C0_EMPTY < SurfaceComponent(g, b).c0()


def test_c1_drops_disks_and_annuli():
    s = surface((1, 2), (0, 1), (0, 2), (2, 0), (0, 3))
    assert c1(s) == ((2, 0), (1, 2), (0, 3))
    assert c1(surface((0, 1), (0, 2))) == ()


@given(surfaces)
def test_c1_matches_oracle(s):
    assert list(c1(s)) == oracle_c1([c.c0() for c in s])


@given(surfaces, surfaces)
def test_order_matches_padded_lex_oracle(a, b):
    assert c1_less(a, b) == oracle_c1_less(list(c1(a)), list(c1(b)))


@given(surfaces, surfaces)
def test_order_is_total_and_antisymmetric(a, b):
    cmp = compare_c1(a, b)
    assert cmp in (-1, 0, 1)
    assert (cmp == 0) == (c1(a) == c1(b))
    assert compare_c1(b, a) == -cmp


@given(surfaces, surfaces, surfaces)
def test_order_transitive(a, b, c):
    if c1_less(a, b) and c1_less(b, c):
        assert c1_less(a, c)


def test_strict_subsurface_padding():
    # A proper prefix is strictly smaller: fewer large pieces loses.
    big = surface((2, 1), (1, 1))
    small = surface((2, 1))
    assert c1_less(small, big)
    assert c1_less(surface(), small)


@given(surfaces)
def test_euler_additive(s):
    assert euler(s) == sum(oracle_euler(*c.c0()) for c in s)


def test_nonseparating_cut():
    assert cut_nonseparating(SurfaceComponent(3, 1)) == (SurfaceComponent(2, 3),)
    with pytest.raises(ValueError):
        cut_nonseparating(SurfaceComponent(0, 4))


def test_separating_cut():
    pieces = cut_separating(SurfaceComponent(2, 2), (1, 0))
    assert pieces == (SurfaceComponent(1, 3), SurfaceComponent(1, 1))
    # Disk and annulus sides are not essential/non-parallel cuts.
    with pytest.raises(ValueError):
        cut_separating(SurfaceComponent(2, 2), (0, 0))
    with pytest.raises(ValueError):
        cut_separating(SurfaceComponent(2, 2), (0, 1))
    with pytest.raises(ValueError):
        cut_separating(SurfaceComponent(1, 0), (1, 0))  # other side a disk


def test_all_cuts_match_enumeration_oracle():
    for g in range(6):
        for b in range(7):
            comp = SurfaceComponent(g, b)
            got = sorted(
                sorted([p.c0() for p in pieces], reverse=True)
                for pieces in all_cuts(comp)
            )
            want = sorted(oracle_cuts(g, b))
            assert got == want, (g, b)


def test_every_cut_strictly_decreases_complexity():
    # Exhaustive over the stated range: the heart of the termination order.
    for g in range(6):
        for b in range(7):
            comp = SurfaceComponent(g, b)
            before = surface(comp.c0())
            for pieces in all_cuts(comp):
                after = tuple(pieces)
                assert c1_less(after, before), (comp, pieces)


@given(surfaces)
def test_cut_strict_decrease_inside_larger_surface(s):
    for comp in set(s):
        if comp.genus == 0 and comp.boundary <= 2:
            continue
        for pieces in all_cuts(comp):
            after = replace_component(s, comp, pieces)
            assert c1_less(after, s)
            assert euler(after) == euler(s)


def test_cut_preserves_euler():
    for g in range(6):
        for b in range(7):
            comp = SurfaceComponent(g, b)
            for pieces in all_cuts(comp):
                assert sum(p.euler for p in pieces) == comp.euler


def test_replace_component_sorts_descending():
    s = surface((2, 0), (1, 1))
    out = replace_component(s, SurfaceComponent(2, 0), cut_nonseparating(SurfaceComponent(2, 0)))
    assert list(out) == sorted(out, reverse=True)
    with pytest.raises(ValueError):
        replace_component(s, SurfaceComponent(5, 5), ())


def test_compare_is_genuinely_lex_not_sum():
    # (2,0) alone beats three copies of (1,1) even though total genus ties.
    a = surface((2, 0))
    b = surface((1, 1), (1, 1), (1, 1))
    assert c1_less(b, a)
