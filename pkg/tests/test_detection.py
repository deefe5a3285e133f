"""Cutting along curves, curve detection, and block classification."""

from fractions import Fraction

import pytest

from fixtures import A0, G1, P0, P1, PY, TORUS, TW, A0_WEIGHTS
from tracksmith.track_core import (
    BlockClass,
    DigraphArc,
    SmoothCycle,
    TrackParseError,
    TrainTrack,
    _interleaved,
    circuit_cycle,
    circuit_parallel_sides,
    circuits,
    classify_block,
    cut_along_smooth_cycle,
    cycle_crossing_signs,
    cycle_essentiality,
    detect_curves,
    digraph_cycles,
    export_dot,
    f_tau,
    parse_track,
    region_digraph,
    serialize_track,
    smooth_cycles,
    track,
    validate,
    verify_region_cycle,
)


def cycle_by_branches(t: TrainTrack, *bids: str) -> SmoothCycle:
    want = frozenset(bids)
    for cyc in smooth_cycles(t):
        if cyc.circle is None and cyc.branch_ids() == want:
            return cyc
    raise AssertionError(f"no cycle through {sorted(want)}")


# -- cutting ---------------------------------------------------------------


def test_cut_a0_loop_cycle_gives_two_collars():
    cyc = cycle_by_branches(A0, "c1")
    verdict, sides = cut_along_smooth_cycle(A0, cyc)
    assert verdict == "separating"
    assert sides is not None
    assert {s.surface() for s in sides} == {
        sides[0].surface().__class__(0, 2)
    }
    assert {s.boundary_circuits for s in sides} == {(1,), (2,)}
    assert sum(s.chi for s in sides) == 0


def test_cut_p0_waist_cycle_is_boundary_parallel():
    cyc = cycle_by_branches(P0, "b1", "b2")
    verdict, sides = cycle_essentiality(P0, cyc)
    assert verdict == "boundary_parallel"
    assert sides is not None
    shapes = sorted((s.genus, s.boundary, s.chi) for s in sides)
    assert shapes == [(0, 2, 0), (0, 3, -1)]
    collar = next(s for s in sides if s.is_boundary_collar())
    assert collar.boundary_circuits == (1,)


def test_cut_torus_circle_is_nonseparating():
    (cyc,) = smooth_cycles(TORUS)
    assert cycle_essentiality(TORUS, cyc) == ("nonseparating", None)


def test_circuit_parallel_a0_bounds_a_disk():
    verdict, sides = circuit_parallel_sides(A0, 0)
    assert verdict == "separating"
    assert sides is not None
    near, far = sides
    assert far.is_disk()
    assert (near.genus, near.boundary, near.chi) == (0, 3, -1)


def test_circuit_parallel_torus_core_is_nonseparating():
    assert circuit_parallel_sides(TORUS, 0) == ("nonseparating", None)


def test_circuit_parallel_rejects_boundary_circuit():
    with pytest.raises(ValueError):
        circuit_parallel_sides(A0, 1)


# -- crossing signs --------------------------------------------------------


def test_p0_waist_push_off_crosses_both_arms_same_sign():
    cyc = cycle_by_branches(P0, "b1", "b2")
    signed = cycle_crossing_signs(P0, cyc, "right")
    assert [a.branch for a, _ in signed] == ["a2", "a3"]
    assert len({s for _, s in signed}) == 1
    assert cycle_crossing_signs(P0, cyc, "left") == []


def test_a0_push_off_single_crossing():
    cyc = cycle_by_branches(A0, "c1")
    signed = cycle_crossing_signs(A0, cyc, "right")
    assert [(a.branch, a.switch) for a, _ in signed] == [("e", "X")]


# -- region digraph and chord tracing --------------------------------------


def test_p0_region_digraph_is_two_self_loops():
    arcs = region_digraph(P0)
    assert arcs == [DigraphArc("a2", "R", "R"), DigraphArc("a3", "R", "R")]


def test_p0_digraph_cycles():
    keys = {tuple(a.branch for a in w) for w in digraph_cycles(P0)}
    assert keys == {("a2",), ("a3",), ("a2", "a3")}


def test_interleaving_predicate():
    assert _interleaved(0, 2, 1, 3, 4)
    assert not _interleaved(2, 4, 6, 0, 8)
    assert not _interleaved(0, 6, 2, 4, 8)


def test_verify_p0_double_crossing_matches_hand_count():
    walk = next(
        w for w in digraph_cycles(P0)
        if tuple(a.branch for a in w) == ("a2", "a3")
    )
    res = verify_region_cycle(P0, walk)
    assert res is not None
    verdict, sides = res
    assert verdict == "boundary_parallel"
    assert sides is not None
    assert sorted((s.chi, s.boundary, s.genus) for s in sides) == [
        (-1, 3, 0),
        (0, 2, 0),
    ]


def test_verify_skips_non_disk_regions():
    lumpy = track(
        branches=[(b.id, f"{b.end0.switch}.{b.end0.port}",
                   f"{b.end1.switch}.{b.end1.port}") for b in P0.branches],
        orient=P0.orientation(),
        regions=[("R", 1, [0], 1)],
        boundary=[1, 2, 3],
    )
    walk = digraph_cycles(lumpy)[0]
    assert verify_region_cycle(lumpy, walk) is None


# -- curve detection -------------------------------------------------------


def test_detect_curves_a0_finds_nothing():
    assert detect_curves(A0) == []


def test_detect_curves_p0_keeps_waist_push_off():
    ws = detect_curves(P0)
    assert [w.kind for w in ws] == ["coherent"] * 3
    both = next(w for w in ws if w.crossings == ("a2", "a3"))
    assert both.shape == "push_off"
    assert both.verdict == "boundary_parallel"
    assert both.sides is not None
    assert sorted((s.genus, s.boundary) for s in both.sides) == [
        (0, 2),
        (0, 3),
    ]
    for w in ws:
        assert len(w.crossings) > 0


def test_detect_curves_torus_keeps_core():
    ws = detect_curves(TORUS)
    assert [(w.shape, w.verdict, w.circuit) for w in ws] == [
        ("circuit_parallel", "nonseparating", 0),
        ("circuit_parallel", "nonseparating", 1),
    ]


def test_detect_curves_reports_handle():
    ws = detect_curves(G1)
    handle = next(w for w in ws if w.shape == "handle")
    assert handle.kind == "disjoint"
    assert handle.verdict == "nonseparating"
    assert handle.region == "H"


def test_detect_curves_py_region_cycle():
    ws = detect_curves(PY)
    rc = next(w for w in ws if w.shape == "region_cycle")
    assert rc.crossings == ("a1", "a2")
    assert rc.verdict == "boundary_parallel"
    assert rc.sides is not None
    collar = next(s for s in rc.sides if s.is_boundary_collar())
    assert collar.boundary_circuits == (3,)


def test_detected_coherent_witnesses_cross_positively():
    for t in (A0, P0, P1, PY, TW):
        for w in detect_curves(t):
            if w.kind == "coherent":
                assert len(w.crossings) > 0


# -- block classification --------------------------------------------------


def test_classify_a0_standard_annulus_mixed():
    bc = classify_block(A0)
    assert bc.kind == "standard_annulus"
    assert bc.orientation == "mixed"
    assert dict(bc.f) == {1: 0, 2: 0}
    assert bc.arcs == ("e",)


def test_classify_p0_basic():
    bc = classify_block(P0)
    assert bc.kind == "basic"
    assert bc.cond1
    assert dict(bc.f) == {1: 0, 2: 0, 3: 0}
    assert bc.arcs == ("a2", "a3")
    assert bc.layers == ()


def test_classify_p1_almost_basic():
    bc = classify_block(P1)
    assert bc.kind == "almost_basic"
    assert bc.cond1
    assert dict(bc.f) == {1: 2, 2: 0, 3: 0}


def test_classify_tower_generalized():
    bc = classify_block(TW)
    assert bc.kind == "generalized_basic"
    assert bc.core_kind == "basic"
    assert bc.core_f == (0, 0, 0)
    assert len(bc.layers) == 1
    layer = bc.layers[0]
    assert layer.arm == "na"
    assert layer.outer.branch_ids() == frozenset({"nb"})
    assert layer.inner.branch_ids() == frozenset({"c2a", "c2b"})
    assert bc.arcs == ("a2", "a3")


def test_classify_torus_is_not_a_block():
    assert classify_block(TORUS).kind == "none"


def test_classify_py_is_not_a_block():
    # the outer boundary circuit carries cusps
    assert classify_block(PY).kind == "none"


def test_f_tau_counts_direction_changes():
    waist0 = cycle_by_branches(P0, "b1", "b2")
    assert f_tau(P0, waist0) == 0
    waist1 = cycle_by_branches(P1, "b1", "b2")
    assert f_tau(P1, waist1) == 2
    assert f_tau(P1, waist1, exclude=frozenset({"a2"})) == 0


def test_circuit_cycle_parallel_to_cuff():
    cuff = next(c for c in circuits(P0) if c.index == 1)
    cyc = circuit_cycle(P0, cuff)
    assert cyc.branch_ids() == frozenset({"b1", "b2"})
    interior = next(c for c in circuits(P0) if c.index == 0)
    with pytest.raises(ValueError):
        circuit_cycle(P0, interior)


# -- text format -----------------------------------------------------------


def test_round_trip_all_fixtures():
    for t in (A0, P0, P1, PY, TORUS, TW, G1):
        text = serialize_track(t)
        t2, w2 = parse_track(text)
        assert set(t2.branches) == set(t.branches)
        assert set(t2.circles) == set(t.circles)
        assert set(t2.regions) == set(t.regions)
        assert t2.boundary == t.boundary
        assert w2 is None
        assert serialize_track(t2) == text


def test_round_trip_with_weights():
    text = serialize_track(A0, A0_WEIGHTS)
    assert "weight e 0/1" in text.splitlines()
    t2, w2 = parse_track(text)
    assert t2 == A0
    assert w2 is not None
    assert w2["c1"] == Fraction(1)
    assert w2["e"] == Fraction(0)


def test_round_trip_region_with_outer():
    t = TrainTrack(
        branches=TORUS.branches,
        circles=TORUS.circles,
        regions=(type(TORUS.regions[0])("R", 0, (0, 1), 2),),
        boundary=frozenset(),
    )
    text = serialize_track(t)
    assert "region R genus 0 outer 2 circuits 0 1" in text.splitlines()
    t2, _ = parse_track(text)
    assert t2.regions[0].outer == 2


def test_parse_comments_and_blanks():
    t, w = parse_track(
        "# a lone circle\n\ncircle K  # trailing comment\norient K left\n"
    )
    assert [c.id for c in t.circles] == ["K"]
    assert w is None


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("branch x A.L", 1, 13),
        ("branch e A.L B.Q", 1, 14),
        ("frob x", 1, 1),
        ("branch e A.L B.SL\nweight q 1/2", 2, 8),
        ("circle K\nweight K 1/0", 2, 10),
        ("circle K\ncircle K", 2, 8),
        ("region R genus x circuits 0", 1, 16),
        ("orient z left", 1, 8),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(TrackParseError) as err:
        parse_track(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_export_dot_a0():
    dot = export_dot(A0)
    lines = dot.splitlines()
    assert lines[0] == "graph track {"
    assert sum(1 for ln in lines if ln.endswith('";')) == 2
    assert sum(1 for ln in lines if " -- " in ln) == 3
    assert '"X" -- "Y" [label="e SR->SR plus=right"];' in dot


def test_export_dot_torus_circle_self_loop():
    dot = export_dot(TORUS)
    assert '"K" -- "K" [label="K plus=left"];' in dot


def test_fixture_validity():
    for t in (P1, TW, G1):
        assert validate(t) == []
