"""Elementary moves on weighted train tracks and the normalizations built
from them: splitting a large branch, collapsing an embedded bigon,
straightening an almost basic block, and the full reduction procedure.

Every move rebuilds the complementary-region data by matching boundary
circuits of the old and new tracks through surviving branch sides, with an
Euler-characteristic budget per move kind; a move that cannot account for
its budget raises instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .track_core import (
    BlockClass,
    Branch,
    Circle,
    Circuit,
    Complexity,
    Component,
    CurveWitness,
    End,
    RegionSpec,
    SmoothCycle,
    TrainTrack,
    Weights,
    circuit_cycle,
    circuits,
    classify_block,
    compare_complexity,
    complexity_of,
    cycle_attachments,
    cycle_essentiality,
    detect_curves,
    f_tau,
    flag_sign,
    index_sum,
    is_boundary_cycle,
    is_large,
    sigma,
    smooth_cycles,
    surface_components,
    track_pieces,
    validate,
)

State = tuple[str, str]


def _flip(side: str) -> str:
    return "left" if side == "right" else "right"


@dataclass(frozen=True)
class MoveRecord:
    """One trace entry: what was rewritten and the complexity around it."""

    move: str
    site: tuple[str, ...]
    before: Complexity
    after: Complexity


@dataclass(frozen=True)
class ReductionOutcome:
    """Result of the reduction procedure: exactly one of a curve disjoint
    from the track, a coherently crossing curve, or per-component block
    classifications."""

    kind: str  # "disjoint" | "coherent" | "blocks"
    witness: CurveWitness | None = None
    blocks: tuple[tuple[str, BlockClass], ...] = ()

    def __post_init__(self) -> None:
        if self.kind in ("disjoint", "coherent"):
            if self.witness is None or self.blocks:
                raise ValueError(f"{self.kind} outcome needs exactly a witness")
        elif self.kind == "blocks":
            if self.witness is not None:
                raise ValueError("blocks outcome carries no curve witness")
        else:
            raise ValueError(f"unknown outcome kind {self.kind!r}")


# -- chain assembly ---------------------------------------------------------


def _assemble_chains(
    survivors: list[Branch],
    joints: list[tuple[tuple[str, int], tuple[str, int]]],
    w: Weights | None,
) -> tuple[list[Branch], list[Circle], dict[State, State], dict[str, Fraction]]:
    """Concatenate branches across end identifications.

    Each joint glues two branch ends into a smooth strand (the switches
    there have dissolved).  Jointed fragments must agree in weight and in
    transverse orientation.  Closed chains become circles.  Returns the
    new branch and circle lists, the state relabelling for every survivor,
    and the weights of the assembled strands.
    """
    by_id = {b.id: b for b in survivors}
    partner: dict[tuple[str, int], tuple[str, int]] = {}
    for a, b in joints:
        for s in (a, b):
            if s in partner:
                raise ValueError(f"end {s} glued twice")
            if s[0] not in by_id:
                raise ValueError(f"end {s} is not a surviving branch")
        partner[a] = b
        partner[b] = a

    touched = {s[0] for s in partner}
    out_branches = [b for b in survivors if b.id not in touched]
    out_circles: list[Circle] = []
    state_map: dict[State, State] = {
        (b.id, side): (b.id, side)
        for b in out_branches
        for side in ("left", "right")
    }
    new_w: dict[str, Fraction] = {}

    def walk(start: tuple[str, int]) -> list[tuple[str, int]]:
        # fragments as (branch id, entry end); the chain leaves each
        # fragment through the opposite end.
        frags = []
        slot = start
        while True:
            bid, k = slot
            frags.append((bid, k))
            nxt = partner.get((bid, 1 - k))
            if nxt is None or nxt == start:
                return frags
            slot = nxt

    def adjusted_plus(frag: tuple[str, int]) -> str:
        b = by_id[frag[0]]
        return b.plus if frag[1] == 0 else _flip(b.plus)

    def record(frags: list[tuple[str, int]], nid: str) -> None:
        for bid, k in frags:
            if k == 0:
                state_map[(bid, "left")] = (nid, "left")
                state_map[(bid, "right")] = (nid, "right")
            else:
                state_map[(bid, "left")] = (nid, "right")
                state_map[(bid, "right")] = (nid, "left")

    def check(frags: list[tuple[str, int]], what: str) -> str:
        plus = adjusted_plus(frags[0])
        if any(adjusted_plus(f) != plus for f in frags):
            raise ValueError(f"transverse orientations disagree along {what}")
        if w is not None and len({w[f[0]] for f in frags}) != 1:
            raise ValueError(f"weights disagree along {what}")
        return plus

    done: set[str] = set()
    free = sorted(
        (bid, k)
        for bid in touched
        for k in (0, 1)
        if (bid, k) not in partner
    )
    for start in free:
        if start[0] in done:
            continue
        frags = walk(start)
        done.update(f[0] for f in frags)
        plus = check(frags, "a fused strand")
        nid = frags[0][0]
        first = by_id[frags[0][0]]
        last_bid, last_k = frags[-1]
        last = by_id[last_bid]
        e0 = first.end0 if frags[0][1] == 0 else first.end1
        e1 = last.end1 if last_k == 0 else last.end0
        out_branches.append(Branch(nid, e0, e1, plus))
        if w is not None:
            new_w[nid] = w[frags[0][0]]
        record(frags, nid)

    for bid in sorted(touched):
        if bid in done:
            continue
        frags = walk((bid, 0))
        done.update(f[0] for f in frags)
        plus = check(frags, "a closed strand")
        out_circles.append(Circle(bid, plus))
        if w is not None:
            new_w[bid] = w[bid]
        record(frags, bid)

    return out_branches, out_circles, state_map, new_w


# -- circuit reconciliation -------------------------------------------------


def _reconcile(
    told: TrainTrack,
    branches: tuple[Branch, ...],
    new_circles: tuple[Circle, ...],
    state_map: dict[State, State],
    deficit: int,
) -> TrainTrack:
    """Rebuild regions and boundary after a move.

    Old circuits are matched to new ones through surviving states.  Each
    connected cluster (old circuits, the regions owning them, new
    circuits) becomes one region of the result.  `deficit` is the total
    drop in region Euler characteristic the move causes; it is spent
    first on fully dead clusters and then on the single surgered live
    one, and any mismatch raises.
    """
    bare = TrainTrack(branches, new_circles, (), frozenset())
    old_circs = circuits(told)
    new_circs = circuits(bare)
    loc: dict[State, int] = {}
    for c in new_circs:
        for st in c.steps:
            loc[st] = c.index

    parent: dict[tuple, tuple] = {}

    def find(x: tuple) -> tuple:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: tuple, b: tuple) -> None:
        parent[find(a)] = find(b)

    regions_by_id = {r.id: r for r in told.regions}
    for r in told.regions:
        for i in r.circuits:
            union(("r", r.id), ("o", i))
    for c in old_circs:
        find(("o", c.index))
        for st in c.steps:
            ns = state_map.get(st)
            if ns is not None and ns in loc:
                union(("o", c.index), ("n", loc[ns]))
    for c in new_circs:
        find(("n", c.index))

    clusters: dict[tuple, dict[str, list]] = {}
    for node in list(parent):
        cl = clusters.setdefault(find(node), {"o": [], "n": [], "r": []})
        cl[node[0]].append(node[1])

    boundary: set[int] = set()
    new_regions: list[RegionSpec] = []
    dead_chi = 0
    surgered: list[dict[str, list]] = []

    for cl in clusters.values():
        olds, news, rids = cl["o"], cl["n"], sorted(set(cl["r"]))
        if not news:
            if not rids or any(i in told.boundary for i in olds):
                raise ValueError("a boundary circuit died in a move")
            for rid in rids:
                r = regions_by_id[rid]
                if r.outer:
                    raise ValueError(
                        f"region {rid} died with outer boundary inside"
                    )
                dead_chi += r.euler
            continue
        if not olds:
            raise ValueError("a circuit appeared from nowhere")
        absorbed = [i for i in olds if i in told.boundary]
        if not rids and len(absorbed) == len(olds) == len(news) == 1:
            boundary.add(news[0])
            continue
        if (
            len(rids) == 1
            and not absorbed
            and len(olds) == len(news)
            and set(olds) == set(regions_by_id[rids[0]].circuits)
        ):
            r = regions_by_id[rids[0]]
            new_regions.append(
                RegionSpec(r.id, r.genus, tuple(sorted(news)), r.outer)
            )
            continue
        surgered.append(cl)

    live_share = deficit - dead_chi
    if live_share not in (0, len(surgered)) or len(surgered) > 1:
        raise ValueError(
            f"unaccounted surgery: deficit {deficit}, dead {dead_chi}, "
            f"{len(surgered)} reshaped clusters"
        )
    taken = {r.id for r in new_regions}
    for cl in surgered:
        rids = sorted(set(cl["r"]))
        absorbed = [i for i in cl["o"] if i in told.boundary]
        chi = sum(regions_by_id[rid].euler for rid in rids) - live_share
        outer = sum(regions_by_id[rid].outer for rid in rids) + len(absorbed)
        news = sorted(cl["n"])
        if rids:
            rid = rids[0]
        else:
            rid = f"W{news[0]}"
            while rid in taken:
                rid += "_"
        taken.add(rid)
        b = len(news) + outer
        if (chi + b) % 2:
            raise ValueError("reshaped region has non-integral genus")
        genus = (2 - chi - b) // 2
        if genus < 0:
            raise ValueError("reshaped region has negative genus")
        new_regions.append(RegionSpec(rid, genus, tuple(news), outer))

    new_regions.sort(key=lambda r: r.id)
    return TrainTrack(
        branches, new_circles, tuple(new_regions), frozenset(boundary)
    )


def _identity_states(t: TrainTrack, skip: frozenset[str]) -> dict[State, State]:
    out: dict[State, State] = {}
    for b in t.branches:
        if b.id in skip:
            continue
        out[(b.id, "left")] = (b.id, "left")
        out[(b.id, "right")] = (b.id, "right")
    for c in t.circles:
        out[(c.id, "left")] = (c.id, "left")
        out[(c.id, "right")] = (c.id, "right")
    return out


# -- splitting --------------------------------------------------------------


@dataclass(frozen=True)
class SplitSite:
    """A large branch together with the four small branches at its ends."""

    branch: str
    x_sl: str
    x_sr: str
    y_sl: str
    y_sr: str


def split_site(t: TrainTrack, bid: str) -> SplitSite:
    if not is_large(t, bid):
        raise ValueError(f"{bid} is not a large branch")
    b = t.branch(bid)
    pm = t.port_map()
    return SplitSite(
        bid,
        pm[(b.end0.switch, "SL")][0],
        pm[(b.end0.switch, "SR")][0],
        pm[(b.end1.switch, "SL")][0],
        pm[(b.end1.switch, "SR")][0],
    )


def _moved(branches: dict[str, Branch], bid: str, k: int, end: End) -> None:
    b = branches[bid]
    branches[bid] = (
        Branch(b.id, end, b.end1, b.plus)
        if k == 0
        else Branch(b.id, b.end0, end, b.plus)
    )


def split(
    t: TrainTrack,
    w: Weights,
    site: SplitSite,
    direction: str = "by_weights",
) -> tuple[TrainTrack, Weights]:
    """Split a large branch left, right, or centrally.

    Under by_weights the sign of d = w(x_sl) - w(y_sr) picks the
    direction: positive left, negative right, zero central.  A left or
    right split replaces the branch by a diagonal of weight |d| joining
    the two relocated cusps; a central split deletes the branch and fuses
    the small strands pairwise, which may disconnect the track or close
    strands into circles.
    """
    if not is_large(t, site.branch):
        raise ValueError(f"{site.branch} is not a large branch")
    e = t.branch(site.branch)
    u, v = e.end0.switch, e.end1.switch
    if u == v:
        raise ValueError("large branch with both ends on one switch")
    pm = t.port_map()
    x_sl, x_sr = pm[(u, "SL")], pm[(u, "SR")]
    y_sl, y_sr = pm[(v, "SL")], pm[(v, "SR")]
    d = w[x_sl[0]] - w[y_sr[0]]
    if direction == "by_weights":
        direction = "left" if d > 0 else ("right" if d < 0 else "central")
    elif direction == "central" and d != 0:
        raise ValueError(f"central split needs matching weights, d = {d}")
    if direction not in ("left", "right", "central"):
        raise ValueError(f"unknown split direction {direction!r}")

    branches = {b.id: b for b in t.branches}
    del branches[site.branch]

    if direction == "central":
        bs, fresh, state_map, fused_w = _assemble_chains(
            list(branches.values()), [(x_sl, y_sr), (x_sr, y_sl)], w
        )
        for c in t.circles:
            state_map[(c.id, "left")] = (c.id, "left")
            state_map[(c.id, "right")] = (c.id, "right")
        circles = tuple(sorted(t.circles + tuple(fresh), key=lambda c: c.id))
        keep = {b.id for b in bs} | {c.id for c in circles}
        wv = {k: val for k, val in w.values.items() if k in keep}
        wv.update(fused_w)
        tnew = _reconcile(
            t,
            tuple(sorted(bs, key=lambda b: b.id)),
            circles,
            state_map,
            deficit=1,
        )
        return tnew, Weights(wv)

    if direction == "left":
        # the strand from end0's SL carries the excess; it forks into the
        # diagonal and the strand leaving through end1's SR.
        _moved(branches, *x_sl, End(u, "L"))
        _moved(branches, *y_sr, End(u, "SR"))
        _moved(branches, *y_sl, End(v, "L"))
        _moved(branches, *x_sr, End(v, "SR"))
        ref, ref_k = x_sl
        ends = (End(u, "SL"), End(v, "SL"))
    else:
        _moved(branches, *x_sr, End(u, "L"))
        _moved(branches, *y_sl, End(u, "SL"))
        _moved(branches, *y_sr, End(v, "L"))
        _moved(branches, *x_sl, End(v, "SL"))
        ref, ref_k = x_sr
        ends = (End(u, "SR"), End(v, "SR"))
    # transverse orientation of the diagonal from consistency at u
    want = flag_sign(branches[ref].plus) * sigma("L", ref_k) * sigma(
        ends[0].port, 0
    )
    branches[site.branch] = Branch(
        site.branch, ends[0], ends[1], "left" if want == 1 else "right"
    )
    wv = dict(w.values)
    wv[site.branch] = abs(d)

    tnew = _reconcile(
        t,
        tuple(sorted(branches.values(), key=lambda b: b.id)),
        t.circles,
        _identity_states(t, frozenset({site.branch})),
        deficit=0,
    )
    return tnew, Weights(wv)


# -- bigon collapse ----------------------------------------------------------


def _bigon_runs(circ: Circuit) -> tuple[list[State], list[State]]:
    n = len(circ.steps)
    at = [i for i in range(n) if circ.cusps[i]]
    if len(at) != 2:
        raise ValueError("not a two-cusp circuit")
    i, j = at
    run1 = [circ.steps[k % n] for k in range(i + 1, i + 1 + (j - i))]
    run2 = [circ.steps[k % n] for k in range(j + 1, j + 1 + (i - j) % n)]
    return run1, run2


def collapse_bigon_weighted(
    t: TrainTrack, w: Weights | None, region_id: str
) -> tuple[TrainTrack, Weights | None]:
    """Collapse an embedded two-cusp disk region, carrying weights along.

    The two bounding chains are identified into one strand: the chain
    walked with the circuit keeps its branches, the opposite chain's
    interior switches re-hang past them, and the cusp strands at both end
    switches fuse smoothly onto the strand.  A branch showing up twice
    around the bigon, a bounding circle, or a cusp strand re-entering the
    bigon all mean the disk's closure is not injective and the move is
    rejected.
    """
    region = next((r for r in t.regions if r.id == region_id), None)
    if region is None:
        raise ValueError(f"no region {region_id}")
    if region.euler != 1 or len(region.circuits) != 1:
        raise ValueError(f"region {region_id} is not an embedded disk")
    circ = next(c for c in circuits(t) if c.index == region.circuits[0])
    if sum(circ.cusps) != 2:
        raise ValueError(f"region {region_id} does not have exactly 2 cusps")
    run1, run2 = _bigon_runs(circ)
    used = [bid for bid, _ in run1 + run2]
    if len(set(used)) != len(used):
        raise ValueError("bigon is not embedded: a branch bounds it twice")
    circle_ids = {c.id for c in t.circles}
    if any(bid in circle_ids for bid in used):
        raise ValueError("bigon is not embedded: bounded by a circle")

    # chain A runs with the circuit, chain B against it; both go from the
    # cusp switch P where A starts to the cusp switch Q where A ends.
    a_dirs = [(bid, 0 if side == "left" else 1) for bid, side in run1]
    b_dirs = [
        (bid, 1 if side == "left" else 0) for bid, side in reversed(run2)
    ]

    def entry(frag: tuple[str, int]) -> End:
        return t.branch(frag[0]).end(frag[1])

    def exit_(frag: tuple[str, int]) -> End:
        return t.branch(frag[0]).end(1 - frag[1])

    p_sw, q_sw = entry(a_dirs[0]).switch, exit_(a_dirs[-1]).switch
    if (
        p_sw == q_sw
        or entry(b_dirs[0]).switch != p_sw
        or exit_(b_dirs[-1]).switch != q_sw
    ):
        raise ValueError("bigon chains do not join two distinct switches")
    pm = t.port_map()
    lp, lq = pm[(p_sw, "L")], pm[(q_sw, "L")]
    if lp[0] in used or lq[0] in used:
        raise ValueError("bigon is not embedded: its cusp strand bounds it")

    branches = {b.id: b for b in t.branches}
    wv = dict(w.values) if w is not None else None
    b0 = b_dirs[0]
    if wv is not None:
        # overlaid strand weights: chain A segments gain B's entry weight,
        # B's re-hung segments gain A's exit weight
        b_entry, a_exit = wv[b0[0]], wv[a_dirs[-1][0]]
        for bid, _k in a_dirs:
            wv[bid] += b_entry
        for bid, _k in b_dirs[1:]:
            wv[bid] += a_exit
    if len(b_dirs) > 1:
        target = exit_(b0)
        ak, ak_enter = a_dirs[-1]
        _moved(branches, ak, 1 - ak_enter, target)
    del branches[b0[0]]

    last = b_dirs[-1] if len(b_dirs) > 1 else a_dirs[-1]
    joints = [
        (lp, (a_dirs[0][0], a_dirs[0][1])),
        (lq, (last[0], 1 - last[1])),
    ]
    mid_w = Weights(wv) if wv is not None else None
    bs, fresh, fuse_map, fused_w = _assemble_chains(
        list(branches.values()), joints, mid_w
    )

    pre = _identity_states(t, frozenset({b0[0]}))
    for st in run1 + run2:
        pre.pop(st, None)
    # the deleted fragment's outward side continues across the collapsed
    # disk onto chain A's last segment
    pre[(b0[0], _flip(run2[-1][1]))] = (a_dirs[-1][0], run1[-1][1])
    state_map = {old: fuse_map.get(mid, mid) for old, mid in pre.items()}

    circles = tuple(sorted(t.circles + tuple(fresh), key=lambda c: c.id))
    tnew = _reconcile(
        t,
        tuple(sorted(bs, key=lambda b: b.id)),
        circles,
        state_map,
        deficit=1,
    )
    if wv is None:
        return tnew, None
    keep = {b.id for b in tnew.branches} | {c.id for c in tnew.circles}
    wv = {k: val for k, val in wv.items() if k in keep}
    wv.update(fused_w)
    return tnew, Weights(wv)


def collapse_bigon(t: TrainTrack, region_id: str) -> TrainTrack:
    """Collapse an embedded two-cusp disk region."""
    return collapse_bigon_weighted(t, None, region_id)[0]


# -- component plumbing ------------------------------------------------------


def subtrack(t: TrainTrack, comp: Component) -> TrainTrack:
    """Extract one component of F as a standalone track, boundary and
    regions reindexed to its own circuit numbering."""
    pieces = {p.id: p for p in track_pieces(t)}
    bids: set[str] = set()
    cids: set[str] = set()
    for pid in comp.piece_ids:
        p = pieces[pid]
        bids |= p.branch_ids
        if p.circle_id is not None:
            cids.add(p.circle_id)
    branches = tuple(b for b in t.branches if b.id in bids)
    circles = tuple(c for c in t.circles if c.id in cids)
    loc: dict[State, int] = {}
    for c in circuits(TrainTrack(branches, circles, (), frozenset())):
        for st in c.steps:
            loc[st] = c.index
    remap = {
        c.index: loc[c.steps[0]]
        for c in circuits(t)
        if c.steps[0] in loc
    }
    regions = tuple(
        RegionSpec(
            r.id, r.genus, tuple(sorted(remap[i] for i in r.circuits)), r.outer
        )
        for r in sorted(t.regions, key=lambda r: r.id)
        if r.id in comp.region_ids
    )
    boundary = frozenset(remap[i] for i in t.boundary if i in remap)
    return TrainTrack(branches, circles, regions, boundary)


def merge_tracks(parts: list[TrainTrack]) -> TrainTrack:
    """Disjoint union of tracks, circuit indices renumbered globally."""
    branches = tuple(b for p in parts for b in p.branches)
    circles = tuple(c for p in parts for c in p.circles)
    ids = [b.id for b in branches] + [c.id for c in circles]
    if len(set(ids)) != len(ids):
        raise ValueError("merged tracks share ids")
    loc: dict[State, int] = {}
    for c in circuits(TrainTrack(branches, circles, (), frozenset())):
        for st in c.steps:
            loc[st] = c.index
    regions: list[RegionSpec] = []
    boundary: set[int] = set()
    for p in parts:
        remap = {c.index: loc[c.steps[0]] for c in circuits(p)}
        regions.extend(
            RegionSpec(
                r.id, r.genus, tuple(sorted(remap[i] for i in r.circuits)),
                r.outer,
            )
            for r in p.regions
        )
        boundary |= {remap[i] for i in p.boundary}
    regions.sort(key=lambda r: r.id)
    return TrainTrack(branches, circles, tuple(regions), frozenset(boundary))


def _component_blocks(t: TrainTrack) -> tuple[tuple[str, BlockClass], ...]:
    out = []
    for comp in surface_components(t):
        if not comp.piece_ids:
            raise ValueError("component without any track cannot be a block")
        out.append((comp.piece_ids[0], classify_block(subtrack(t, comp))))
    return tuple(out)


# -- move auditing -----------------------------------------------------------


def _audit(
    told: TrainTrack,
    tnew: TrainTrack,
    wnew: Weights | None,
    move: str,
    site: tuple[str, ...],
    trace: list[MoveRecord],
) -> None:
    probs = validate(tnew, wnew)
    if probs:
        raise RuntimeError(f"{move} at {site} broke the track: {probs[0]}")
    if index_sum(tnew) != index_sum(told):
        raise RuntimeError(f"{move} at {site} changed the index sum")
    before, after = complexity_of(told), complexity_of(tnew)
    if compare_complexity(after, before) > 0:
        raise RuntimeError(f"{move} at {site} increased complexity")
    trace.append(MoveRecord(move, site, before, after))


def _split_step(
    t: TrainTrack,
    w: Weights,
    bid: str,
    move: str,
    trace: list[MoveRecord],
) -> tuple[TrainTrack, Weights]:
    tnew, wnew = split(t, w, split_site(t, bid), "by_weights")
    _audit(t, tnew, wnew, move, (bid,), trace)
    return tnew, wnew


# -- straightening -----------------------------------------------------------


def _boundary_cycle_items(t: TrainTrack) -> list[tuple[int, SmoothCycle]]:
    out = []
    for c in circuits(t):
        if c.index in t.boundary and not any(c.cusps):
            out.append((c.index, circuit_cycle(t, c)))
    return out


def _opposed_pairs(
    t: TrainTrack, w: Weights, cyc: SmoothCycle
) -> list[tuple[tuple[Fraction, str], str]]:
    """Adjacent attachment pairs whose cusps point at each other, keyed for
    the smaller-weight-first, then least-id, split order.  The branch
    between such a pair is always large."""
    atts = cycle_attachments(t, cyc)
    n = len(atts)
    out = []
    for i in range(n):
        a, b = atts[i], atts[(i + 1) % n]
        if a.cusp_forward and not b.cusp_forward:
            mid = cyc.steps[(i + 1) % n][0]
            if not is_large(t, mid):
                raise RuntimeError(f"opposed cusps around non-large {mid}")
            key = (min(w[a.branch], w[b.branch]), min(a.branch, b.branch))
            out.append((key, mid))
    return out


def make_basic_block(
    t: TrainTrack, w: Weights, K: Component | None = None
) -> tuple[TrainTrack, Weights, tuple[MoveRecord, ...]]:
    """Split an almost basic block until every boundary cycle is cusp-
    coherent (f = 0).

    With K given, work is confined to that component and the rest of the
    track is carried through unchanged.  The count of settled boundary
    cycles strictly grows pass by pass, with at most one pass per
    boundary cycle.
    """
    if K is not None:
        comps = surface_components(t)
        if K not in comps:
            raise ValueError("component is not part of this track")
        rest = [subtrack(t, c) for c in comps if c != K]
        sub = subtrack(t, K)
        sub_ids = {b.id for b in sub.branches} | {c.id for c in sub.circles}
        w_sub = Weights(
            {k: v for k, v in w.values.items() if k in sub_ids}
        )
        done, w_done, trace = make_basic_block(sub, w_sub, None)
        merged = merge_tracks([done, *rest])
        wv = {k: v for k, v in w.values.items() if k not in sub_ids}
        wv.update(w_done.values)
        return merged, Weights(wv), trace

    probs = validate(t, w)
    if probs:
        raise ValueError(probs[0])
    for cyc in smooth_cycles(t):
        if not is_boundary_cycle(t, cyc):
            raise ValueError("block contains an interior smooth closed curve")
    kind = classify_block(t).kind
    if kind in ("basic", "standard_annulus"):
        return t, w, ()
    if kind != "almost_basic":
        raise ValueError(f"not an almost basic block: {kind}")

    trace: list[MoveRecord] = []
    items = _boundary_cycle_items(t)
    limit = len(items)
    settled = sum(1 for _, cyc in items if f_tau(t, cyc) == 0)
    passes = 0
    guard = 8 * max(1, len(t.branches)) * max(1, limit)
    while True:
        cands = []
        for _, cyc in _boundary_cycle_items(t):
            cands.extend(_opposed_pairs(t, w, cyc))
        if not cands:
            break
        if len(trace) >= guard:
            raise RuntimeError("straightening exceeded its move bound")
        _, mid = min(cands)
        t, w = _split_step(t, w, mid, "split", trace)
        now = sum(
            1 for _, cyc in _boundary_cycle_items(t) if f_tau(t, cyc) == 0
        )
        if now < settled:
            raise RuntimeError("straightening lost a settled boundary cycle")
        if now > settled:
            passes += 1
            settled = now
        if passes > limit:
            raise RuntimeError("straightening exceeded its pass bound")
    for key, cls in _component_blocks(t):
        if cls.kind not in ("basic", "standard_annulus"):
            raise RuntimeError(
                f"straightening left component {key} {cls.kind}"
            )
    return t, w, tuple(trace)


# -- reduction ---------------------------------------------------------------


def _essential(wit: CurveWitness) -> bool:
    return wit.verdict in ("nonseparating", "essential")


def _parallel_switches(t: TrainTrack) -> set[str]:
    out: set[str] = set()
    for cyc in smooth_cycles(t):
        if cyc.circle is not None:
            continue
        verdict, _ = cycle_essentiality(t, cyc)
        if verdict != "boundary_parallel":
            continue
        for bid, _d in cyc.steps:
            b = t.branch(bid)
            out.add(b.end0.switch)
            out.add(b.end1.switch)
    return out


def _finite_ray_site(t: TrainTrack) -> str | None:
    """A large branch some off-cycle vertex's cusp path runs into.

    The cusp at a switch points into its large port; the path continues
    smoothly and either hits an opposing cusp head-on (the last branch is
    large: a finite ray, return it) or repeats within 2 x branch count
    steps (a spiral, leave it alone).
    """
    on = _parallel_switches(t)
    pm = t.port_map()
    cap = 2 * max(1, len(t.branches))
    for sw in sorted(t.switch_ids()):
        if sw in on:
            continue
        bid, k = pm[(sw, "L")]
        seen: set[tuple[str, int]] = set()
        for _ in range(cap):
            far = t.branch(bid).end(1 - k)
            if far.port == "L":
                return bid
            if (bid, k) in seen:
                break
            seen.add((bid, k))
            bid, k = pm[(far.switch, "L")]
    return None


def _try_bigon(
    t: TrainTrack, w: Weights
) -> tuple[str, TrainTrack, Weights] | None:
    for r in sorted(t.regions, key=lambda r: r.id):
        try:
            tnew, wnew = collapse_bigon_weighted(t, w, r.id)
        except ValueError:
            continue
        assert wnew is not None
        return r.id, tnew, wnew
    return None


def reduce(
    t: TrainTrack, w: Weights
) -> tuple[TrainTrack, Weights, ReductionOutcome, tuple[MoveRecord, ...]]:
    """Run the two-case reduction to one of the three outcomes.

    Scans first for an essential curve missing the track (disjoint), then
    for an essential coherently-crossing one (coherent).  While an
    essential smooth cycle survives, opposed spiral pairs around it are
    split away, smaller weight first.  Otherwise embedded bigons are
    collapsed, finite cusp rays are split until every vertex sits on a
    boundary-parallel smooth cycle, and remaining opposed boundary cusps
    are straightened; what is left classifies block by block.
    """
    probs = validate(t, w)
    if probs:
        raise ValueError(probs[0])
    trace: list[MoveRecord] = []
    guard = 64 + 32 * (len(t.branches) + len(t.circles))
    while True:
        if len(trace) > guard:
            raise RuntimeError("reduction exceeded its move bound")
        wits = [x for x in detect_curves(t) if _essential(x)]
        for x in wits:
            if x.kind == "disjoint":
                return t, w, ReductionOutcome("disjoint", witness=x), tuple(trace)
        if wits:
            return t, w, ReductionOutcome("coherent", witness=wits[0]), tuple(trace)

        acted = False
        for cyc in smooth_cycles(t):
            verdict, sides = cycle_essentiality(t, cyc)
            if verdict in ("disk", "boundary_parallel"):
                continue
            pairs = _opposed_pairs(t, w, cyc)
            if pairs:
                _, mid = min(pairs)
                t, w = _split_step(t, w, mid, "split_spiral", trace)
                acted = True
                break
            if not cycle_attachments(t, cyc):
                # a bare essential cycle is itself coherently carried
                wit = CurveWitness(
                    kind="coherent",
                    shape="push_off",
                    verdict=verdict,
                    cycle=cyc,
                    side="left",
                    sides=sides,
                )
                return t, w, ReductionOutcome("coherent", witness=wit), tuple(trace)
            raise RuntimeError(
                "essential cycle spirals coherently but yields no witness"
            )
        if acted:
            continue

        hit = _try_bigon(t, w)
        if hit is not None:
            rid, tnew, wnew = hit
            _audit(t, tnew, wnew, "collapse_bigon", (rid,), trace)
            t, w = tnew, wnew
            continue

        ray = _finite_ray_site(t)
        if ray is not None:
            t, w = _split_step(t, w, ray, "split_ray", trace)
            continue

        cands = []
        for _, cyc in _boundary_cycle_items(t):
            cands.extend(_opposed_pairs(t, w, cyc))
        if cands:
            _, mid = min(cands)
            t, w = _split_step(t, w, mid, "split_straighten", trace)
            continue

        return t, w, ReductionOutcome("blocks", blocks=_component_blocks(t)), tuple(trace)
