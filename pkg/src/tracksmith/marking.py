"""Tangency-sign arithmetic and polyhedral norm duality.

A closed surface sitting inside a foliated 3-manifold meets the foliation,
after general position, in finitely many saddle tangencies per component --
unless the component is a whole leaf.  Each saddle carries a sign: -1 when the
oriented normals of surface and foliation agree at the tangency, +1 when they
disagree.  The pairing of the foliation's Euler class with the surface class
is the sum of those signs, plus (flag * euler) for each leaf component, and the
Poincare-Hopf formula pins the saddle count of a transverse component to
|euler|.  That is all the topology this module keeps: the rest is exact
rational arithmetic over sign tuples and convex polytopes.

The polytope side models a (pseudo-)norm by the vertices of its symmetric unit
ball.  The gauge min{t >= 0 : point in t*ball} is computed by an exact linear
program, the dual norm by maximizing the pairing over the ball vertices, and
`verify_vertex_realization` re-derives, digit by digit, the equality chain that
forces a class of dual norm one pairing to one against a spanning family of
norm-one points to coincide with the dual vertex above that family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linrat import matrix_rank, simplex_min
from .surface_core import Surface

Q = Fraction
Vec = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# marked surfaces


@dataclass(frozen=True)
class MarkedSurface:
    """Closed surface with a sign per saddle tangency, leaves flagged whole.

    `saddle_signs[i]` lists the +-1 tangency signs of component i; it must be
    empty when `leaf_flags[i]` is +-1 (a leaf meets no saddles) and must have
    exactly |euler| entries when `leaf_flags[i]` is 0 (Poincare-Hopf).
    """

    surface: Surface
    saddle_signs: tuple[tuple[int, ...], ...]
    leaf_flags: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.surface)
        if len(self.saddle_signs) != n or len(self.leaf_flags) != n:
            raise ValueError(f"expected {n} sign tuples and {n} leaf flags")
        for i, comp in enumerate(self.surface):
            if comp.boundary:
                raise ValueError(f"component {i} has boundary; pairing needs closed components")
            if comp.euler > 0:
                raise ValueError(f"component {i} is a sphere")
            flag, signs = self.leaf_flags[i], self.saddle_signs[i]
            if flag not in (-1, 0, 1):
                raise ValueError(f"leaf flag for component {i} must be -1, 0 or +1")
            if any(s not in (-1, 1) for s in signs):
                raise ValueError(f"component {i}: saddle signs must be -1 or +1")
            if flag:
                if signs:
                    raise ValueError(f"leaf component {i} carries saddles")
            elif len(signs) != -comp.euler:
                raise ValueError(
                    f"component {i}: {len(signs)} saddles but |chi| = {-comp.euler}"
                )

    @property
    def euler(self) -> int:
        return sum(c.euler for c in self.surface)


def euler_pairing(ms: MarkedSurface) -> int:
    """Pairing of the Euler class with the surface: sign sum plus leaf terms."""
    total = 0
    for comp, signs, flag in zip(ms.surface, ms.saddle_signs, ms.leaf_flags):
        total += flag * comp.euler if flag else sum(signs)
    return total


def is_fully_marked(ms: MarkedSurface) -> str:
    """One of "positive", "negative", "no".

    Positive means every euler-negative component saturates with the agreeing
    sign: a leaf flagged +1, or all saddles signed -1 (normals agreeing
    everywhere).  Negative is the mirror.  Components of zero euler
    characteristic contribute nothing to the pairing and are compatible with
    either verdict; a surface built only from them counts as positive.
    Equivalently: |pairing| = |euler| with one component off both extremes
    breaking it.
    """
    positive = negative = True
    for comp, signs, flag in zip(ms.surface, ms.saddle_signs, ms.leaf_flags):
        if comp.euler == 0:
            continue
        if flag:
            positive &= flag == 1
            negative &= flag == -1
        else:
            positive &= all(s == -1 for s in signs)
            negative &= all(s == 1 for s in signs)
    if positive:
        return "positive"
    if negative:
        return "negative"
    return "no"


@dataclass(frozen=True)
class AdmissibilityReport:
    """Norm bound and parity verdicts for a candidate pairing value."""

    pairing: int
    chi: int
    norm_ok: bool
    parity_ok: bool

    @property
    def admissible(self) -> bool:
        return self.norm_ok and self.parity_ok

    @property
    def saturating(self) -> bool:
        return self.norm_ok and abs(self.pairing) == abs(self.chi)

    def lines(self) -> tuple[str, ...]:
        out = [
            f"|{self.pairing}| <= |{self.chi}|: {'ok' if self.norm_ok else 'FAIL'}",
            f"{self.pairing} = {self.chi} (mod 2): {'ok' if self.parity_ok else 'FAIL'}",
        ]
        if self.saturating:
            out.append("saturating")
        return tuple(out)


def check_admissibility(pairing: int, chi: int) -> AdmissibilityReport:
    """Can `pairing` be the Euler class paired with a class of characteristic `chi`?"""
    return AdmissibilityReport(
        pairing=pairing,
        chi=chi,
        norm_ok=abs(pairing) <= abs(chi),
        parity_ok=(pairing - chi) % 2 == 0,
    )


# ---------------------------------------------------------------------------
# polyhedral norms


@dataclass(frozen=True)
class ClassVector:
    """Rational coordinate vector of a (co)homology class in a fixed basis."""

    coords: Vec

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(Q(x) for x in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "ClassVector":
        return ClassVector(tuple(-x for x in self.coords))

    def __add__(self, other: "ClassVector") -> "ClassVector":
        return ClassVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scaled(self, factor: Fraction | int) -> "ClassVector":
        return ClassVector(tuple(Q(factor) * x for x in self.coords))


def cvec(*coords: Fraction | int | str) -> ClassVector:
    return ClassVector(tuple(Q(x) for x in coords))


def pair(e: ClassVector, y: ClassVector, matrix: Sequence[Sequence] | None = None) -> Fraction:
    """<e, y> under an explicit pairing matrix; the identity when omitted."""
    if e.dim != y.dim:
        raise ValueError(f"dimension mismatch: {e.dim} against {y.dim}")
    if matrix is None:
        return sum((a * b for a, b in zip(e.coords, y.coords)), Q(0))
    if len(matrix) != e.dim or any(len(row) != y.dim for row in matrix):
        raise ValueError("pairing matrix shape does not match the vectors")
    return sum(
        e.coords[i] * Q(matrix[i][j]) * y.coords[j]
        for i in range(e.dim)
        for j in range(y.dim)
    )


@dataclass(frozen=True)
class PolyhedralNorm:
    """Pseudo-norm given by the vertices of its symmetric unit ball.

    `lineality` lists directions of norm zero; the actual unit ball is the
    convex hull of the vertices swept along those directions.  The dual norm
    ignores them (a functional not vanishing there has no finite dual norm).
    """

    dimension: int
    ball_vertices: tuple[Vec, ...]
    lineality: tuple[Vec, ...] = ()

    def __post_init__(self) -> None:
        verts = tuple(tuple(Q(x) for x in v) for v in self.ball_vertices)
        lin = tuple(tuple(Q(x) for x in v) for v in self.lineality)
        object.__setattr__(self, "ball_vertices", verts)
        object.__setattr__(self, "lineality", lin)
        if not verts:
            raise ValueError("a norm ball needs at least one vertex")
        for v in verts + lin:
            if len(v) != self.dimension:
                raise ValueError(f"vector {v} is not {self.dimension}-dimensional")
        zero = (Q(0),) * self.dimension
        if zero in verts:
            raise ValueError("the origin is not a vertex of a symmetric ball")
        missing = [v for v in verts if tuple(-x for x in v) not in set(verts)]
        if missing:
            raise ValueError(f"ball vertices are not symmetric: no mirror of {missing[0]}")

    def norm(self, point: ClassVector) -> Fraction:
        """Gauge min{t >= 0 : point in t * ball}, exact.

        Solved as a linear program over vertex weights: the point must be a
        nonnegative combination of ball vertices (plus anything along the
        lineality), and the gauge is the least total vertex weight.
        """
        if point.dim != self.dimension:
            raise ValueError(
                f"dimension mismatch: norm is {self.dimension}-dimensional,"
                f" point has {point.dim}"
            )
        k, m = len(self.ball_vertices), len(self.lineality)
        # columns: one weight per vertex, then +/- pairs per lineality direction
        rows = [
            [v[i] for v in self.ball_vertices]
            + [s * l[i] for l in self.lineality for s in (1, -1)]
            for i in range(self.dimension)
        ]
        cost = [Q(1)] * k + [Q(0)] * (2 * m)
        status, x = simplex_min(rows, list(point.coords), cost)
        if status != "optimal":
            raise ValueError("point lies outside the span of the ball")
        return sum(x[:k], Q(0))


def dual_norm(pn: PolyhedralNorm, a: ClassVector) -> Fraction:
    """max over ball vertices v of <a, v>; symmetry makes the absolute value implicit."""
    if a.dim != pn.dimension:
        raise ValueError(
            f"dimension mismatch: norm is {pn.dimension}-dimensional, vector has {a.dim}"
        )
    return max(
        sum((x * y for x, y in zip(a.coords, v)), Q(0)) for v in pn.ball_vertices
    )


# ---------------------------------------------------------------------------
# vertex realization


@dataclass(frozen=True)
class RealizationReport:
    """Outcome of re-deriving the dual-vertex equality chain.

    `chain` holds (|<e, abar>|, sum t_i |<e, abar_i>|, sum t_i x(abar_i)); the
    chain is forced to be 1 <= . <= . = 1, so acceptance means every entry is
    exactly 1 and every basis pairing <e, abar_i> equals 1 individually.
    """

    chain: tuple[Fraction, Fraction, Fraction]
    pairings: tuple[Fraction, ...]
    failures: tuple[str, ...]
    spans: bool
    conclusion: str

    @property
    def accepted(self) -> bool:
        return not self.failures

    def lines(self) -> tuple[str, ...]:
        c0, c1, c2 = self.chain
        out = [f"chain: 1 = {c0} <= {c1} <= {c2} = 1"]
        out += [f"FAIL: {clause}" for clause in self.failures]
        if self.accepted:
            out.append("forced equalities hold")
            out.append(self.conclusion if self.conclusion else "basis does not span")
        return tuple(out)


def verify_vertex_realization(
    pn: PolyhedralNorm,
    a: ClassVector,
    basis: Sequence[ClassVector],
    t: Sequence[Fraction | int | str],
    e: ClassVector,
) -> RealizationReport:
    """Re-derive the chain pinning a dual-norm-one class `e` to the vertex `a`.

    The setup (raised on violation): coefficients t_i > 0 summing to 1, and
    every basis point abar_i pairing to 1 against `a` with norm x(abar_i) = 1.
    The verdict on `e` (reported, not raised): |<e, abar>| = 1 for the convex
    combination abar = sum t_i abar_i, dual norm x*(e) <= 1, and the forced
    equalities <e, abar_i> = x(abar_i) = <a, abar_i> for every i.  When the
    basis spans, the equalities leave a single solution and e = a is reported.
    """
    ts = [Q(x) for x in t]
    if len(ts) != len(basis):
        raise ValueError("coefficient count does not match the basis")
    if not basis:
        raise ValueError("empty basis")
    if any(x <= 0 for x in ts):
        raise ValueError("coefficients must be positive")
    if sum(ts) != 1:
        raise ValueError(f"coefficients sum to {sum(ts)}, not 1")
    for i, ab in enumerate(basis):
        got = pair(a, ab)
        if got != 1:
            raise ValueError(f"basis point {i} pairs to {got} against the vertex, not 1")
        norm_i = pn.norm(ab)
        if norm_i != 1:
            raise ValueError(f"basis point {i} has norm {norm_i}, not 1")

    abar = basis[0].scaled(ts[0])
    for ti, ab in zip(ts[1:], basis[1:]):
        abar = abar + ab.scaled(ti)
    pairings = tuple(pair(e, ab) for ab in basis)
    chain = (
        abs(pair(e, abar)),
        sum((ti * abs(p) for ti, p in zip(ts, pairings)), Q(0)),
        sum((ti * pn.norm(ab) for ti, ab in zip(ts, basis)), Q(0)),
    )

    failures: list[str] = []
    if chain[0] != 1:
        failures.append(f"|<e, abar>| = {chain[0]}, not 1")
    if dual_norm(pn, e) > 1:
        failures.append(f"x*(e) = {dual_norm(pn, e)} exceeds 1")
    bad = [i for i, p in enumerate(pairings) if p != 1]
    if bad:
        failures.append(
            f"forced equality breaks at basis point {bad[0]}:"
            f" <e, abar_{bad[0]}> = {pairings[bad[0]]}, not 1"
        )

    spans = matrix_rank([list(ab.coords) for ab in basis]) == pn.dimension
    conclusion = ""
    if not failures and spans:
        # <e - a, abar_i> = 0 for a spanning family forces the classes equal
        conclusion = "e = a"
    return RealizationReport(
        chain=chain,
        pairings=pairings,
        failures=tuple(failures),
        spans=spans,
        conclusion=conclusion,
    )
