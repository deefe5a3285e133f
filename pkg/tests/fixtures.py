"""Shared hand-built tracks with hand-derived walk data.

Every circuit listed here was traced by hand with the port transition
rules (arrive L -> depart SL, arrive SL -> depart SR passing the cusp,
arrive SR -> depart L) before the walking code existed; tests freeze
these traces as oracles.
"""

from fractions import Fraction

from tracksmith.track_core import Circle, RegionSpec, TrainTrack, Weights, track

# Annulus: two boundary circles tied by one spiralling connector.
# Switches X (top circle), Y (bottom); the inner region is a bigon whose
# two sides both run along the connector, so it is not embedded.
A0 = track(
    branches=[
        ("c1", "X.L", "X.SL"),
        ("c2", "Y.L", "Y.SL"),
        ("e", "X.SR", "Y.SR"),
    ],
    orient={"c1": "left", "c2": "right", "e": "right"},
    regions=[("R", 0, [0])],
    boundary=[1, 2],
)

A0_CIRCUITS = [
    # index 0: the inner bigon
    (
        (("c1", "left"), ("e", "left"), ("c2", "left"), ("e", "right")),
        (True, False, True, False),
    ),
    # outer sides of the two circles
    ((("c1", "right"),), (False,)),
    ((("c2", "right"),), (False,)),
]

A0_WEIGHTS = Weights({"c1": Fraction(1), "c2": Fraction(1), "e": Fraction(0)})

# Pants: three boundary circles, arcs from c1 to c2 and from c1 to c3.
# One interior region, a disk with four cusps, index -1.
P0 = track(
    branches=[
        ("b1", "s1.L", "s2.SL"),
        ("b2", "s2.L", "s1.SL"),
        ("c2", "s3.L", "s3.SL"),
        ("c3", "s4.L", "s4.SL"),
        ("a2", "s1.SR", "s3.SR"),
        ("a3", "s2.SR", "s4.SR"),
    ],
    orient={
        "b1": "left",
        "b2": "left",
        "a2": "right",
        "a3": "right",
        "c2": "right",
        "c3": "right",
    },
    regions=[("R", 0, [0])],
    boundary=[1, 2, 3],
)

P0_CIRCUITS = [
    (
        (
            ("a2", "left"),
            ("c2", "left"),
            ("a2", "right"),
            ("b1", "left"),
            ("a3", "left"),
            ("c3", "left"),
            ("a3", "right"),
            ("b2", "left"),
        ),
        (False, True, False, True, False, True, False, True),
    ),
    ((("b1", "right"), ("b2", "right")), (False, False)),
    ((("c2", "right"),), (False,)),
    ((("c3", "right"),), (False,)),
]

# Pants again, but the two arcs meet at an interior switch m that lies on
# no smooth cycle: a1 from circle c1 and a2 from circle c2 merge at m and
# continue along sg onto circle c3.
PY = track(
    branches=[
        ("a1", "s1.SR", "m.SL"),
        ("a2", "s3.SR", "m.SR"),
        ("c1", "s1.L", "s1.SL"),
        ("c2", "s3.L", "s3.SL"),
        ("c3", "s4.L", "s4.SL"),
        ("sg", "m.L", "s4.SR"),
    ],
    orient={
        "c1": "left",
        "a1": "right",
        "c2": "left",
        "a2": "right",
        "c3": "right",
        "sg": "right",
    },
    regions=[("R", 0, [0])],
    boundary=[1, 2, 3],
)

PY_CIRCUITS = [
    (
        (
            ("a1", "left"),
            ("a2", "right"),
            ("c2", "left"),
            ("a2", "left"),
            ("sg", "left"),
            ("c3", "left"),
            ("sg", "right"),
            ("a1", "right"),
            ("c1", "left"),
        ),
        (True, False, True, False, False, True, False, False, True),
    ),
    ((("c1", "right"),), (False,)),
    ((("c2", "right"),), (False,)),
    ((("c3", "right"),), (False,)),
]

# A single circle on a closed torus: both sides belong to one annular
# region, nothing has a cusp, the active subsurface is empty.
TORUS = TrainTrack(
    branches=(),
    circles=(Circle("K", "left"),),
    regions=(RegionSpec("R", 0, (0, 1)),),
    boundary=frozenset(),
)

# Pants block with opposed cusps on the waist: both arms hang on the same
# side of the two-branch waist cycle but the cusp at s2 points along the
# traversal while the one at s1 points against it.
P1 = track(
    branches=[
        ("b1", "s1.SL", "s2.SR"),
        ("b2", "s2.L", "s1.L"),
        ("c2", "s3.L", "s3.SL"),
        ("c3", "s4.L", "s4.SL"),
        ("a2", "s1.SR", "s3.SR"),
        ("a3", "s2.SL", "s4.SR"),
    ],
    orient={
        "b1": "left",
        "b2": "left",
        "a2": "left",
        "a3": "right",
        "c2": "left",
        "c3": "right",
    },
    regions=[("R", 0, [0])],
    boundary=[1, 2, 3],
)

# Pants block with a one-edge annulus attached along the waist of the c2
# cuff: the waist splits into c2a/c2b, the annulus contributes the arm na,
# the outer loop nb, and the two-cusp disk region R2 between them.
TW = track(
    branches=[
        ("b1", "s1.L", "s2.SL"),
        ("b2", "s2.L", "s1.SL"),
        ("c2a", "s3.L", "s5.L"),
        ("c2b", "s5.SL", "s3.SL"),
        ("c3", "s4.L", "s4.SL"),
        ("a2", "s1.SR", "s3.SR"),
        ("a3", "s2.SR", "s4.SR"),
        ("na", "s5.SR", "s6.SR"),
        ("nb", "s6.L", "s6.SL"),
    ],
    orient={
        "b1": "left",
        "b2": "left",
        "c2a": "right",
        "c2b": "right",
        "c3": "right",
        "a2": "right",
        "a3": "right",
        "na": "right",
        "nb": "right",
    },
    regions=[("R1", 0, [0]), ("R2", 0, [2])],
    boundary=[1, 3, 4],
)

# A circle on a one-holed torus whose complement is a genus-one region.
G1 = TrainTrack(
    branches=(),
    circles=(Circle("K", "left"),),
    regions=(RegionSpec("H", 1, (0,)),),
    boundary=frozenset({1}),
)


# Theta on a once-punctured torus: one large branch e between two switches,
# the returns p and q close both smooth cycles.  Every smooth cycle is
# essential, so nothing here is boundary-parallel.
VA = track(
    branches=[
        ("e", "u.L", "v.L"),
        ("p", "u.SL", "v.SL"),
        ("q", "u.SR", "v.SR"),
    ],
    orient={"e": "right", "p": "left", "q": "left"},
    regions=[("R", 0, [0], 1)],
    boundary=[],
)

VA_WEIGHTS = Weights({"e": Fraction(2), "p": Fraction(3, 2), "q": Fraction(1, 2)})
VA_WEIGHTS_CENTRAL = Weights({"e": Fraction(2), "p": Fraction(1), "q": Fraction(1)})

# Two spirals of opposite sense on an essential cycle x1-x2-x3-x4 in a
# four-holed sphere: arm p hangs forward at s1/s3, arm q backward at
# s2/s4.  Splitting the opposed pair twice pops the cycle off the arms.
DS = track(
    branches=[
        ("x1", "s1.L", "s2.SR"),
        ("x2", "s2.L", "s3.L"),
        ("x3", "s3.SR", "s4.L"),
        ("x4", "s4.SL", "s1.SL"),
        ("p", "s1.SR", "s3.SL"),
        ("q", "s2.SL", "s4.SR"),
    ],
    orient={
        "x1": "left",
        "x2": "left",
        "x3": "left",
        "x4": "left",
        "p": "right",
        "q": "right",
    },
    regions=[("R0", 0, [0], 1), ("R3", 0, [3], 1)],
    boundary=[1, 2],
)

DS_WEIGHTS = Weights(
    {
        "x1": Fraction(2),
        "x2": Fraction(3),
        "x3": Fraction(2),
        "x4": Fraction(1),
        "p": Fraction(1),
        "q": Fraction(1),
    }
)

# Double tripod on a four-holed sphere: a large bar B joins two interior
# hubs, each hub hangs two arms onto cuff loops.  The hubs lie on no
# smooth cycle and the forward ray from either hub ends on B head-on.
# A curve through the single disk region crossing B once separates the
# cuffs two against two, so an essential coherent crossing exists.
DT = track(
    branches=[
        ("B", "h1.L", "h2.L"),
        ("a1", "h1.SL", "t1.SR"),
        ("a2", "h1.SR", "t2.SR"),
        ("a3", "h2.SL", "t3.SR"),
        ("a4", "h2.SR", "t4.SR"),
        ("l1", "t1.L", "t1.SL"),
        ("l2", "t2.L", "t2.SL"),
        ("l3", "t3.L", "t3.SL"),
        ("l4", "t4.L", "t4.SL"),
    ],
    orient={
        "B": "left",
        "a1": "right",
        "a2": "right",
        "a3": "left",
        "a4": "left",
        "l1": "right",
        "l2": "right",
        "l3": "left",
        "l4": "left",
    },
    regions=[("R", 0, [0])],
    boundary=[1, 2, 3, 4],
)

# Single tripod on pants: hub h off every smooth cycle, all three arms
# spiral onto cuff loops, no branch is large.  Nothing can split, no
# region is a bigon, and pants carry no essential curve: the reduction
# terminates with the component unresolved.
TRI = track(
    branches=[
        ("a1", "h.L", "t1.SR"),
        ("a2", "h.SL", "t2.SR"),
        ("a3", "h.SR", "t3.SR"),
        ("l1", "t1.L", "t1.SL"),
        ("l2", "t2.L", "t2.SL"),
        ("l3", "t3.L", "t3.SL"),
    ],
    orient={
        "a1": "right",
        "a2": "left",
        "a3": "left",
        "l1": "right",
        "l2": "left",
        "l3": "left",
    },
    regions=[("R", 0, [0])],
    boundary=[1, 2, 3],
)

# Theta in an annulus: large branch x, the returns y and z bound the
# two-cusp disk D between them.  Collapsing D fuses x with y into a
# single circle and deletes z.
TB = track(
    branches=[
        ("x", "s1.L", "s2.L"),
        ("y", "s1.SL", "s2.SR"),
        ("z", "s1.SR", "s2.SL"),
    ],
    orient={"x": "right", "y": "left", "z": "left"},
    regions=[("D", 0, [2])],
    boundary=[0, 1],
)

TB_WEIGHTS = Weights({"x": Fraction(2), "y": Fraction(1), "z": Fraction(1)})

# Two parallel circles in an annulus, tangent along the bars m1 and m2.
# Between the tangencies the strips a/b and o1/o2 bound the bigons D and
# E; the smooth outer sides of the circles are the annulus boundary.
# Collapsing D fuses m1-a-m2 into one bar: a circle with two tangencies.
T6 = track(
    branches=[
        ("m1", "P.L", "Pp.L"),
        ("m2", "Q.L", "Qp.L"),
        ("a", "Pp.SL", "Q.SR"),
        ("b", "Pp.SR", "Q.SL"),
        ("o1", "Qp.SL", "P.SR"),
        ("o2", "Qp.SR", "P.SL"),
    ],
    orient={
        "m1": "right",
        "m2": "right",
        "a": "right",
        "b": "right",
        "o1": "right",
        "o2": "right",
    },
    regions=[("D", 0, [1]), ("E", 0, [3])],
    boundary=[0, 2],
)

T6_WEIGHTS = Weights(
    {
        "m1": Fraction(2),
        "m2": Fraction(2),
        "a": Fraction(1),
        "b": Fraction(1),
        "o1": Fraction(1),
        "o2": Fraction(1),
    }
)

# Same six branches with the o-band glued back with a half twist: the
# complement is a bigon plus one disk and the whole thing closes up into
# a torus.  Collapsing the bigon leaves a theta whose single region is a
# two-cusp disk with the bar on both of its sides.
T6H = track(
    branches=[
        ("m1", "P.L", "Pp.L"),
        ("m2", "Q.L", "Qp.L"),
        ("a", "Pp.SL", "Q.SR"),
        ("b", "Pp.SR", "Q.SL"),
        ("o1", "Qp.SL", "P.SL"),
        ("o2", "Qp.SR", "P.SR"),
    ],
    orient={
        "m1": "right",
        "m2": "right",
        "a": "right",
        "b": "right",
        "o1": "right",
        "o2": "right",
    },
    regions=[("D", 0, [1]), ("E", 0, [0])],
    boundary=[],
)

# Ladder: the bigon D between the rails has two branches per side, with
# middle switches M1/M2 whose rungs hang outward onto cuff loops.  The
# cusp branch at both ends of D is the same rail o.
LAD = track(
    branches=[
        ("o", "P.L", "Q.L"),
        ("a1", "P.SL", "M1.L"),
        ("a2", "M1.SR", "Q.SR"),
        ("b1", "P.SR", "M2.L"),
        ("b2", "M2.SL", "Q.SL"),
        ("r1", "M1.SL", "c1.SR"),
        ("r2", "M2.SR", "c2.SR"),
        ("g1", "c1.L", "c1.SL"),
        ("g2", "c2.L", "c2.SL"),
    ],
    orient={
        "o": "right",
        "a1": "left",
        "a2": "left",
        "b1": "left",
        "b2": "left",
        "r1": "left",
        "r2": "left",
        "g1": "left",
        "g2": "left",
    },
    regions=[("D", 0, [1]), ("R1", 0, [0]), ("R2", 0, [2])],
    boundary=[3, 4],
)

LAD_WEIGHTS = Weights(
    {
        "o": Fraction(2),
        "a1": Fraction(1),
        "a2": Fraction(1),
        "b1": Fraction(1),
        "b2": Fraction(1),
        "r1": Fraction(0),
        "r2": Fraction(0),
        "g1": Fraction(1),
        "g2": Fraction(1),
    }
)

# Two parallel circles in an annulus with nothing between them but the
# middle annular region.
CIRC = track(
    branches=[],
    circles=("C1", "C2"),
    orient={"C1": "left", "C2": "left"},
    regions=[("M", 0, [0, 2])],
    boundary=[1, 3],
)

CIRC_WEIGHTS = Weights({"C1": Fraction(1), "C2": Fraction(1)})
