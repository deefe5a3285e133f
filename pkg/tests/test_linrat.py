from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_simplex_bruteforce
from tracksmith.linrat import (
    feasible_positive,
    matrix_rank,
    max_support_nonneg,
    nullspace,
    rref,
    simplex_min,
    solve_linear,
)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def mat(rows):
    return [[Fraction(x) for x in r] for r in rows]


def test_rref_identity():
    m, piv = rref(mat([[2, 0], [0, 3]]))
    assert m == mat([[1, 0], [0, 1]])
    assert piv == [0, 1]


def test_rank_and_nullspace_dimensions():
    rows = mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert matrix_rank(rows) == 2
    ns = nullspace(rows, 3)
    assert len(ns) == 1
    for v in ns:
        for row in rows:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_nullspace_of_empty_system_is_full():
    ns = nullspace([], 3)
    assert len(ns) == 3


def test_solve_linear_consistent_and_not():
    assert solve_linear(mat([[1, 1], [1, -1]]), [2, 0]) == [1, 1]
    assert solve_linear(mat([[1, 1], [2, 2]]), [1, 3]) is None


@given(
    st.lists(st.lists(fracs, min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(fracs, min_size=3, max_size=3),
)
def test_solve_linear_solves(rows, x_true):
    rhs = [sum(a * b for a, b in zip(row, x_true)) for row in rows]
    x = solve_linear(rows, rhs)
    assert x is not None
    assert all(
        sum(a * b for a, b in zip(row, x)) == r for row, r in zip(rows, rhs)
    )


def test_simplex_basic():
    # min x + y  s.t.  x + 2y = 4, x, y >= 0  ->  (0, 2)
    status, x = simplex_min([[1, 2]], [4], [1, 1])
    assert status == "optimal"
    assert sum(Fraction(v) for v in x) == 2


def test_simplex_infeasible_and_unbounded():
    status, _ = simplex_min([[1, 1], [1, 1]], [1, 2], [0, 0])
    assert status == "infeasible"
    status, _ = simplex_min([[1, -1]], [0], [-1, 0])
    assert status == "unbounded"


@settings(deadline=None)
@given(
    st.lists(st.lists(fracs, min_size=4, max_size=4), min_size=1, max_size=2),
    st.lists(st.fractions(min_value=0, max_value=3, max_denominator=3), min_size=4, max_size=4),
    st.lists(st.fractions(min_value=0, max_value=4, max_denominator=3), min_size=4, max_size=4),
)
def test_simplex_matches_bruteforce_oracle(A, x_feas, c):
    # Build a feasible bounded instance by construction (costs >= 0).
    b = [sum(a * v for a, v in zip(row, x_feas)) for row in A]
    status, x = simplex_min(A, b, c)
    assert status == "optimal"
    got = sum(ci * xi for ci, xi in zip(c, x))
    want = oracle_simplex_bruteforce(mat(A), [Fraction(v) for v in b], mat([c])[0])
    assert want is not None and got == want
    assert all(xi >= 0 for xi in x)
    for row, bi in zip(A, b):
        assert sum(a * v for a, v in zip(row, x)) == bi


def test_feasible_positive_exists():
    # x - y = 0 has the positive ray (t, t).
    out = feasible_positive([[1, -1]], 2)
    assert out is not None and out[0] == out[1] and out[0] >= 1


def test_feasible_positive_none_when_forced_zero():
    # x + y = 0 with x, y entering positively: no strictly positive point.
    assert feasible_positive([[1, 1]], 2) is None


def test_max_support_finds_partial_support():
    # x + y = 0 and z free: support is exactly {z}.
    out = max_support_nonneg([[1, 1, 0]], 3)
    assert out[0] == 0 and out[1] == 0 and out[2] > 0


def test_max_support_zero_only():
    out = max_support_nonneg([[1, 0], [0, 1]], 2)
    assert out == [0, 0]
