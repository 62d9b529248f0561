from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhbounds.errors import Infeasible
from bhbounds.lp import Unbounded, lexmin_feasible, solve_lp
from oracles import lp_vertices


def test_simple_min():
    # min x + 2y  s.t. x + y = 1
    sol = solve_lp([1, 2], [[1, 1]], [1])
    assert sol.x == (1, 0)
    assert sol.value == 1


def test_negative_rhs_rows_are_normalised():
    sol = solve_lp([1, 1], [[-1, -2]], [-2])
    assert sol.x == (0, 1)


def test_redundant_rows():
    A = [[1, 1, 0], [2, 2, 0], [0, 1, 1]]
    sol = solve_lp([0, 1, 3], A, [1, 2, 1])
    assert sol.x == (F(0), F(1), F(0))
    assert sol.value == 1


def test_infeasible():
    with pytest.raises(Infeasible):
        solve_lp([1, 1], [[1, 1], [1, 1]], [1, 2])


def test_unbounded():
    with pytest.raises(Unbounded):
        solve_lp([-1, 0], [[1, -1]], [0])


def test_lexmin():
    x = lexmin_feasible([[1, 1, 1]], [1])
    assert x == (0, 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(3, 6), st.data())
def test_optimum_matches_vertex_enumeration(m, nvar, data):
    ints = st.integers(-4, 4)
    A = [[F(data.draw(ints)) for _ in range(nvar)] for _ in range(m)]
    A.append([F(1)] * nvar)
    x0 = data.draw(st.lists(st.integers(0, 5), min_size=nvar, max_size=nvar).filter(lambda v: sum(v) > 0))
    x0 = [F(v, sum(x0)) for v in x0]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [F(data.draw(ints), data.draw(st.integers(1, 5))) for _ in range(nvar)]
    sol = solve_lp(c, A, b)
    assert all(sum(a * x for a, x in zip(row, sol.x)) == bi for row, bi in zip(A, b))
    assert all(x >= 0 for x in sol.x)
    verts = lp_vertices(A, b)
    assert sol.x in verts
    assert sol.value == min(sum(ci * xi for ci, xi in zip(c, v)) for v in verts)
    lex = lexmin_feasible(A, b)
    assert lex == min(verts)
