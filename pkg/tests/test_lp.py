from __future__ import annotations

import random
from fractions import Fraction

import pytest

from freespace_lab import lp


def test_simple_optimum():
    # max 3x + 2y, x + y <= 4, x + 3y <= 6
    res = lp.maximize([3, 2], [[1, 1], [1, 3]], [4, 6])
    assert res.status == lp.OPTIMAL
    assert res.value == 12
    assert res.x == (4, 0)


def test_equality_and_fractions():
    res = lp.maximize([1, 1], A_eq=[[1, 2]], b_eq=[Fraction(3, 2)])
    assert res.ok and res.value == Fraction(3, 2)


def test_infeasible_and_unbounded():
    assert lp.maximize([1], A_eq=[[1]], b_eq=[-1]).status == lp.INFEASIBLE
    assert lp.maximize([1, 0], [[-1, 1]], [1]).status == lp.UNBOUNDED


def test_negative_rhs_needs_phase_one():
    # x >= 2 written as -x <= -2, maximise -x
    res = lp.maximize([-1], [[-1]], [-2])
    assert res.ok and res.value == -2


def test_redundant_equalities():
    res = lp.maximize([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[3, 6])
    assert res.ok and res.value == 6


def test_feasibility():
    assert lp.is_feasible([[1, 1]], [1]).ok
    assert not lp.is_feasible([[1, 1]], [-1]).ok


@pytest.mark.parametrize("seed", range(40))
def test_matches_scipy(seed):
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(seed)
    n, m = rng.randint(1, 5), rng.randint(1, 5)
    c = [rng.randint(-5, 5) for _ in range(n)]
    A = [[rng.randint(-3, 5) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-2, 10) for _ in range(m)]
    ours = lp.maximize(c, A, b)
    ref = scipy_opt.linprog([-v for v in c], A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        assert ours.status == lp.INFEASIBLE
    elif ref.status == 3:
        assert ours.status == lp.UNBOUNDED
    else:
        assert ours.ok
        assert abs(float(ours.value) + ref.fun) < 1e-7
        for row, rhs in zip(A, b):
            assert sum(a * x for a, x in zip(row, ours.x)) <= rhs
        assert all(x >= 0 for x in ours.x)
