from fractions import Fraction

import pytest

from jucys_workbench.linalg import (
    EchelonBasis,
    NoSolution,
    solve_combination,
    solve_dense,
    vec_axpy,
    vec_clean,
    vec_scale,
)


def test_axpy_drops_cancelled_entries():
    target = {0: Fraction(1), 1: Fraction(2)}
    vec_axpy(target, Fraction(-1), {0: Fraction(1), 2: Fraction(3)})
    assert target == {1: 2, 2: -3}
    vec_axpy(target, Fraction(0), {5: Fraction(1)})
    assert 5 not in target


def test_clean_and_scale():
    assert vec_clean({0: Fraction(0), 1: Fraction(1, 2)}) == {1: Fraction(1, 2)}
    assert vec_scale({1: Fraction(3)}, Fraction(0)) == {}
    assert vec_scale({1: Fraction(3)}, Fraction(1, 3)) == {1: 1}


def test_echelon_basis_tracks_combinations():
    basis = EchelonBasis()
    assert basis.add({0: Fraction(1), 1: Fraction(1)}, 'a')
    assert basis.add({1: Fraction(1), 2: Fraction(1)}, 'b')
    assert not basis.add({0: Fraction(1), 1: Fraction(2), 2: Fraction(1)}, 'c')
    assert basis.rank == 2
    assert basis.pivots == [0, 1]
    assert basis.express({0: Fraction(2), 1: Fraction(5), 2: Fraction(3)}) == {'a': 2, 'b': 3}


def test_express_outside_span():
    basis = EchelonBasis()
    basis.add({0: Fraction(1)}, 0)
    with pytest.raises(NoSolution):
        basis.express({1: Fraction(1)})


def test_solve_combination():
    columns = [{0: Fraction(1)}, {0: Fraction(1), 1: Fraction(2)}]
    assert solve_combination(columns, {0: Fraction(3), 1: Fraction(4)}) == [1, 2]


def test_solve_dense():
    matrix = [[2, 1], [1, 3]]
    x = solve_dense(matrix, [5, 10])
    assert x == [1, 3]
    with pytest.raises(NoSolution):
        solve_dense([[1, 1], [1, 1]], [1, 2])
