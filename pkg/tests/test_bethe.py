from fractions import Fraction

import pytest

from jucys_workbench.errors import PoleError
from jucys_workbench.operations.bethe import (
    BetheOperations,
    bethe_generators,
    cherednik_limit,
    cross_check,
    limit_laws,
    numerator_degree_bound,
    phi_table,
    pointwise_transfer,
    transfer_matrix,
)
from jucys_workbench.operations.qkz import RKInstance
from jucys_workbench.operations.trace import shared_tower

ZS = [Fraction(5, 3)]


@pytest.fixture(scope="module")
def tm(tower):
    return transfer_matrix(tower, ZS, seed=2, magnitude=97)


def test_transfer_matrix_matches_pointwise_trace(tm, tower):
    x = Fraction(-7, 4)
    assert tm.tilde(x) == pointwise_transfer(tower, ZS, x)
    assert all(c.passed for c in cross_check(tm, samples=2, seed=9))


def test_transfer_matrix_commutes_at_two_values(tm):
    assert tm.commutes_with(tm.tilde(Fraction(2, 9)))


def test_transfer_matrix_normalization(tm):
    x = Fraction(3, 11)
    norm = (1 - x / ZS[0]) * (1 - x * ZS[0])
    assert tm(x) == tm.tilde(x) / norm
    with pytest.raises(PoleError):
        tm(ZS[0])


def test_transfer_matrix_needs_a_high_enough_tower(tower):
    with pytest.raises(ValueError):
        transfer_matrix(tower, [Fraction(2), Fraction(3)])


def test_phi_table(tm):
    frame = phi_table(tm, order=4)
    assert frame.index.name == 'k'
    assert len(frame) == 5
    low, high = tm.degree_range(4)
    assert 0 <= low <= high <= 4


def test_bethe_generators(tm):
    (b1,) = bethe_generators(tm)
    assert b1 == tm.tilde(ZS[0]) / tm.ctx.point.delta


def test_limit_laws(affine2):
    checks = limit_laws(affine2)
    assert {c.id for c in checks} >= {'limit:bax:1', 'limit:boundary', 'limit:bax:convergence'}
    assert all(c.passed for c in checks)


def test_cherednik_limit_needs_an_algebra_instance():
    with pytest.raises(ValueError):
        cherednik_limit(RKInstance.random_jimbo(2, seed=1), 1)


def test_cherednik_limit_index(affine2):
    with pytest.raises(ValueError):
        cherednik_limit(RKInstance.from_bmw(affine2), 3)


def test_bethe_suite():
    report = BetheOperations.apply('bethe_suite', n=1, d=2, seed=3, magnitude=97, trials=2)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'transfer:level0:scalar', 'bethe:factorization:1', 'hamiltonian:match'} <= ids


def test_cherednik_suite():
    report = BetheOperations.apply('cherednik_suite', n=2, d=2, seed=3, magnitude=97, probes=1)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'flat:cherednik-exact:1,2', 'cherednik:shift:1', 'cherednik:convergence:2:p0'} <= ids


def test_unknown_operation():
    with pytest.raises(ValueError):
        BetheOperations.apply('nope')


def test_transfer_matrix_uses_the_degree_bound_and_is_cached(tm, tower):
    assert len(tm.nodes) == numerator_degree_bound(1, 2) + 1 == 7
    assert transfer_matrix(tower, ZS, seed=2, magnitude=97) is tm
    assert transfer_matrix(tower, ZS, seed=2, magnitude=97, extra_nodes=1) is not tm


def test_boundary_without_inverse_matches_the_inverse(tower):
    top = tower.instance(2)
    for u in (Fraction(2, 7), Fraction(-11, 3)):
        assert top.boundary(1, u) == top.boundary_by_inverse(1, u)


def test_shared_tower_is_reused():
    first = shared_tower(2, 2, 3, 97)
    assert shared_tower(2, 2, 3, 97) is first
    assert first.top == 2


def test_bethe_suite_two_sites():
    report = BetheOperations.apply('bethe_suite', n=2, d=2, seed=3, magnitude=97, trials=1)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'bethe:B:1,2', 'bethe:aprime:1,2', 'bethe:factorization:1', 'bethe:factorization:2',
            'bethe:aprime-image:2', 'hamiltonian:match', 'hamiltonian:locality'} <= ids
    locality = [c for c in report.checks if c.id == 'hamiltonian:locality'][0]
    assert locality.status == 'info'
