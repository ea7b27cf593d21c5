from fractions import Fraction

import pytest

from jucys_workbench.errors import OwnerMismatch, PoleError
from jucys_workbench.operations.trace import TowerContext, TraceOperations, crossing_coefficients, markov_trace
from jucys_workbench.scalar import eval_formula


def test_tower_levels(tower):
    assert tower.top == 2
    assert [tower.levels[m].dim for m in range(3)] == [1, 2, 12]
    assert tower.modules[1].dim == tower.levels[1].dim


def test_tower_needs_a_level():
    with pytest.raises(ValueError):
        TowerContext.build(2, 0, seed=3, magnitude=97)


def test_trace_values(tower):
    up = tower.instance(2)
    lower = tower.levels[1]
    assert markov_trace(tower, up.T(1)) == lower.unit()
    assert markov_trace(tower, up.K(1)) == lower.scalar(tower.nu)
    assert markov_trace(tower, up.one()) == lower.scalar(tower.nu * tower.mu)


def test_include_and_restrict(tower):
    T0 = tower.instance(1).T0()
    lifted = tower.include(T0, 2)
    assert tower.level_of(lifted) == 2
    assert tower.restrict(lifted) == T0
    assert tower.restrict(tower.instance(2).T(1)) is None


def test_include_rejects_lower_level(tower):
    with pytest.raises(ValueError):
        tower.include(tower.instance(2).T(1), 1)


def test_foreign_element(tower, bmw2):
    with pytest.raises(OwnerMismatch):
        tower.level_of(bmw2.T(1))


def test_trace_property_suite(tower):
    report = TraceOperations.apply('trace_property_suite', ctx=tower, trials=2, seed=1)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'trace-values:T:2', 'trace-values:unit:2', 'trace-values:T0^0', 'subalgebra-test:2'} <= ids
    assert any(i.startswith('trace-bimodule:') for i in ids)


def test_trace_suite_level_range(tower):
    with pytest.raises(ValueError):
        TraceOperations.trace_property_suite(tower, k=2)


def test_crossing_coefficients_at_crossing_point(tower):
    p = tower.point
    x = Fraction(5, 7)
    a, b, c = crossing_coefficients(p, x, p.q ** 2 / p.nu ** 2 / x)
    assert a == 0 and c == 0
    assert b == 1 / eval_formula('F', [x], p)


def test_crossing_coefficients_poles(tower):
    with pytest.raises(PoleError):
        crossing_coefficients(tower.point, Fraction(1), Fraction(3))


def test_lemma_identities(tower):
    report = TraceOperations.apply('lemma_identities', ctx=tower, trials=2, seed=2)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert any(i.startswith('crossing-expansion:') or i.startswith('spectral-pole:') for i in ids)


def test_unknown_operation():
    with pytest.raises(ValueError):
        TraceOperations.apply('nope')
