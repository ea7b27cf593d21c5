from fractions import Fraction

import pytest

from jucys_workbench.errors import PoleError
from jucys_workbench.operations.bmw import (
    HECKE,
    TILDE,
    BmwOperations,
    bax_coefficient_functions,
    bax_coefficients,
    braid_hecke_trace,
    double_factorial,
    factorial,
)
from jucys_workbench.scalar import eval_formula


@pytest.mark.parametrize('n, expected', [(1, 1), (2, 3), (3, 15), (4, 105)])
def test_double_factorial(n, expected):
    assert double_factorial(2 * n - 1) == expected


def test_dimensions(bmw2, bmw3, hecke3):
    assert bmw2.dimension == 3
    assert bmw3.dimension == 15
    assert hecke3.dimension == factorial(3)
    assert hecke3.variant == HECKE


def test_inverse_expression(bmw3):
    for i in (1, 2):
        assert bmw3.T(i) * bmw3.Tinv(i) == 1
        assert bmw3.K(i) == bmw3.one() - (bmw3.T(i) - bmw3.Tinv(i)) / bmw3.delta


def test_kappa_square_uses_mu(bmw2):
    K = bmw2.K(1)
    assert K * K == K * bmw2.mu


def test_hecke_has_no_kappa(hecke3):
    assert hecke3.K(1).is_zero()
    assert (hecke3.T(1) - hecke3.q) * (hecke3.T(1) + 1 / hecke3.q) == 0


def test_identity_suite_bmw3(bmw3):
    report = BmwOperations.apply('identity_suite', instance=bmw3, trials=2, seed=1)
    assert report.ok, report.failures
    ids = {c.id for c in report.checks}
    assert 'dimension:n=3' in ids
    assert 'yang-baxter:1:t0' in ids
    assert 'jm-commute:1,3' in ids
    assert any(i.startswith('flip-automorphism:') for i in ids)


def test_identity_suite_hecke3(hecke3):
    report = BmwOperations.identity_suite_bmw(hecke3, trials=2, seed=2)
    assert report.ok, report.failures
    assert not any(c.id.startswith('kappa-square') for c in report.checks)


def test_wrong_mu_is_localized(bmw2):
    report = BmwOperations.identity_suite_bmw(bmw2, trials=1, mu_override=bmw2.mu + 1)
    failed = [c.id for c in report.failures]
    assert failed == ['kappa-square:1']
    assert report.failures[0].witness['support']


@pytest.mark.parametrize('n, collapsed', [(2, 2), (3, 6)])
def test_perturbed_relation_fails_only_the_dimension(point, n, collapsed):
    instance = BmwOperations.build_bmw(n, point, perturb=Fraction(1))
    assert instance.dimension == collapsed
    report = BmwOperations.identity_suite_bmw(instance, trials=1)
    assert [c.id for c in report.failures] == [f'dimension:n={n}']
    assert report.failures[0].witness == {'found': collapsed, 'expected': double_factorial(2 * n - 1)}


def test_baxterized_poles(point):
    with pytest.raises(PoleError):
        bax_coefficients(point, Fraction(1))
    with pytest.raises(PoleError) as info:
        bax_coefficients(point, -point.q / point.nu)
    assert info.value.factor == "nu x + q"
    assert bax_coefficients(point, Fraction(1), TILDE) == (point.delta, 0, 0)


def test_coefficient_functions_match_values(point):
    x = Fraction(3, 5)
    functions = bax_coefficient_functions(point, TILDE)
    assert tuple(f(x) for f in functions) == bax_coefficients(point, x, TILDE)


def test_jucys_murphy_elements_commute(bmw3):
    ys = [bmw3.jm(k) for k in (1, 2, 3)]
    assert ys[0] == 1
    assert ys[1] == bmw3.T(1) * bmw3.T(1)
    assert ys[1].commutator(ys[2]).is_zero()


def test_baxterized_requires_nonzero_values(bmw2):
    with pytest.raises(PoleError):
        BmwOperations.baxterized(bmw2, 1, Fraction(0), Fraction(2))
    element = BmwOperations.baxterized(bmw2, 1, Fraction(2), Fraction(3))
    assert element.element == bmw2.bax(1, Fraction(2, 3))


def test_braid_hecke_small(point):
    report = BmwOperations.apply('braid_hecke', n=2, point=point, max_dim=60)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert report.notes
    assert {'bh-cubic:1', 'bh-jm-kappa:1', 'bh-trace:n=2', 'bh-trace-unique:n=2', 'bh-trace-kappa:n=2'} <= ids


def test_braid_hecke_trace_values(point):
    upper = BmwOperations.build_braid_hecke(2, point, 60)
    lower = BmwOperations.build_braid_hecke(1, point, 60)
    assert lower.dim == 1
    trace = braid_hecke_trace(2, upper, lower, point)
    assert trace.unique
    nu = point.nu
    assert trace(upper.word('T1')) == lower.scalar(1)
    assert trace(upper.word('T1^-1')) == lower.scalar(nu * nu)
    assert trace(upper.unit()) == lower.scalar(nu * eval_formula('mu', [], point))
    assert trace.include(lower.unit()) == upper.unit()


def test_braid_hecke_tangle_quotient_is_bmw3(point):
    quotient = BmwOperations.build_braid_hecke(3, point, 60, tangle=True)
    assert quotient.dim == double_factorial(5) == 15


def test_unknown_operation():
    with pytest.raises(ValueError, match="Unknown BMW operation"):
        BmwOperations.apply('frobnicate')
