from fractions import Fraction

import pytest

from jucys_workbench.errors import InadmissiblePoint
from jucys_workbench.operations.affine_bmw import (
    CLOSED_FORM,
    DISCOVERED,
    AffineBmwOperations,
    admissibility,
    admissible_point,
    affine_dimension,
    affine_presentation,
    boundary_y,
    central_values,
    dressed_jm,
    moment_residual,
)

MAGNITUDE = 97


def test_affine_dimension_formula():
    assert affine_dimension(1, 2) == 2
    assert affine_dimension(2, 2) == 12
    assert affine_dimension(2, 3) == 27
    assert affine_dimension(3, 2) == 120


@pytest.mark.parametrize("d", [2, 3])
def test_admissible_point_is_admissible(d):
    point = admissible_point(d, seed=1, magnitude=MAGNITUDE)
    record = admissibility(point, d)
    assert record.admissible
    assert record.residual == 0
    assert record.omega(0) == record.mu
    assert len(record.roots) == d


def test_admissible_point_is_deterministic():
    assert admissible_point(2, seed=4, magnitude=MAGNITUDE) == admissible_point(2, seed=4, magnitude=MAGNITUDE)


def test_admissible_point_rejects_zero_degree():
    with pytest.raises(ValueError):
        admissible_point(0)


def test_moment_recursion_holds_at_admissible_points():
    point = admissible_point(3, seed=2, magnitude=MAGNITUDE)
    record = admissibility(point, 3)
    for k in range(1, 5):
        assert moment_residual(record, k, point.nu, point.delta) == 0


def test_level_one_quotient_has_degree_dimension():
    instance = AffineBmwOperations.apply('build_affine', n=1, d=2, seed=5, magnitude=MAGNITUDE)
    assert instance.dimension == 2


def test_two_strand_quotient_dimension(affine2):
    assert affine2.dimension == affine2.expected_dim == affine_dimension(2, 2)


def test_inadmissible_point_is_rejected(affine2):
    moved = affine2.point.with_values(u1=affine2.point['u1'] + 1)
    assert not admissibility(moved, 2).admissible
    with pytest.raises(InadmissiblePoint) as info:
        AffineBmwOperations.build_affine(2, 2, point=moved)
    assert info.value.constraint == "sum_j c_j = mu"


def test_boundary_at_one(affine2):
    y = boundary_y(affine2, 1, 1)
    assert y.element == affine2.one() * (-1 / affine2.w)


def test_first_jm_satisfies_cyclotomic_relation(affine2):
    T0 = affine2.first_jm()
    product = affine2.one()
    for u in affine2.roots:
        product = product * (T0 - u)
    assert product.is_zero()


def test_dressed_jm_needs_enough_spectral_values(affine2):
    with pytest.raises(ValueError):
        dressed_jm(affine2, 2, Fraction(3), [])


def test_reflection_suite_passes(affine2):
    report = AffineBmwOperations.apply('reflection_suite', instance=affine2, trials=2, seed=1, magnitude=MAGNITUDE)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'admissibility', 'cyclotomic', 'affine-braid', 'central-value:0', 'jm-commute:1,2'} <= ids
    assert any(i.startswith('reflection:1:') or i.startswith('spectral-pole:') for i in ids)


def test_dimension_suite_is_consistent():
    report = AffineBmwOperations.dimension_suite(2, 2, seeds=(0, 1), magnitude=MAGNITUDE)
    assert report.ok
    formula = [c for c in report.checks if c.id == 'dimension-formula:n=2,d=2'][0]
    assert formula.witness['formula'] == 12


def test_unknown_operation():
    with pytest.raises(ValueError):
        AffineBmwOperations.apply('nope')


def test_central_values_come_from_the_unconstrained_quotient(affine2):
    central = central_values(affine2.point, 2)
    record = admissibility(affine2.point, 2)
    assert central.source in (DISCOVERED, CLOSED_FORM)
    assert set(central.as_dict()) == {1}
    if central.source == DISCOVERED:
        assert central.reason == ''
        assert central.as_dict()[1] == record.omega(1)
    else:
        assert central.reason
    assert affine2.omegas == central.as_dict()
    assert central_values(affine2.point, 2) is central


def test_empty_central_mapping_imposes_no_relation(affine2):
    bare = affine_presentation(2, 2, affine2.point, central={})
    assert not [r for r in bare.relations if r.label.startswith('central:')]
    full = affine_presentation(2, 2, affine2.point)
    assert [r.label for r in full.relations if r.label.startswith('central:')] == ['central:1']


def test_level_one_central_values_are_empty():
    point = admissible_point(1, seed=0, magnitude=MAGNITUDE)
    assert central_values(point, 1).as_dict() == {}


def test_reflection_suite_reports_central_source(affine2):
    report = AffineBmwOperations.reflection_suite(affine2, trials=1, seed=2, magnitude=MAGNITUDE)
    source = [c for c in report.checks if c.id == 'central-source'][0]
    assert source.witness['source'] == affine2.central.source
    value = [c for c in report.checks if c.id == 'central-value:1'][0]
    if affine2.central.source == CLOSED_FORM:
        assert value.status == 'info'
    else:
        assert value.status == 'pass'
