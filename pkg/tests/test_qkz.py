from fractions import Fraction

import pytest

from jucys_workbench.errors import UnsupportedFamily
from jucys_workbench.operations.operators import MatrixOp
from jucys_workbench.operations.qkz import (
    FLAVOR_A,
    FLAVOR_ABAR,
    KBAR_SCALAR,
    KBAR_SHIFT,
    Involution,
    QkzOperations,
    RKInstance,
    boundary_weight,
    build_connection,
    connection_family,
    embed_pair,
    flatness_check,
    identity_transfer_checks,
    jimbo_braid,
    partial_trace_last,
    probe_vectors,
    swap_matrix,
    transfer_matrix,
    validate_instance,
)


def test_involution_tags():
    inv = Involution('scaled_inversion', 3)
    x = Fraction(5, 7)
    assert inv(inv(x)) == x
    assert Involution.from_json(inv.to_json()) == inv
    with pytest.raises(ValueError):
        Involution('rotation', 1)


def test_boundary_weight_is_unitary():
    u, xi = Fraction(3, 4), Fraction(7, 2)
    assert boundary_weight(u, xi) * boundary_weight(1 / u, xi) == 1


def test_jimbo_braid_satisfies_hecke_relation():
    q = Fraction(5, 3)
    b = jimbo_braid(q)
    assert ((b - q) * (b + 1 / q)).is_zero()


def test_embed_pair_and_partial_trace():
    p = swap_matrix()
    assert embed_pair(p, 1, 2, 2) == p
    local = jimbo_braid(Fraction(2))
    assert embed_pair(local, 2, 1, 2) == p * local * p
    assert partial_trace_last(MatrixOp.identity(4)) == 2


def test_jimbo_instance_validates():
    inst = RKInstance.random_jimbo(3, seed=1)
    report = validate_instance(inst, trials=2, seed=1)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert any(i.startswith('ybe:') for i in ids)
    assert any(i.startswith('rho:') for i in ids)


def test_corrupted_entry_breaks_validation():
    inst = RKInstance.random_jimbo(3, seed=1).with_corrupted_entry(1, 2, 1)
    report = validate_instance(inst, trials=2, seed=1)
    assert not report.ok
    failed = [c for c in report.failures if c.id.startswith('ybe:')]
    assert failed
    assert 'triple' in failed[0].witness


def test_two_site_instance_checks_ybe_on_three():
    report = validate_instance(RKInstance.random_jimbo(2, seed=3), trials=1, seed=3)
    assert report.ok, report.failures
    assert any(c.id.startswith('ybe:1:') for c in report.checks)


def test_json_round_trip_preserves_matrices():
    inst = RKInstance.random_jimbo(2, seed=4, twisted=True)
    back = RKInstance.from_json(inst.to_json())
    x, y = Fraction(3, 7), Fraction(-5, 2)
    assert back.r_hat(1, x, y) == inst.r_hat(1, x, y)
    assert back.boundary(x) == inst.boundary(x)
    assert back.twist == inst.twist


def test_identity_instance_is_flat():
    inst = RKInstance.identity_r(2)
    probes = probe_vectors(2, 2, seed=5)
    family = connection_family(inst, FLAVOR_A, probes)
    assert flatness_check(family, 'identity').ok
    assert all(c.passed for c in identity_transfer_checks(2, probes))


def test_jimbo_connections_are_flat():
    inst = RKInstance.random_jimbo(2, seed=6)
    probes = probe_vectors(2, 2, seed=6)
    for flavor in (FLAVOR_A, FLAVOR_ABAR):
        report = flatness_check(connection_family(inst, flavor, probes), flavor)
        assert report.ok, report.failures


def test_instance_checks_on_bmw(affine2):
    inst = RKInstance.from_bmw(affine2)
    report = QkzOperations.apply('instance_checks', inst=inst, probes=probe_vectors(2, 1, seed=2), trials=1, seed=2)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert {'rho-image:A:1', 'dressed:2', 'reduced:1'} <= ids


def test_shift_mode_uses_sigma_twice(affine2):
    inst = RKInstance.from_bmw(affine2, KBAR_SHIFT)
    assert inst.shift_map(1).is_identity()


def test_algebra_instances_reject_matrix_operations(affine2):
    inst = RKInstance.from_bmw(affine2)
    with pytest.raises(ValueError):
        inst.with_corrupted_entry(0, 0, 1)
    with pytest.raises(UnsupportedFamily):
        transfer_matrix(inst, [Fraction(2), Fraction(3)], Fraction(1))


def test_build_connection_arguments():
    inst = RKInstance.identity_r(2)
    with pytest.raises(ValueError):
        build_connection(inst, 3)
    with pytest.raises(ValueError):
        build_connection(inst, 1, 'sideways')


def test_periodic_suite():
    report = QkzOperations.apply('periodic_suite', n=3, seed=0, probes=1, lambdas=2)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert any(i.startswith('transfer-commute:') for i in ids)
    assert 'transfer-at-site:1' in ids


def test_unknown_operation():
    with pytest.raises(ValueError):
        QkzOperations.apply('nope')


def test_scalar_kbar_is_set_at_construction():
    scaled = RKInstance.random_jimbo(2, seed=4, kbar=KBAR_SCALAR, kbar_scale=Fraction(3, 5))
    assert scaled.kbar_scale == Fraction(3, 5)
    assert not scaled.unitary
    plain = RKInstance.random_jimbo(2, seed=4, kbar=KBAR_SCALAR)
    assert plain.kbar_scale == 1
    assert plain.unitary
    assert scaled.to_json()['kbar_scale'] == '3/5'
