from fractions import Fraction

import pytest

from jucys_workbench.errors import IncompatibleSubstitutions, InvolutionDomainError, SingularElement
from jucys_workbench.operations.operators import (
    IDENTITY_MOBIUS,
    ConnectionOperator,
    MatrixOp,
    SubstitutionMap,
    dilation,
    inversion,
    kron_all,
    mobius,
    mobius_after,
    mobius_apply,
    mobius_inverse,
    product,
    reflection,
    scaled_inversion,
    translation,
)


def test_mobius_normal_form():
    assert mobius(0, 2, 2, 0) == mobius(0, 1, 1, 0)
    with pytest.raises(ValueError):
        mobius(1, 2, 2, 4)


def test_mobius_helpers():
    x = Fraction(3, 5)
    assert mobius_apply(reflection(2), x) == 2 - x
    assert mobius_apply(inversion(7), x) == 7 / x
    assert mobius_apply(scaled_inversion(4), x) == 1 / (4 * x)
    assert mobius_apply(dilation(3), x) == 3 * x
    assert mobius_apply(translation(1), x) == x + 1


def test_mobius_involutions_and_inverse():
    for m in (reflection(Fraction(1, 3)), inversion(5), scaled_inversion(2)):
        assert mobius_after(m, m) == IDENTITY_MOBIUS
    m = mobius(2, 1, 1, 3)
    assert mobius_after(m, mobius_inverse(m)) == IDENTITY_MOBIUS


def test_mobius_domain():
    with pytest.raises(InvolutionDomainError):
        mobius_apply(inversion(3), Fraction(0))


def test_substitution_swap_and_reversal():
    z = (Fraction(1), Fraction(2), Fraction(3))
    assert SubstitutionMap.swap(3, 1).apply(z) == (2, 1, 3)
    assert SubstitutionMap.reversal(3).apply(z) == (3, 2, 1)
    assert SubstitutionMap.scale(3, 2).apply(z) == (2, 4, 6)
    assert SubstitutionMap.coordinate(3, 2, reflection(5)).moved() == [2]


def test_substitution_composition_order():
    z = (Fraction(1), Fraction(2))
    swap = SubstitutionMap.swap(2, 1)
    shift = SubstitutionMap.coordinate(2, 1, translation(10))
    assert swap.then(shift).apply(z) == shift.apply(swap.apply(z)) == (12, 1)
    assert (swap * shift) == swap.then(shift)


def test_substitution_inverse():
    phi = SubstitutionMap.swap(3, 2).then(SubstitutionMap.coordinate(3, 1, mobius(2, 1, 1, 3)))
    assert phi.then(phi.inverse()).is_identity()
    assert phi.inverse().then(phi).is_identity()


def test_substitution_size_mismatch():
    with pytest.raises(IncompatibleSubstitutions):
        SubstitutionMap.identity(2).then(SubstitutionMap.identity(3))
    with pytest.raises(ValueError):
        SubstitutionMap.identity(2).apply((1, 2, 3))


def test_matrix_arithmetic():
    a = MatrixOp([[1, 2], [3, 4]])
    assert a * a.inverse() == 1
    assert a.trace() == 5
    assert (a - a).is_zero()
    assert a.commutator(MatrixOp.identity(2)).is_zero()
    assert a.with_entry(0, 1, Fraction(1, 2)).entry(0, 1) == Fraction(1, 2)
    assert a.to_json() == [["1", "2"], ["3", "4"]]


def test_matrix_singular():
    with pytest.raises(SingularElement):
        MatrixOp([[1, 2], [2, 4]]).inverse()


def test_matrix_needs_square():
    with pytest.raises(ValueError):
        MatrixOp([[1, 2, 3], [4, 5, 6]])


def test_kron_all():
    a = MatrixOp([[0, 1], [1, 0]])
    assert kron_all(a, MatrixOp.identity(2)).size == 4
    assert kron_all(a, a) * kron_all(a, a) == 1


def _probes():
    return [(Fraction(2), Fraction(5)), (Fraction(-3, 7), Fraction(11, 2))]


def _diag(z):
    return MatrixOp([[z[0], 0], [0, z[1]]])


def test_connection_product_applies_substitution():
    unit = MatrixOp.identity(2)
    swap = ConnectionOperator.shift(SubstitutionMap.swap(2, 1), unit, _probes())
    mult = ConnectionOperator.multiplication(_diag, 2, unit, _probes())
    moved = swap * mult
    z = _probes()[0]
    assert moved(z) == _diag((z[1], z[0]))
    assert moved.substitution == SubstitutionMap.swap(2, 1)


def test_connection_inverse():
    unit = MatrixOp.identity(2)
    op = ConnectionOperator(_diag, SubstitutionMap.swap(2, 1), unit, _probes())
    assert (op * op.inverse()) == op.unit_like()


def test_connection_addition_needs_matching_substitutions():
    unit = MatrixOp.identity(2)
    a = ConnectionOperator.shift(SubstitutionMap.swap(2, 1), unit, _probes())
    b = ConnectionOperator.multiplication(_diag, 2, unit, _probes())
    with pytest.raises(IncompatibleSubstitutions):
        a + b
    assert (b - b).is_zero()
    assert b.commutator(b).is_zero()


def test_connection_equality_needs_probes():
    unit = MatrixOp.identity(2)
    a = ConnectionOperator.multiplication(_diag, 2, unit)
    with pytest.raises(ValueError):
        a == a.unit_like()
    assert a.with_probes(_probes()) != a.with_probes(_probes()).unit_like()


def test_product():
    unit = MatrixOp.identity(2)
    ops = [ConnectionOperator.multiplication(_diag, 2, unit, _probes()) for _ in range(3)]
    cube = product(ops)
    z = _probes()[1]
    assert cube(z) == _diag(z) * _diag(z) * _diag(z)
    with pytest.raises(ValueError):
        product([])
