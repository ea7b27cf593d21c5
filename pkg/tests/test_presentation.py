import json
from fractions import Fraction

import pytest

from jucys_workbench.errors import (
    DimensionOverflow,
    InadmissiblePoint,
    OwnerMismatch,
    SingularElement,
    UnknownGenerator,
)
from jucys_workbench.presentation import (
    ClosedAlgebra,
    LinComb,
    Presentation,
    Relation,
    Word,
    check_homomorphism,
    close_algebra,
)


def cyclic(order: int = 3) -> Presentation:
    """Group algebra of Z/order with g^-1 = g^(order-1)"""
    return Presentation(
        f"Z{order}",
        (('g', 1),),
        (Relation.words('order', Word.gen('g', order), '1', 'g^n = 1'),),
        {'g': LinComb.of(Word.gen('g', order - 1))},
        expected_dim=order,
    )


@pytest.fixture(scope='module')
def z3():
    return close_algebra(cyclic(3))


def test_word_algebra():
    w = Word.parse("T1 T2^-1")
    assert w.inverse() == Word.parse("T2 T1^-1")
    assert w.reversed() == Word.parse("T2^-1 T1")
    assert (w ** 2) == w * w
    assert str(Word()) == '1'
    assert len(Word.gen('T0', -3)) == 3


def test_lincomb_arithmetic():
    a = LinComb.of('T1', Fraction(2)) + 1
    b = a * LinComb.of('K1')
    assert dict(b.terms) == {Word.parse('T1 K1'): 2, Word.parse('K1'): 1}
    assert (a - a).terms == {}
    assert LinComb.of('T1').single_word() == Word.parse('T1')
    assert (a * 3).single_word() is None


def test_cyclic_closure_basis(z3):
    assert z3.dim == 3
    assert [str(w) for w in z3.basis] == ['1', 'g', 'g g']
    g = z3.word('g')
    assert g ** 3 == 1
    assert z3.word('g^-1') == g * g


def test_inverse_and_singular(z3):
    one, g = z3.unit(), z3.word('g')
    x = one + g
    assert x * x.inverse() == 1
    with pytest.raises(SingularElement):
        (one + g + g * g).inverse()


def test_scalar_helpers(z3):
    s = z3.scalar(Fraction(5, 2))
    assert s.is_scalar() and s.scalar_value() == Fraction(5, 2)
    g = z3.word('g')
    assert (g * 4).divides_by(g) == 4
    assert (g + 1).divides_by(g) is None
    with pytest.raises(ValueError):
        g.scalar_value()


def test_owner_mismatch(z3):
    other = close_algebra(cyclic(2))
    with pytest.raises(OwnerMismatch):
        z3.word('g') + other.word('g')


def test_unknown_generator(z3):
    with pytest.raises(UnknownGenerator):
        z3.word('h')


def test_free_algebra_overflows():
    free = Presentation('free', (('g', 1),), ())
    with pytest.raises(DimensionOverflow) as info:
        close_algebra(free, max_dim=5)
    assert info.value.reached > 5


def test_contradictory_relations_collapse():
    bad = Presentation('bad', (('g', 1),), (Relation('shift', LinComb.of('g'), LinComb.of('g') + 1),))
    with pytest.raises(InadmissiblePoint):
        close_algebra(bad)


def test_export_round_trip(z3):
    data = json.loads(json.dumps(z3.export()))
    assert data['basis'] == ['1', 'g', 'g g']
    assert {row[0] for row in data['tables']} == {'g', 'g^-1'}
    again = ClosedAlgebra.from_export(data)
    assert again.same_tables(z3)
    assert again.dim == 3


def test_homomorphism_checker(z3):
    pres = cyclic(3)
    g = z3.word('g')
    good = check_homomorphism(pres, {'g': g * g}, name='square')
    assert all(c.passed for c in good)
    assert [c.id for c in good] == ['square:invertible:g', 'square:order']
    bad = check_homomorphism(pres, {'g': g + 1}, name='shifted')
    assert [c.status for c in bad] == ['pass', 'fail']


def test_homomorphism_missing_image(z3):
    checks = check_homomorphism(cyclic(3), {'h': z3.word('g')}, name='partial')
    assert len(checks) == 1
    assert not checks[0].passed
    assert checks[0].witness == {'missing': ['g']}


def test_homomorphism_singular_image(z3):
    one, g = z3.unit(), z3.word('g')
    checks = check_homomorphism(cyclic(3), {'g': one + g + g * g}, name='collapse')
    assert [c.id for c in checks] == ['collapse:invertible:g']
    assert not checks[0].passed


def test_anti_homomorphism(bmw3):
    pres = bmw3.algebra.presentation
    images = {name: bmw3.word(name) for name in pres.generator_names}
    checks = check_homomorphism(pres, images, anti=True, name='reversal')
    assert all(c.passed for c in checks)
