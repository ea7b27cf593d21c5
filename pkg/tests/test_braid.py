from fractions import Fraction

import numpy as np
import pytest

from jucys_workbench.errors import FlipUnavailable, UnsupportedFamily
from jucys_workbench.operations.braid import (
    A1X,
    B1,
    C1,
    D1,
    Backend,
    BraidOperations,
    BraidPresentation,
    WeylState,
    a_word,
    b_word,
    embedding_catalog,
    i_word,
    i_word_expanded,
    jm_words,
    rho1,
    rho2,
    substitute,
    weyl_apply,
    weyl_backend,
    weyl_images,
)
from jucys_workbench.operations.operators import SubstitutionMap, inversion, reflection
from jucys_workbench.scalar import random_rational
from jucys_workbench.presentation import Word


def test_j_family_words():
    js = jm_words(C1, 'J', 2)
    assert [str(w) for w in js] == ["T0 T1 T2 T1", "T1^-1 T0 T1 T2"]


def test_a_and_b_words():
    assert str(a_word(1)) == "T0"
    assert str(a_word(3)) == "T2 T1 T0 T1 T2"
    assert str(b_word(3, 3)) == "T3"
    assert substitute(a_word(1), rho2(3).images) == b_word(3, 3)


def test_i_word_expansion_shape():
    assert len(i_word(2, 3)) == len(i_word_expanded(2, 3))


def test_unsupported_family():
    with pytest.raises(UnsupportedFamily):
        jm_words(B1, 'J', 3)
    with pytest.raises(UnsupportedFamily):
        jm_words(A1X, "J'", 2)


def test_presentation_nodes_and_bonds():
    pres = BraidPresentation(C1, 3)
    assert pres.nodes == ['T0', 'T1', 'T2', 'T3']
    assert pres.m('T0', 'T1') == 4
    assert pres.m('T1', 'T2') == 3
    assert pres.m('T0', 'T2') == 2
    assert pres.m('T2', 'T3') == 4
    assert BraidPresentation(C1, 1).m('T0', 'T1') is None
    assert BraidPresentation(D1, 2).nodes == ['T-1', 'T0', 'T1', 'T2', 'T3']


def test_coxeter_matrix_is_symmetric():
    frame = BraidPresentation(B1, 3).coxeter_matrix()
    assert (frame.values == frame.values.T).all()
    assert frame.loc['T-1', 'T1'] == 3


def test_presentation_rejects_bad_input():
    with pytest.raises(ValueError):
        BraidPresentation('E8', 3)
    with pytest.raises(ValueError):
        BraidPresentation(A1X, 2)
    with pytest.raises(FlipUnavailable):
        BraidPresentation(B1, 2).relations(with_flip=True)


def test_automorphisms_are_involutions():
    assert rho1(3).power(2).is_identity()
    assert rho2(3).power(2).is_identity()
    assert set(embedding_catalog(1)) == {'rho1', 'rho2'}
    assert 'rho3' in embedding_catalog(3)


def test_weyl_action_of_generators():
    a, b = Fraction(3), Fraction(5)
    state = WeylState.of([2, 7, 11], reflection(a), inversion(b))
    assert weyl_apply("T1", state).vector == (7, 2, 11)
    assert weyl_apply("T0", state).vector == (1, 7, 11)
    assert weyl_apply("T3", state).vector == (2, 7, Fraction(5, 11))


def test_weyl_jm_acts_on_one_coordinate():
    a, b = Fraction(3), Fraction(5)
    state = WeylState.of([2, 7, 11], reflection(a), inversion(b))
    moved = weyl_apply(jm_words(C1, 'J', 3)[1], state).vector
    assert moved[0] == 2 and moved[2] == 11
    assert moved[1] == b / (a - 7)


def test_weyl_flip_needs_equal_involutions():
    state = WeylState.of([2, 7], reflection(3), inversion(5))
    with pytest.raises(FlipUnavailable):
        weyl_apply("U", state)
    same = WeylState.of([2, 7], reflection(3), reflection(3))
    assert weyl_apply("U", same).vector == (7, 2)


def test_weyl_state_rejects_non_involution():
    with pytest.raises(ValueError):
        WeylState.of([1, 2], (Fraction(2), Fraction(0), Fraction(0), Fraction(1)), inversion(5))


def test_commuting_family_in_weyl_backend():
    backend = weyl_backend(3, reflection(Fraction(1, 2)), inversion(Fraction(7, 3)), states=4, seed=2)
    report = BraidOperations.apply('verify_commuting_family', words=jm_words(C1, 'J', 3), backends=[backend],
                                   label='J')
    assert report.ok
    assert len(report.checks) == 3
    assert report.notes


def test_non_commuting_pair_is_reported():
    backend = weyl_backend(2, reflection(Fraction(1, 2)), inversion(Fraction(7, 3)), states=4, seed=2)
    report = BraidOperations.apply('verify_commuting_family', words=[Word.parse("T0"), Word.parse("T1")],
                                   backends=[backend], label='pair')
    assert not report.ok


def test_weyl_states_avoid_involution_poles():
    for seed in range(6):
        rng = np.random.default_rng(seed)
        a, b = random_rational(rng, 97), random_rational(rng, 97)
        backend = weyl_backend(3, reflection(a), inversion(b), states=5, seed=seed)
        assert len(backend.states) == 5
        words = jm_words(C1, 'J', 3) + jm_words(C1, 'b', 3)
        for x in words:
            for y in words:
                for z in backend.states:
                    backend.evaluate(x * y).apply(z)


def test_domain_error_becomes_failed_check():
    backend = Backend('weyl', weyl_images(2, reflection(1), inversion(3)), SubstitutionMap.identity(2), 2,
                      [(Fraction(0), Fraction(1))])
    report = BraidOperations.apply('verify_commuting_family', words=[Word.parse("T1"), Word.parse("T2")],
                                   backends=[backend], label='pair')
    assert not report.ok
    assert 'undefined' in report.failures[0].witness['error']


def test_braid_suite_small_rank():
    report = BraidOperations.apply('suite', n=2, d=2, seed=1, magnitude=97, states=4)
    ids = {c.id for c in report.checks}
    assert report.ok, report.failures
    assert any(i.startswith('presentation:C1:') for i in ids)
    assert any(i.startswith('commute:J:') for i in ids)
    assert any(i.startswith('pi:') for i in ids)


def test_unknown_operation():
    with pytest.raises(ValueError):
        BraidOperations.apply('nope')


def test_braid_suite_completes_on_another_seed():
    report = BraidOperations.apply('suite', n=2, d=2, seed=0, magnitude=97, states=3)
    assert report.ok, report.failures
