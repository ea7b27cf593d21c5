from fractions import Fraction

import numpy as np
import pytest

from jucys_workbench.errors import GuardExhaustion, PoleError
from jucys_workbench.scalar import (
    BMW_GUARDS,
    ParameterPoint,
    RationalExpression,
    UniRationalFn,
    eval_formula,
    failing_guard,
    lagrange_interpolate,
    parse_expression,
    poly_eval,
    poly_from_roots,
    poly_gcd,
    random_rational,
    sample_generic,
    to_rational,
)


def test_to_rational_rejects_floats():
    assert to_rational('3/7') == Fraction(3, 7)
    assert to_rational(2) == Fraction(2)
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_rational_expression_powers_and_division():
    expr = RationalExpression("q**2 - 1/q")
    assert expr.symbols == frozenset({'q'})
    assert expr.evaluate({'q': Fraction(2)}) == Fraction(7, 2)
    with pytest.raises(ZeroDivisionError):
        RationalExpression("1/(q - 1)").evaluate({'q': Fraction(1)})
    with pytest.raises(ValueError):
        RationalExpression("q ** x").evaluate({'q': Fraction(2), 'x': Fraction(2)})


def test_rational_expression_names_are_plain_symbols():
    expr = RationalExpression("pi*q + 1/2")
    assert expr.symbols == frozenset({'pi', 'q'})
    assert expr.evaluate({'pi': Fraction(2), 'q': Fraction(3, 4)}) == 2
    with pytest.raises(KeyError):
        expr.evaluate({'q': Fraction(1)})


def test_rational_expression_rejects_inexact_input():
    for source in ("0.5*q", "sin(q)", "q +", "sqrt(q)"):
        with pytest.raises(ValueError):
            RationalExpression(source)


def test_parsed_guards_are_cached():
    assert parse_expression("q - nu") is parse_expression("q - nu")
    assert failing_guard(["q - nu"], {'q': Fraction(2), 'nu': Fraction(2)}) == "q - nu"


def test_sample_generic_is_deterministic():
    a = sample_generic(('q', 'nu'), BMW_GUARDS, seed=11, magnitude=97)
    b = sample_generic(('q', 'nu'), BMW_GUARDS, seed=11, magnitude=97)
    assert a == b
    assert failing_guard(BMW_GUARDS, a.as_dict()) is None
    assert a.to_json()['seed'] == 11


def test_sample_generic_respects_fixed_values():
    point = sample_generic(('q', 'nu'), BMW_GUARDS, seed=3, magnitude=97, fixed={'q': Fraction(2)})
    assert point.q == 2
    assert point.delta == Fraction(3, 2)


def test_sample_generic_exhaustion():
    with pytest.raises(GuardExhaustion):
        sample_generic(('q',), ("q - q",), seed=0, magnitude=10)


def test_random_rational_bounds():
    rng = np.random.default_rng(5)
    for _ in range(50):
        r = random_rational(rng, 13)
        assert r != 0
        assert abs(r.numerator) <= 13 and r.denominator <= 13


def test_failing_guard_reports_label():
    assert failing_guard(BMW_GUARDS, {'q': Fraction(1), 'nu': Fraction(3)}) == "q - 1/q"


def test_parameter_point_access():
    point = ParameterPoint.of(seed=4, q=2, nu='1/3')
    assert point['nu'] == Fraction(1, 3)
    assert 'w' not in point
    assert point.get('w') is None
    assert point.with_values(w=5)['w'] == 5
    with pytest.raises(KeyError):
        point['w']


def test_mu_formula_and_pole():
    point = ParameterPoint.of(q=2, nu=3)
    delta = Fraction(3, 2)
    assert eval_formula('mu', (), point) == (delta + Fraction(1, 3) - 3) / delta
    with pytest.raises(PoleError) as info:
        eval_formula('mu', (), ParameterPoint.of(q=1, nu=3))
    assert info.value.factor == "q - q^-1"


def test_formula_arity_is_checked():
    with pytest.raises(ValueError):
        eval_formula('N', (), ParameterPoint.of(q=2, nu=3))
    with pytest.raises(KeyError):
        eval_formula('no-such-formula', (), ParameterPoint.of(q=2, nu=3))


def test_lagrange_reproduces_polynomial():
    poly = (Fraction(1), Fraction(-2), Fraction(0), Fraction(3, 5))
    xs = [Fraction(k) for k in range(4)]
    assert lagrange_interpolate(xs, [poly_eval(poly, x) for x in xs]) == poly
    with pytest.raises(ValueError):
        lagrange_interpolate([Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)])


def test_poly_gcd_of_shared_root():
    a = poly_from_roots([Fraction(2), Fraction(3)])
    b = poly_from_roots([Fraction(2), Fraction(-5)])
    assert poly_gcd(a, b) == (Fraction(-2), Fraction(1))


def test_rational_function_lowest_terms():
    x = UniRationalFn.identity()
    f = (x * x - 1) / (x - 1)
    assert f == x + 1
    assert f.degree == (1, 0)
    assert f(Fraction(3)) == 4


def test_rational_function_pole_and_limits():
    x = UniRationalFn.identity()
    f = (2 * x + 1) / (x - 2)
    assert f.at_infinity() == 2
    assert (1 / (x - 2)).at_infinity() == 0
    with pytest.raises(PoleError):
        f(Fraction(2))
    with pytest.raises(PoleError):
        (x * x / (x + 1)).at_infinity()


def test_rational_function_derivative_and_taylor():
    x = UniRationalFn.identity()
    f = 1 / (1 - x)
    assert f.taylor(4) == (1, 1, 1, 1, 1)
    assert f.derivative() == 1 / ((1 - x) * (1 - x))
    with pytest.raises(PoleError):
        (1 / x).taylor(2)


def test_interpolate_with_known_denominator():
    x = UniRationalFn.identity()
    target = (x * x + 3) / ((x + 2) * (x - 7))
    xs = [Fraction(k) for k in range(1, 5)]
    rebuilt = UniRationalFn.interpolate(xs, [target(v) for v in xs], target.denominator)
    assert rebuilt == target
