"""
Scalar layer for JucysWorkbench
Exact rationals, guarded generic-point sampling, closed-form scalar formulas
and univariate rational functions in the spectral variable
"""

import functools
import logging
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from .errors import GuardExhaustion, PoleError

logger = logging.getLogger(__name__)

Rational = Fraction

DEFAULT_MAGNITUDE = 10 ** 4
MAX_REJECTION_ROUNDS = 1000

# Denominators of mu, the baxterized coefficients and the boundary solution
BMW_GUARDS = (
    "q",
    "nu",
    "q - 1/q",
    "1/q + nu",
    "q - nu",
    "q + nu",
    "q**2 + 1",
    "nu + q**3",
    "nu*q**3 + 1",
)


def to_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce ints, strings like '3/7' and Fractions to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"Floating-point value {value!r} is not exact")
    return Fraction(value)


_IDENTIFIER = re.compile(r"[A-Za-z_]\w*")


class RationalExpression:
    """
    A rational expression over named symbols, parsed with sympy

    Every identifier in the source is a plain symbol, so sympy names such as
    ``pi`` or ``sin`` carry no meaning. Floats and non-rational expressions
    are rejected.
    """

    def __init__(self, source: str):
        self.source = source
        names = {name: sp.Symbol(name) for name in _IDENTIFIER.findall(source)}
        try:
            self._expr = sp.sympify(source, locals=names)
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise ValueError(f"Invalid rational expression: {source!r}") from exc
        if not isinstance(self._expr, sp.Expr) or self._expr.has(sp.Float):
            raise ValueError(f"Not an exact expression: {source!r}")
        if not self._expr.is_rational_function(*self._expr.free_symbols):
            raise ValueError(f"Not a rational function of its symbols: {source!r}")
        self.symbols = frozenset(str(s) for s in self._expr.free_symbols)

    def __repr__(self) -> str:
        return f"RationalExpression({self.source!r})"

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        """Evaluate exactly; raises ZeroDivisionError on a vanishing denominator"""
        missing = self.symbols - set(assignment)
        if missing:
            raise KeyError(f"Symbol '{sorted(missing)[0]}' is not assigned")
        values = {}
        for name in self.symbols:
            v = to_rational(assignment[name])
            values[sp.Symbol(name)] = sp.Rational(v.numerator, v.denominator)
        result = self._expr.xreplace(values)
        if result.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
            raise ZeroDivisionError(f"{self.source} has a pole at {dict(sorted(assignment.items()))}")
        if not result.is_Rational:
            raise ValueError(f"{self.source} did not evaluate to a rational at {dict(sorted(assignment.items()))}")
        return Fraction(int(result.p), int(result.q))


@functools.lru_cache(maxsize=None)
def parse_expression(source: str) -> RationalExpression:
    return RationalExpression(source)



Guard = Union[str, RationalExpression, Callable[[Mapping[str, Fraction]], Fraction]]


def _guard_label(guard: Guard) -> str:
    if isinstance(guard, RationalExpression):
        return guard.source
    if isinstance(guard, str):
        return guard
    return getattr(guard, "__name__", repr(guard))


def _guard_value(guard: Guard, assignment: Mapping[str, Fraction]) -> Fraction:
    if isinstance(guard, str):
        guard = parse_expression(guard)
    if isinstance(guard, RationalExpression):
        return guard.evaluate(assignment)
    return Fraction(guard(assignment))


@dataclass(frozen=True)
class ParameterPoint:
    """An exact assignment of rationals to the formal parameters"""

    assignment: Tuple[Tuple[str, Fraction], ...]
    seed: int = 0
    guard_log: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def of(cls, seed: int = 0, **values) -> "ParameterPoint":
        items = tuple(sorted((k, to_rational(v)) for k, v in values.items()))
        return cls(items, seed)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.assignment)

    def __getitem__(self, name: str) -> Fraction:
        for key, value in self.assignment:
            if key == name:
                return value
        raise KeyError(f"Parameter '{name}' is not assigned at this point")

    def __contains__(self, name: str) -> bool:
        return any(key == name for key, _ in self.assignment)

    def get(self, name: str, default: Optional[Fraction] = None) -> Optional[Fraction]:
        return self[name] if name in self else default

    def with_values(self, **values) -> "ParameterPoint":
        merged = self.as_dict()
        merged.update({k: to_rational(v) for k, v in values.items()})
        return replace(self, assignment=tuple(sorted(merged.items())))

    @property
    def q(self) -> Fraction:
        return self["q"]

    @property
    def nu(self) -> Fraction:
        return self["nu"]

    @property
    def delta(self) -> Fraction:
        return self["q"] - 1 / self["q"]

    def to_json(self) -> Dict[str, object]:
        return {"seed": self.seed, "assignment": {k: str(v) for k, v in self.assignment}}

    def __str__(self) -> str:
        body = ", ".join(f"{k}={v}" for k, v in self.assignment)
        return f"({body})"


def random_rational(rng: np.random.Generator, magnitude: int = DEFAULT_MAGNITUDE) -> Fraction:
    """Nonzero signed rational with numerator and denominator bounded by magnitude"""
    num = int(rng.integers(1, magnitude + 1))
    den = int(rng.integers(1, magnitude + 1))
    if rng.integers(0, 2):
        num = -num
    return Fraction(num, den)


def sample_generic(symbols: Iterable[str], guards: Iterable[Guard], seed: int,
                   magnitude: int = DEFAULT_MAGNITUDE,
                   fixed: Optional[Mapping[str, Fraction]] = None) -> ParameterPoint:
    """
    Draw a generic rational point at which every guard is nonzero

    Args:
        symbols: Names to sample
        guards: Rational expressions (strings, RationalExpression or callables)
        seed: Seed of the numpy generator; the result depends only on the inputs
        magnitude: Bound on numerators and denominators
        fixed: Values that are not sampled

    Returns:
        ParameterPoint carrying the guard labels it satisfies
    """
    names = sorted(set(symbols) - set(fixed or {}))
    guard_list = [parse_expression(g) if isinstance(g, str) else g for g in guards]
    labels = tuple(_guard_label(g) for g in guard_list)
    rng = np.random.default_rng(seed)

    for round_no in range(MAX_REJECTION_ROUNDS):
        assignment = {name: random_rational(rng, magnitude) for name in names}
        assignment.update({k: to_rational(v) for k, v in (fixed or {}).items()})
        if all(_guard_holds(g, assignment) for g in guard_list):
            if round_no:
                logger.debug("Accepted point after %d rejected draws (seed %d)", round_no, seed)
            return ParameterPoint(tuple(sorted(assignment.items())), seed, labels)

    raise GuardExhaustion(
        f"No point satisfying guards {list(labels)} after {MAX_REJECTION_ROUNDS} rounds (seed {seed})"
    )


def _guard_holds(guard: Guard, assignment: Mapping[str, Fraction]) -> bool:
    try:
        return _guard_value(guard, assignment) != 0
    except ZeroDivisionError:
        return False


def failing_guard(guards: Iterable[Guard], assignment: Mapping[str, Fraction]) -> Optional[str]:
    """Label of the first guard that vanishes (or has a pole) at the assignment"""
    for guard in guards:
        if not _guard_holds(guard, assignment):
            return _guard_label(guard)
    return None


# ---------------------------------------------------------------------------
# Closed-form scalar functions


@dataclass(frozen=True)
class Formula:
    """A named closed form: numerator over a product of labelled factors"""

    name: str
    arity: int
    anchor: str
    numerator: Callable[[Sequence[Fraction], ParameterPoint], Fraction]
    denominators: Tuple[Tuple[str, Callable[[Sequence[Fraction], ParameterPoint], Fraction]], ...]

    def __call__(self, args: Sequence[Fraction], point: ParameterPoint) -> Fraction:
        if len(args) != self.arity:
            raise ValueError(f"Formula '{self.name}' takes {self.arity} arguments, got {len(args)}")
        args = [to_rational(a) for a in args]
        value = self.numerator(args, point)
        for label, factor in self.denominators:
            d = factor(args, point)
            if d == 0:
                raise PoleError(f"Formula '{self.name}': factor {label} vanishes", factor=label)
            value /= d
        return value


class FormulaRegistry:
    """Registry of named scalar formulas"""

    def __init__(self):
        self._formulas: Dict[str, Formula] = {}

    def register(self, formula: Formula) -> None:
        if formula.name in self._formulas:
            raise ValueError(f"Formula '{formula.name}' already registered")
        self._formulas[formula.name] = formula

    def names(self) -> List[str]:
        return sorted(self._formulas)

    def get(self, name: str) -> Formula:
        try:
            return self._formulas[name]
        except KeyError:
            raise KeyError(f"Unknown formula '{name}'. Known: {self.names()}") from None

    def evaluate(self, name: str, args: Sequence[Fraction], point: ParameterPoint) -> Fraction:
        return self.get(name)(args, point)


def _q(p: ParameterPoint) -> Fraction:
    return p["q"]


def _nu(p: ParameterPoint) -> Fraction:
    return p["nu"]


def _delta(p: ParameterPoint) -> Fraction:
    return p["q"] - 1 / p["q"]


REGISTRY = FormulaRegistry()

REGISTRY.register(Formula(
    "delta", 0, "delta = q - q^-1",
    lambda a, p: _delta(p), (),
))
REGISTRY.register(Formula(
    "mu", 0, "kappa^2 = mu kappa, mu = (q - q^-1 + nu^-1 - nu)/(q - q^-1)",
    lambda a, p: _delta(p) + 1 / _nu(p) - _nu(p),
    (("q - q^-1", lambda a, p: _delta(p)),),
))
REGISTRY.register(Formula(
    "f", 2, "T(v,u)^-1 = T(u,v) f(u,v)",
    lambda a, p: (a[0] - a[1]) ** 2,
    (("u - q^2 v", lambda a, p: a[0] - _q(p) ** 2 * a[1]),
     ("u - q^-2 v", lambda a, p: a[0] - a[1] / _q(p) ** 2)),
))
REGISTRY.register(Formula(
    "F", 1, "crossing: Tr(T(x) X T(q^2 nu^-2/x)) = F(x)^-1 Tr(X)",
    lambda a, p: (a[0] * _nu(p) + _q(p)) ** 2,
    (("x nu + q^3", lambda a, p: a[0] * _nu(p) + _q(p) ** 3),
     ("x nu + q^-1", lambda a, p: a[0] * _nu(p) + 1 / _q(p))),
))
REGISTRY.register(Formula(
    "N", 1, "Tr(T~(z^2)) = N(z^2)",
    lambda a, p: (_q(p) ** 2 - a[0] * _nu(p) ** 2) * (a[0] * _nu(p) + 1 / _q(p)),
    (("z^2 nu + q", lambda a, p: a[0] * _nu(p) + _q(p)),),
))
REGISTRY.register(Formula(
    "c", 1, "c = -nu q^-1 zhat^-1",
    lambda a, p: -_nu(p),
    (("q zhat", lambda a, p: _q(p) * a[0]),),
))
REGISTRY.register(Formula(
    "c_prime", 1, "c' = -nu q^-1 zhat'^-1",
    lambda a, p: -_nu(p),
    (("q zhat'", lambda a, p: _q(p) * a[0]),),
))
REGISTRY.register(Formula(
    "zhat", 0, "zhat = -nu q^-1 w^-2",
    lambda a, p: -_nu(p),
    (("q w^2", lambda a, p: _q(p) * p["w"] ** 2),),
))


def eval_formula(name: str, args: Sequence[Fraction], point: ParameterPoint) -> Fraction:
    """Evaluate a registered closed form exactly"""
    return REGISTRY.evaluate(name, args, point)


# ---------------------------------------------------------------------------
# Dense univariate polynomials, coefficients low to high

Poly = Tuple[Fraction, ...]


def poly_trim(p: Sequence[Fraction]) -> Poly:
    coeffs = list(p)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(Fraction(c) for c in coeffs)


def poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    size = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)])


def poly_scale(a: Sequence[Fraction], s: Fraction) -> Poly:
    return poly_trim([c * s for c in a])


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[Poly, Poly]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("Polynomial division by zero")
    rem = list(poly_trim(a))
    quot = [Fraction(0)] * max(len(rem) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = list(poly_trim(rem))
    return poly_trim(quot), poly_trim(rem)


def poly_monic(a: Sequence[Fraction]) -> Poly:
    a = poly_trim(a)
    return poly_scale(a, 1 / a[-1]) if a else ()


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_eval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_deriv(a: Sequence[Fraction]) -> Poly:
    return poly_trim([i * c for i, c in enumerate(a)][1:])


def poly_from_roots(roots: Iterable[Fraction]) -> Poly:
    out: Poly = (Fraction(1),)
    for r in roots:
        out = poly_mul(out, (-Fraction(r), Fraction(1)))
    return out


def lagrange_interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    """Unique polynomial of degree < len(xs) through the given nodes (Newton form)"""
    if len(set(xs)) != len(xs):
        raise ValueError("Interpolation nodes must be distinct")
    coef = [Fraction(y) for y in ys]
    size = len(xs)
    for level in range(1, size):
        for i in range(size - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    out: Poly = ()
    for i in range(size - 1, -1, -1):
        out = poly_add(poly_mul(out, (-Fraction(xs[i]), Fraction(1))), (coef[i],))
    return out


class UniRationalFn:
    """
    Exact rational function of one variable, kept in lowest terms with a
    monic denominator
    """

    __slots__ = ("numerator", "denominator", "variable")

    def __init__(self, numerator: Sequence[Fraction], denominator: Sequence[Fraction] = (Fraction(1),),
                 variable: str = "x"):
        num, den = poly_trim(numerator), poly_trim(denominator)
        if not den:
            raise ZeroDivisionError("Denominator of a rational function is identically zero")
        if not num:
            num, den = (), (Fraction(1),)
        else:
            g = poly_gcd(num, den)
            if len(g) > 1:
                num, den = poly_divmod(num, g)[0], poly_divmod(den, g)[0]
            lead = den[-1]
            num, den = poly_scale(num, 1 / lead), poly_scale(den, 1 / lead)
        self.numerator = num
        self.denominator = den
        self.variable = variable

    @classmethod
    def constant(cls, value: Fraction, variable: str = "x") -> "UniRationalFn":
        return cls((to_rational(value),), variable=variable)

    @classmethod
    def identity(cls, variable: str = "x") -> "UniRationalFn":
        return cls((Fraction(0), Fraction(1)), variable=variable)

    @classmethod
    def interpolate(cls, xs: Sequence[Fraction], values: Sequence[Fraction],
                    denominator: Sequence[Fraction] = (Fraction(1),), variable: str = "x") -> "UniRationalFn":
        """
        Reconstruct N/D from values at len(xs) nodes, given the denominator D
        and deg N < len(xs)
        """
        scaled = [Fraction(v) * poly_eval(denominator, x) for x, v in zip(xs, values)]
        return cls(lagrange_interpolate(xs, scaled), denominator, variable)

    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def degree(self) -> Tuple[int, int]:
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __call__(self, x: Fraction) -> Fraction:
        d = poly_eval(self.denominator, x)
        if d == 0:
            raise PoleError(f"Rational function has a pole at {self.variable}={x}", factor="denominator")
        return poly_eval(self.numerator, x) / d

    def _coerce(self, other) -> "UniRationalFn":
        if isinstance(other, UniRationalFn):
            return other
        return UniRationalFn.constant(to_rational(other), self.variable)

    def __add__(self, other) -> "UniRationalFn":
        o = self._coerce(other)
        num = poly_add(poly_mul(self.numerator, o.denominator), poly_mul(o.numerator, self.denominator))
        return UniRationalFn(num, poly_mul(self.denominator, o.denominator), self.variable)

    __radd__ = __add__

    def __neg__(self) -> "UniRationalFn":
        return UniRationalFn(poly_scale(self.numerator, Fraction(-1)), self.denominator, self.variable)

    def __sub__(self, other) -> "UniRationalFn":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniRationalFn":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniRationalFn":
        o = self._coerce(other)
        return UniRationalFn(poly_mul(self.numerator, o.numerator),
                             poly_mul(self.denominator, o.denominator), self.variable)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "UniRationalFn":
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("Division by the zero rational function")
        return UniRationalFn(poly_mul(self.numerator, o.denominator),
                             poly_mul(self.denominator, o.numerator), self.variable)

    def __rtruediv__(self, other) -> "UniRationalFn":
        return self._coerce(other) / self

    def __eq__(self, other) -> bool:
        if not isinstance(other, (UniRationalFn, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return self.numerator == o.numerator and self.denominator == o.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def derivative(self) -> "UniRationalFn":
        n, d = self.numerator, self.denominator
        num = poly_add(poly_mul(poly_deriv(n), d), poly_scale(poly_mul(n, poly_deriv(d)), Fraction(-1)))
        return UniRationalFn(num, poly_mul(d, d), self.variable)

    def at_infinity(self) -> Fraction:
        num_deg, den_deg = self.degree
        if num_deg > den_deg:
            raise PoleError(f"Rational function diverges as {self.variable} -> oo", factor="degree")
        return self.numerator[-1] if num_deg == den_deg else Fraction(0)

    def taylor(self, order: int) -> Poly:
        """Coefficients c_0..c_order of the expansion at 0"""
        d = self.denominator
        if d[0] == 0:
            raise PoleError(f"Rational function has a pole at {self.variable}=0", factor="denominator")
        num = list(self.numerator) + [Fraction(0)] * (order + 1)
        out: List[Fraction] = []
        for k in range(order + 1):
            acc = num[k] - sum((d[j] * out[k - j] for j in range(1, min(k, len(d) - 1) + 1)), Fraction(0))
            out.append(acc / d[0])
        return tuple(out)

    def __repr__(self) -> str:
        return f"UniRationalFn({_poly_str(self.numerator, self.variable)} / {_poly_str(self.denominator, self.variable)})"


def _poly_str(p: Sequence[Fraction], var: str) -> str:
    terms = [f"{c}*{var}^{i}" if i else f"{c}" for i, c in enumerate(p) if c]
    return " + ".join(terms) or "0"
