"""
Difference operators on spectral parameters
Substitution maps (a permutation with a Mobius map per coordinate), operators
(z -> M(z)) composed with a substitution, and exact matrices over the rationals
"""

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import IncompatibleSubstitutions, InvolutionDomainError, SingularElement

logger = logging.getLogger(__name__)

Mobius = Tuple[Fraction, Fraction, Fraction, Fraction]
Vector = Tuple[Fraction, ...]

IDENTITY_MOBIUS: Mobius = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))


def mobius(a, b, c, d) -> Mobius:
    """x -> (a x + b)/(c x + d), normalized by the first nonzero of (c, d)"""
    a, b, c, d = (Fraction(v) for v in (a, b, c, d))
    if a * d - b * c == 0:
        raise ValueError(f"Degenerate Mobius map ({a}, {b}, {c}, {d})")
    lead = c if c != 0 else d
    return a / lead, b / lead, c / lead, d / lead


def mobius_apply(m: Mobius, x: Fraction) -> Fraction:
    a, b, c, d = m
    den = c * x + d
    if den == 0:
        raise InvolutionDomainError(f"Substitution x -> ({a}x + {b})/({c}x + {d}) is undefined at x={x}")
    return (a * x + b) / den


def mobius_after(outer: Mobius, inner: Mobius) -> Mobius:
    """outer o inner"""
    a1, b1, c1, d1 = outer
    a2, b2, c2, d2 = inner
    return mobius(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def mobius_inverse(m: Mobius) -> Mobius:
    a, b, c, d = m
    return mobius(d, -b, -c, a)


def reflection(a) -> Mobius:
    """x -> a - x"""
    return mobius(-1, a, 0, 1)


def inversion(b) -> Mobius:
    """x -> b / x"""
    return mobius(0, b, 1, 0)


def scaled_inversion(c) -> Mobius:
    """x -> 1 / (c x)"""
    return mobius(0, 1, c, 0)


def dilation(lam) -> Mobius:
    return mobius(lam, 0, 0, 1)


def translation(a) -> Mobius:
    return mobius(1, a, 0, 1)


@dataclass(frozen=True)
class SubstitutionMap:
    """
    (phi z)_i = maps[i](z[perm[i]])

    Maps are stored in normal form, so equality of maps is equality of the
    tuples.
    """

    perm: Tuple[int, ...]
    maps: Tuple[Mobius, ...]

    @classmethod
    def identity(cls, n: int) -> "SubstitutionMap":
        return cls(tuple(range(n)), (IDENTITY_MOBIUS,) * n)

    @classmethod
    def swap(cls, n: int, i: int) -> "SubstitutionMap":
        """s_i: exchange z_i and z_(i+1) (1-based)"""
        perm = list(range(n))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return cls(tuple(perm), (IDENTITY_MOBIUS,) * n)

    @classmethod
    def coordinate(cls, n: int, k: int, m: Mobius) -> "SubstitutionMap":
        """Apply m to z_k only (1-based)"""
        maps = [IDENTITY_MOBIUS] * n
        maps[k - 1] = m
        return cls(tuple(range(n)), tuple(maps))

    @classmethod
    def reversal(cls, n: int) -> "SubstitutionMap":
        return cls(tuple(range(n - 1, -1, -1)), (IDENTITY_MOBIUS,) * n)

    @classmethod
    def scale(cls, n: int, lam) -> "SubstitutionMap":
        return cls(tuple(range(n)), (dilation(lam),) * n)

    @property
    def size(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return self == SubstitutionMap.identity(self.size)

    def then(self, other: "SubstitutionMap") -> "SubstitutionMap":
        """z -> other(self(z))"""
        if other.size != self.size:
            raise IncompatibleSubstitutions(f"Cannot compose maps on {self.size} and {other.size} coordinates")
        perm = tuple(self.perm[p] for p in other.perm)
        maps = tuple(mobius_after(m, self.maps[p]) for m, p in zip(other.maps, other.perm))
        return SubstitutionMap(perm, maps)

    # Words act left to right: the product of two maps applies the left factor first
    __mul__ = then

    def unit_like(self) -> "SubstitutionMap":
        return SubstitutionMap.identity(self.size)

    def inverse(self) -> "SubstitutionMap":
        n = self.size
        inv = [0] * n
        for i, p in enumerate(self.perm):
            inv[p] = i
        return SubstitutionMap(tuple(inv), tuple(mobius_inverse(self.maps[inv[j]]) for j in range(n)))

    def apply(self, z: Sequence[Fraction]) -> Vector:
        if len(z) != self.size:
            raise ValueError(f"Substitution on {self.size} coordinates applied to {len(z)} values")
        return tuple(mobius_apply(m, Fraction(z[p])) for m, p in zip(self.maps, self.perm))

    def moved(self) -> List[int]:
        """1-based coordinates whose value can change"""
        return [i + 1 for i, (p, m) in enumerate(zip(self.perm, self.maps)) if p != i or m != IDENTITY_MOBIUS]

    def __str__(self) -> str:
        parts = []
        for i, (p, m) in enumerate(zip(self.perm, self.maps)):
            if p == i and m == IDENTITY_MOBIUS:
                continue
            a, b, c, d = m
            parts.append(f"z{i + 1}<-({a}*z{p + 1}+{b})/({c}*z{p + 1}+{d})")
        return "id" if not parts else ", ".join(parts)


def _rational(value) -> Fraction:
    if isinstance(value, np.integer):
        return Fraction(int(value))
    return Fraction(value)


class MatrixOp:
    """Square matrix of Fractions held in a numpy object array"""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"MatrixOp needs a square matrix, got shape {arr.shape}")
        self.data = np.vectorize(_rational, otypes=[object])(arr) if arr.size else arr

    @classmethod
    def identity(cls, size: int) -> "MatrixOp":
        return cls(np.identity(size, dtype=int))

    @classmethod
    def zeros(cls, size: int) -> "MatrixOp":
        return cls(np.zeros((size, size), dtype=int))

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def kron(self, other: "MatrixOp") -> "MatrixOp":
        return MatrixOp(np.kron(self.data, other.data))

    def __add__(self, other) -> "MatrixOp":
        if not isinstance(other, MatrixOp):
            other = self.unit_like() * other
        return MatrixOp(self.data + other.data)

    __radd__ = __add__

    def __neg__(self) -> "MatrixOp":
        return MatrixOp(-self.data)

    def __sub__(self, other) -> "MatrixOp":
        return self + (-other)

    def __rsub__(self, other) -> "MatrixOp":
        return (-self) + other

    def __mul__(self, other) -> "MatrixOp":
        if isinstance(other, MatrixOp):
            return MatrixOp(self.data.dot(other.data))
        return MatrixOp(self.data * Fraction(other))

    def __rmul__(self, other) -> "MatrixOp":
        return MatrixOp(self.data * Fraction(other))

    def __truediv__(self, other) -> "MatrixOp":
        return self * (1 / Fraction(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.unit_like() * other
        if not isinstance(other, MatrixOp):
            return NotImplemented
        return self.data.shape == other.data.shape and bool((self.data == other.data).all())

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self.data.flat)

    def unit_like(self) -> "MatrixOp":
        return MatrixOp.identity(self.size)

    def commutator(self, other: "MatrixOp") -> "MatrixOp":
        return self * other - other * self

    def trace(self) -> Fraction:
        return sum(self.data.diagonal(), Fraction(0))

    def inverse(self) -> "MatrixOp":
        """Gauss-Jordan elimination over the rationals"""
        n = self.size
        work = np.concatenate([self.data.copy(), MatrixOp.identity(n).data], axis=1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r, col] != 0), None)
            if pivot is None:
                raise SingularElement(f"Matrix of size {n} is singular (column {col})")
            if pivot != col:
                work[[col, pivot]] = work[[pivot, col]]
            work[col] = work[col] / work[col, col]
            for r in range(n):
                if r != col and work[r, col] != 0:
                    work[r] = work[r] - work[r, col] * work[col]
        return MatrixOp(work[:, n:])

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i, j]

    def with_entry(self, i: int, j: int, value) -> "MatrixOp":
        data = self.data.copy()
        data[i, j] = Fraction(value)
        return MatrixOp(data)

    def to_json(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.data]

    def __repr__(self) -> str:
        return f"MatrixOp({self.to_json()})"


def kron_all(*ops: MatrixOp) -> MatrixOp:
    return functools.reduce(MatrixOp.kron, ops)


Coefficient = Callable[[Vector], object]


class ConnectionOperator:
    """
    (M, phi) acting by (M Psi)(z) = M(z) Psi(phi z)

    The product is (M, phi)(M', phi') = (z -> M(z) M'(phi z), phi then phi').
    Two operators are equal when their substitutions coincide and their
    coefficients agree at every probe vector.
    """

    def __init__(self, coefficient: Coefficient, substitution: SubstitutionMap, unit,
                 probes: Sequence[Vector] = (), label: str = ""):
        self._coefficient = coefficient
        self.substitution = substitution
        self.unit = unit
        self.probes: Tuple[Vector, ...] = tuple(tuple(Fraction(v) for v in z) for z in probes)
        self.label = label
        self._memo: Dict[Vector, object] = {}

    @classmethod
    def multiplication(cls, coefficient: Coefficient, n: int, unit, probes: Sequence[Vector] = (),
                       label: str = "") -> "ConnectionOperator":
        return cls(coefficient, SubstitutionMap.identity(n), unit, probes, label)

    @classmethod
    def shift(cls, substitution: SubstitutionMap, unit, probes: Sequence[Vector] = (),
              label: str = "") -> "ConnectionOperator":
        return cls(lambda z: unit, substitution, unit, probes, label)

    def coefficient(self, z: Sequence[Fraction]):
        key = tuple(Fraction(v) for v in z)
        if key not in self._memo:
            self._memo[key] = self._coefficient(key)
        return self._memo[key]

    __call__ = coefficient

    def with_probes(self, probes: Sequence[Vector]) -> "ConnectionOperator":
        out = ConnectionOperator(self._coefficient, self.substitution, self.unit, probes, self.label)
        out._memo = self._memo
        return out

    def _probes_with(self, other: "ConnectionOperator") -> Tuple[Vector, ...]:
        return self.probes or other.probes

    def __mul__(self, other) -> "ConnectionOperator":
        if not isinstance(other, ConnectionOperator):
            c = Fraction(other)
            return ConnectionOperator(lambda z: self.coefficient(z) * c, self.substitution, self.unit,
                                      self.probes, self.label)
        phi = self.substitution
        return ConnectionOperator(
            lambda z: self.coefficient(z) * other.coefficient(phi.apply(z)),
            phi.then(other.substitution), self.unit, self._probes_with(other),
            f"{self.label}*{other.label}" if self.label and other.label else "",
        )

    def __rmul__(self, other) -> "ConnectionOperator":
        return self * other

    def inverse(self) -> "ConnectionOperator":
        back = self.substitution.inverse()
        return ConnectionOperator(lambda z: self.coefficient(back.apply(z)).inverse(), back, self.unit,
                                  self.probes, f"{self.label}^-1" if self.label else "")

    def _aligned(self, other: "ConnectionOperator") -> None:
        if self.substitution != other.substitution:
            raise IncompatibleSubstitutions(
                f"Cannot add operators with substitutions [{self.substitution}] and [{other.substitution}]")

    def __add__(self, other: "ConnectionOperator") -> "ConnectionOperator":
        self._aligned(other)
        return ConnectionOperator(lambda z: self.coefficient(z) + other.coefficient(z), self.substitution,
                                  self.unit, self._probes_with(other))

    def __neg__(self) -> "ConnectionOperator":
        return self * Fraction(-1)

    def __sub__(self, other: "ConnectionOperator") -> "ConnectionOperator":
        self._aligned(other)
        return ConnectionOperator(lambda z: self.coefficient(z) - other.coefficient(z), self.substitution,
                                  self.unit, self._probes_with(other))

    def unit_like(self) -> "ConnectionOperator":
        return ConnectionOperator.shift(SubstitutionMap.identity(self.substitution.size), self.unit, self.probes)

    def commutator(self, other: "ConnectionOperator") -> "ConnectionOperator":
        return self * other - other * self

    def is_zero(self) -> bool:
        if not self.probes:
            raise ValueError("Operator has no probe vectors to compare at")
        return all(self.coefficient(z).is_zero() for z in self.probes)

    def residual_at(self, z: Sequence[Fraction]):
        return self.coefficient(z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConnectionOperator):
            return NotImplemented
        if self.substitution != other.substitution:
            return False
        probes = self._probes_with(other)
        if not probes:
            raise ValueError("Operators have no probe vectors to compare at")
        return all(self.coefficient(z) == other.coefficient(z) for z in probes)

    __hash__ = None

    def __repr__(self) -> str:
        return f"ConnectionOperator({self.label or '?'}; {self.substitution})"


def product(factors: Iterable[ConnectionOperator], unit: Optional[ConnectionOperator] = None) -> ConnectionOperator:
    items = list(factors)
    if not items:
        if unit is None:
            raise ValueError("Empty operator product needs a unit")
        return unit
    return functools.reduce(lambda a, b: a * b, items)
