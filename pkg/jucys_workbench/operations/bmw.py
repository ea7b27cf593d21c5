"""
BMW, Hecke and Braid-Hecke algebras
Presentations, baxterized generators, Jucys-Murphy elements and the identity suite
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionOverflow, PoleError, WorkbenchError
from ..linalg import EchelonBasis, NoSolution, SparseVec, vec_axpy
from ..presentation import (
    AlgebraElement,
    ClosedAlgebra,
    LinComb,
    Presentation,
    Relation,
    Word,
    check_homomorphism,
    close_algebra,
)
from ..report import INFO, Check, Report, check
from ..scalar import BMW_GUARDS, ParameterPoint, UniRationalFn, eval_formula, random_rational

logger = logging.getLogger(__name__)

BMW = 'bmw'
HECKE = 'hecke'
PLAIN = 'plain'
TILDE = 'tilde'


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def T(i: int) -> str:
    return f"T{i}"


def K(i: int) -> str:
    return f"K{i}"


def w(*tokens: str) -> Word:
    return Word.parse(' '.join(tokens))


def lc(text: str, coeff: Fraction = Fraction(1)) -> LinComb:
    return LinComb.of(text, coeff)


def type_a_relations(n: int, point: ParameterPoint, variant: str = BMW) -> List[Relation]:
    """Relations among T_1..T_{n-1} (and K_i for BMW) at a point"""
    q, nu = point.q, point.nu
    delta = q - 1 / q
    rels: List[Relation] = []
    bmw = variant == BMW
    for i in range(1, n):
        ti, ki = T(i), K(i)
        if bmw:
            mu = eval_formula('mu', [], point)
            rels.append(Relation(f"quadratic:{i}", lc(f"{ti} {ti}"),
                                 LinComb.scalar(1) + lc(ti, delta) + lc(ki, -delta * nu),
                                 "T^2 = 1 + (q-q^-1)T - (q-q^-1) nu K"))
            rels.append(Relation(f"absorb-right:{i}", lc(f"{ki} {ti}"), lc(ki, nu), "K_i T_i = nu K_i"))
            rels.append(Relation(f"absorb-left:{i}", lc(f"{ti} {ki}"), lc(ki, nu), "T_i K_i = nu K_i"))
            rels.append(Relation(f"idempotent:{i}", lc(f"{ki} {ki}"), lc(ki, mu), "K_i^2 = mu K_i"))
        else:
            rels.append(Relation(f"quadratic:{i}", lc(f"{ti} {ti}"),
                                 LinComb.scalar(1) + lc(ti, delta), "T^2 = 1 + (q-q^-1)T"))
    for i in range(1, n):
        for j in range(i + 1, n):
            ti, tj, ki, kj = T(i), T(j), K(i), K(j)
            if j == i + 1:
                rels.append(Relation.words(f"braid:{i},{j}", f"{ti} {tj} {ti}", f"{tj} {ti} {tj}",
                                           "T_i T_j T_i = T_j T_i T_j"))
                if not bmw:
                    continue
                for a, b in ((i, j), (j, i)):
                    ta, tb, ka, kb = T(a), T(b), K(a), K(b)
                    rels.append(Relation(f"sandwich-T:{a},{b}", lc(f"{ka} {tb} {ka}"), lc(ka, 1 / nu),
                                         "K_i T_j K_i = nu^-1 K_i"))
                    rels.append(Relation.words(f"tangle:{a},{b}", f"{ka} {kb} {ka}", ka, "K_i K_j K_i = K_i"))
                    rels.append(Relation.words(f"untwist:{a},{b}", f"{ka} {tb} {ta}", f"{ka} {kb}",
                                               "K_i T_j T_i = K_i K_j"))
                    rels.append(Relation.words(f"untwist-mirror:{a},{b}", f"{ta} {tb} {ka}", f"{kb} {ka}",
                                               "T_i T_j K_i = K_j K_i"))
                    rels.append(Relation.words(f"slide:{a},{b}", f"{ka} {tb} {ta}", f"{tb} {ta} {kb}",
                                               "K_i T_j T_i = T_j T_i K_j"))
            else:
                pairs = [(ti, tj)]
                if bmw:
                    pairs += [(ti, kj), (ki, tj), (ki, kj)]
                for a, b in pairs:
                    rels.append(Relation.words(f"far:{a},{b}", f"{a} {b}", f"{b} {a}", "far generators commute"))
    return rels


def type_a_generators(n: int, variant: str = BMW) -> Tuple[Tuple[str, int], ...]:
    gens = [(T(i), 1) for i in range(1, n)]
    if variant == BMW:
        gens += [(K(i), 1) for i in range(1, n)]
    return tuple(gens)


def type_a_inverses(n: int, point: ParameterPoint, variant: str = BMW) -> Dict[str, LinComb]:
    delta = point.delta
    out = {}
    for i in range(1, n):
        expr = lc(T(i)) + LinComb.scalar(-delta)
        if variant == BMW:
            expr = expr + lc(K(i), delta)
        out[T(i)] = expr
    return out


def bmw_presentation(n: int, point: ParameterPoint, variant: str = BMW,
                     perturb: Optional[Fraction] = None) -> Presentation:
    """
    BMW_n or Hecke H_n at a point

    Args:
        perturb: Added to the K coefficient of the first quadratic relation
            (fault injection)
    """
    rels = type_a_relations(n, point, variant)
    if perturb:
        first = rels[0]
        rels[0] = Relation(first.label, first.lhs, first.rhs + lc(K(1) if variant == BMW else T(1), perturb),
                           first.anchor)
    expected = double_factorial(2 * n - 1) if variant == BMW else factorial(n)
    return Presentation(f"{variant.upper()}_{n}", type_a_generators(n, variant), tuple(rels),
                        type_a_inverses(n, point, variant), (), point, expected)


def bax_coefficients(point: ParameterPoint, x: Fraction, variant: str = PLAIN,
                     with_kappa: bool = True) -> Tuple[Fraction, Fraction, Fraction]:
    """
    (unit, T, K) coefficients of the baxterized generator at x = u/v

    plain: T + (q-q^-1)x/(1-x) + (q-q^-1)nu x/(nu x + q) K
    tilde: (1-x) times plain
    """
    q, nu = point.q, point.nu
    delta = q - 1 / q
    x = Fraction(x)
    if nu * x + q == 0:
        raise PoleError(f"Baxterized generator has a pole at x={x} (nu x + q = 0)", factor="nu x + q")
    kappa = delta * nu * x / (nu * x + q) if with_kappa else Fraction(0)
    if variant == TILDE:
        return delta * x, 1 - x, (1 - x) * kappa
    if x == 1:
        raise PoleError("Baxterized generator has a pole at u = v", factor="v/u - 1")
    return delta * x / (1 - x), Fraction(1), kappa


def bax_coefficient_functions(point: ParameterPoint, variant: str = TILDE,
                              with_kappa: bool = True) -> Tuple[UniRationalFn, UniRationalFn, UniRationalFn]:
    """The same coefficients as rational functions of x"""
    q, nu = point.q, point.nu
    delta = q - 1 / q
    x = UniRationalFn.identity()
    kappa = delta * nu * x / (nu * x + q) if with_kappa else UniRationalFn.constant(0)
    if variant == TILDE:
        return delta * x, 1 - x, (1 - x) * kappa
    return delta * x / (1 - x), UniRationalFn.constant(1), kappa


@dataclass
class BaxterizedElement:
    """T_i(u, v) realized at concrete spectral values"""

    index: int
    u: Fraction
    v: Fraction
    variant: str
    element: AlgebraElement


class TypeAInstance:
    """Shared element accessors for closed algebras containing T_i and K_i"""

    def __init__(self, n: int, algebra: ClosedAlgebra, point: ParameterPoint, variant: str = BMW):
        self.n = n
        self.algebra = algebra
        self.point = point
        self.variant = variant
        self._cache: Dict[Tuple, AlgebraElement] = {}

    @property
    def has_kappa(self) -> bool:
        return self.variant != HECKE

    @property
    def q(self) -> Fraction:
        return self.point.q

    @property
    def nu(self) -> Fraction:
        return self.point.nu

    @property
    def delta(self) -> Fraction:
        return self.point.delta

    @property
    def mu(self) -> Fraction:
        return eval_formula('mu', [], self.point)

    def one(self) -> AlgebraElement:
        return self.algebra.unit()

    def scalar(self, c) -> AlgebraElement:
        return self.algebra.scalar(c)

    def word(self, text) -> AlgebraElement:
        key = ('word', str(text))
        if key not in self._cache:
            self._cache[key] = self.algebra.word(text)
        return self._cache[key]

    def T(self, i: int) -> AlgebraElement:
        return self.word(T(i))

    def Tinv(self, i: int) -> AlgebraElement:
        return self.word(f"{T(i)}^-1")

    def K(self, i: int) -> AlgebraElement:
        if not self.has_kappa:
            return self.algebra.zero()
        return self.word(K(i))

    def bax(self, i: int, x: Fraction, variant: str = PLAIN) -> AlgebraElement:
        """Baxterized generator T_i(x) with x = u/v"""
        key = ('bax', i, Fraction(x), variant)
        if key not in self._cache:
            c0, cT, cK = bax_coefficients(self.point, x, variant, self.has_kappa)
            self._cache[key] = self.T(i) * cT + self.K(i) * cK + c0
        return self._cache[key]

    def baxterized(self, i: int, u: Fraction, v: Fraction, variant: str = PLAIN) -> BaxterizedElement:
        if u == 0 or v == 0:
            raise PoleError("Baxterized generator needs nonzero spectral values", factor="u v")
        return BaxterizedElement(i, Fraction(u), Fraction(v), variant, self.bax(i, Fraction(u) / Fraction(v), variant))

    def jm(self, k: int) -> AlgebraElement:
        """y_1 = 1, y_{k+1} = T_k y_k T_k"""
        key = ('jm', k)
        if key not in self._cache:
            if k == 1:
                value = self.first_jm()
            else:
                value = self.T(k - 1) * self.jm(k - 1) * self.T(k - 1)
            self._cache[key] = value
        return self._cache[key]

    def first_jm(self) -> AlgebraElement:
        return self.one()


class BmwInstance(TypeAInstance):
    """Closed BMW_n or Hecke H_n at one point"""

    @property
    def dimension(self) -> int:
        return self.algebra.dim

    @property
    def expected_dim(self) -> int:
        return double_factorial(2 * self.n - 1) if self.has_kappa else factorial(self.n)


def random_spectral(rng: np.random.Generator, count: int, magnitude: int, avoid=()) -> List[Fraction]:
    """Distinct nonzero spectral values avoiding +-1 and the given values"""
    out: List[Fraction] = []
    banned = {Fraction(1), Fraction(-1)} | {Fraction(a) for a in avoid}
    while len(out) < count:
        value = random_rational(rng, magnitude)
        if value not in banned and value not in out:
            out.append(value)
    return out


def braid_hecke_presentation(n: int, point: ParameterPoint, tangle: bool = False) -> Presentation:
    """Braid-Hecke algebra with formal inverse generators and K_i = 1 - (T_i - T_i^-1)/(q - q^-1)"""
    nu, delta = point.nu, point.delta

    def kappa(i: int) -> LinComb:
        return LinComb.scalar(1) + lc(T(i), -1 / delta) + lc(f"{T(i)}^-1", 1 / delta)

    gens = []
    for i in range(1, n):
        gens += [(T(i), 1), (T(i), -1)]
    rels: List[Relation] = []
    for i in range(1, n):
        ti = T(i)
        rels.append(Relation.words(f"inverse-right:{i}", f"{ti} {ti}^-1", "1", "T T^-1 = 1"))
        rels.append(Relation.words(f"inverse-left:{i}", f"{ti}^-1 {ti}", "1", "T^-1 T = 1"))
        rels.append(Relation(f"absorb-right:{i}", kappa(i) * lc(ti), kappa(i) * nu, "K_i T_i = nu K_i"))
        rels.append(Relation(f"absorb-left:{i}", lc(ti) * kappa(i), kappa(i) * nu, "T_i K_i = nu K_i"))
    for i in range(1, n):
        for j in range(i + 1, n):
            ti, tj = T(i), T(j)
            if j == i + 1:
                rels.append(Relation.words(f"braid:{i},{j}", f"{ti} {tj} {ti}", f"{tj} {ti} {tj}",
                                           "T_i T_j T_i = T_j T_i T_j"))
                for a, b in ((i, j), (j, i)):
                    rels.append(Relation(
                        f"slide:{a},{b}",
                        lc(f"{T(b)} {T(a)}") * kappa(b) - kappa(a) * kappa(b),
                        lc(f"{T(a)} {T(b)}") * kappa(a) - kappa(b) * kappa(a),
                        "T_j T_i K_j - K_i K_j = T_i T_j K_i - K_j K_i",
                    ))
                rels.append(Relation(
                    f"kappa-braid:{i},{j}",
                    kappa(i) * kappa(j) * kappa(i) - kappa(i),
                    kappa(j) * kappa(i) * kappa(j) - kappa(j),
                    "K_i K_j K_i - K_i = K_j K_i K_j - K_j",
                ))
                if tangle:
                    for a, b in ((i, j), (j, i)):
                        rels.append(Relation(f"tangle:{a},{b}", kappa(a) * kappa(b) * kappa(a), kappa(a),
                                             "K_i K_j K_i = K_i"))
            else:
                for sa in (1, -1):
                    for sb in (1, -1):
                        a = Word([(ti, sa)])
                        b = Word([(tj, sb)])
                        rels.append(Relation.words(f"far:{a},{b}", a * b, b * a, "far generators commute"))
    name = f"BH_{n}" + ("/tangle" if tangle else "")
    return Presentation(name, tuple(gens), tuple(rels), {}, (), point,
                        double_factorial(2 * n - 1) if tangle else None)


@dataclass
class BraidHeckeTrace:
    """Tr_(n): BH_n -> BH_{n-1}, stored by its values on the basis words of BH_n"""

    upper: ClosedAlgebra
    lower: ClosedAlgebra
    images: List[SparseVec]
    unique: bool

    def __call__(self, X: AlgebraElement) -> AlgebraElement:
        out: SparseVec = {}
        for j, c in X.coeffs.items():
            vec_axpy(out, c, self.images[j])
        return self.lower.element(out)

    def include(self, X: AlgebraElement) -> AlgebraElement:
        """X in BH_{n-1} as an element of BH_n"""
        out: SparseVec = {}
        for j, c in X.coeffs.items():
            vec_axpy(out, c, self.upper.act_word({0: Fraction(1)}, self.lower.basis[j]))
        return self.upper.element(out)


def braid_hecke_trace(n: int, upper: ClosedAlgebra, lower: ClosedAlgebra, point: ParameterPoint) -> BraidHeckeTrace:
    """
    Solve for the BH_{n-1}-bimodule map Tr_(n): BH_n -> BH_{n-1} with
    Tr(X) = nu mu X on BH_{n-1}, Tr(T_{n-1}) = 1 and Tr(T_{n-1}^-1) = nu^2

    The unknowns are the coefficients of Tr on every basis word of BH_n.

    Raises:
        NoSolution: if the conditions are inconsistent
    """
    low, high = lower.dim, upper.dim
    rows: List[Tuple[Dict[int, Fraction], Fraction]] = []

    def unknown(r: int, j: int) -> int:
        return j * low + r

    def constrain(vec: SparseVec, target: SparseVec, minus: Optional[List[Tuple[int, SparseVec]]] = None):
        """Tr(vec) - sum_(j, image) image(Tr(w_j)) = target, one row per basis word of BH_{n-1}"""
        for r in range(low):
            coeffs: Dict[int, Fraction] = {}
            for j, c in vec.items():
                coeffs[unknown(r, j)] = coeffs.get(unknown(r, j), 0) + c
            for j, images in minus or ():
                for s, image in enumerate(images):
                    c = image.get(r)
                    if c:
                        coeffs[unknown(s, j)] = coeffs.get(unknown(s, j), 0) - c
            rows.append(({u: c for u, c in coeffs.items() if c}, target.get(r, Fraction(0))))

    nu, mu = point.nu, eval_formula('mu', [], point)
    one = Fraction(1)
    for s, word in enumerate(lower.basis):
        constrain(upper.act_word({0: one}, word), {s: nu * mu})
    top = T(n - 1)
    constrain(upper.act({0: one}, (top, 1)), {0: one})
    constrain(upper.act({0: one}, (top, -1)), {0: nu * nu})
    for letter in lower.right:
        left_low = lower.left_table(letter)
        right_low = [lower.act({s: one}, letter) for s in range(low)]
        left_high = upper.left_table(letter)
        for j in range(high):
            constrain(left_high[j], {}, [(j, left_low)])
            constrain(upper.act({j: one}, letter), {}, [(j, right_low)])

    columns: Dict[int, SparseVec] = {u: {} for u in range(low * high)}
    rhs: SparseVec = {}
    for i, (coeffs, target) in enumerate(rows):
        for u, c in coeffs.items():
            columns[u][i] = c
        if target:
            rhs[i] = target
    basis = EchelonBasis()
    for u, col in columns.items():
        basis.add(col, u)
    combo = basis.express(rhs)
    images = [{r: combo[unknown(r, j)] for r in range(low) if combo.get(unknown(r, j))} for j in range(high)]
    return BraidHeckeTrace(upper, lower, images, basis.rank == low * high)


class BmwOperations:
    """Builders and identity suites for BMW_n, H_n and BH_n"""

    @staticmethod
    def apply(operation: str, **kwargs):
        """
        Dispatch a named BMW operation

        Args:
            operation: one of build_bmw, build_hecke, identity_suite, braid_hecke
            **kwargs: Arguments of the operation

        Returns:
            Result of the operation
        """
        if operation == 'build_bmw':
            return BmwOperations.build_bmw(**kwargs)
        elif operation == 'build_hecke':
            return BmwOperations.build_hecke(**kwargs)
        elif operation == 'identity_suite':
            return BmwOperations.identity_suite_bmw(**kwargs)
        elif operation == 'braid_hecke':
            return BmwOperations.braid_hecke_suite(**kwargs)
        else:
            raise ValueError(f"Unknown BMW operation: {operation}")

    @staticmethod
    def build_bmw(n: int, point: ParameterPoint, max_dim: Optional[int] = None,
                  perturb: Optional[Fraction] = None) -> BmwInstance:
        pres = bmw_presentation(n, point, BMW, perturb)
        algebra = close_algebra(pres, point, max_dim, seed=point.seed)
        return BmwInstance(n, algebra, point, BMW)

    @staticmethod
    def build_hecke(n: int, point: ParameterPoint, max_dim: Optional[int] = None) -> BmwInstance:
        pres = bmw_presentation(n, point, HECKE)
        algebra = close_algebra(pres, point, max_dim, seed=point.seed)
        return BmwInstance(n, algebra, point, HECKE)

    @staticmethod
    def baxterized(instance: TypeAInstance, i: int, u: Fraction, v: Fraction,
                   variant: str = PLAIN) -> BaxterizedElement:
        return instance.baxterized(i, u, v, variant)

    @staticmethod
    def identity_suite_bmw(instance: BmwInstance, trials: int = 5, seed: int = 0,
                           magnitude: int = 97, mu_override: Optional[Fraction] = None) -> Report:
        """
        Verify the derived BMW relations, baxterization identities and the
        Jucys-Murphy identities on one closed instance

        Args:
            instance: Closed BMW_n (or Hecke) instance
            trials: Number of random spectral tuples
            mu_override: Replaces mu in the K^2 check (fault injection)
        """
        report = Report('bmw-identities')
        report.add_point(instance.point)
        n, p = instance.n, instance.point
        tag = f"n={n}"
        one = instance.one()
        delta, nu = instance.delta, instance.nu
        mu = instance.mu if mu_override is None else mu_override
        bmw = instance.has_kappa

        report.add(check(f"dimension:{tag}", "dim BMW_n = (2n-1)!!, dim H_n = n!",
                         instance.dimension == instance.expected_dim,
                         {'found': instance.dimension, 'expected': instance.expected_dim}))

        def residual(check_id: str, anchor: str, lhs: AlgebraElement, rhs: AlgebraElement, **wit):
            diff = lhs - rhs
            wit.update({'support': sorted(diff.coeffs)[:4]})
            report.add(check(check_id, anchor, diff.is_zero(), wit))

        for i in range(1, n):
            Ti, Ki, Tinv = instance.T(i), instance.K(i), instance.Tinv(i)
            residual(f"inverse:{i}", "T T^-1 = 1", Ti * Tinv, one)
            if bmw:
                residual(f"kappa-square:{i}", "K^2 = mu K", Ki * Ki, Ki * mu)
                residual(f"kappa-definition:{i}", "K = 1 - (T - T^-1)/(q - q^-1)",
                         Ki, one - (Ti - Tinv) / delta)
                residual(f"absorb:{i}", "K T = T K = nu K", Ki * Ti + Ti * Ki, Ki * (2 * nu))

        for i in range(1, n):
            for j in (i - 1, i + 1):
                if not 1 <= j < n or not bmw:
                    continue
                Ti, Tj, Ki, Kj = instance.T(i), instance.T(j), instance.K(i), instance.K(j)
                Tiv, Tjv = instance.Tinv(i), instance.Tinv(j)
                pair = f"{i},{j}"
                residual(f"sandwich:{pair}", "K_i T_j K_i = nu^-1 K_i", Ki * Tj * Ki, Ki / nu)
                residual(f"tangle:{pair}", "K_i K_j K_i = K_i", Ki * Kj * Ki, Ki)
                residual(f"inverse-untwist:{pair}", "K_i T_j^-1 T_i^-1 = K_i K_j", Ki * Tjv * Tiv, Ki * Kj)
                residual(f"inverse-untwist-mirror:{pair}", "T_i^-1 T_j^-1 K_i = K_j K_i",
                         Tiv * Tjv * Ki, Kj * Ki)
                residual(f"conjugate:{pair}", "T_j K_i T_j = T_i^-1 K_j T_i^-1", Tj * Ki * Tj, Tiv * Kj * Tiv)
                residual(f"shift:{pair}", "K_j K_i (T_j - d) = K_j (T_i - d)",
                         Kj * Ki * (Tj - delta), Kj * (Ti - delta))
                residual(f"shift-mirror:{pair}", "(T_j - d) K_i K_j = (T_i - d) K_j",
                         (Tj - delta) * Ki * Kj, (Ti - delta) * Kj)
                residual(f"symmetric:{pair}", "(T_i - d) K_j (T_i - d) = (T_j - d) K_i (T_j - d)",
                         (Ti - delta) * Kj * (Ti - delta), (Tj - delta) * Ki * (Tj - delta))

        pres = instance.algebra.presentation
        images = {T(i): instance.T(i) for i in range(1, n)}
        flip = {T(i): instance.T(n - i) for i in range(1, n)}
        if bmw:
            images.update({K(i): instance.K(i) for i in range(1, n)})
            flip.update({K(i): instance.K(n - i) for i in range(1, n)})
        if pres is not None:
            report.extend(check_homomorphism(pres, flip, one, name='flip-automorphism'))
            report.extend(check_homomorphism(pres, images, one, anti=True, name='reversal-anti-automorphism'))

        rng = np.random.default_rng(seed)
        guard = [-p.q / p.nu, p.q ** 2, 1 / p.q ** 2]
        for t in range(trials):
            u1, u2, u3 = random_spectral(rng, 3, magnitude, guard)
            x, y = u1 / u2, u1 / u3
            try:
                for i in range(1, n - 1):
                    b = instance.bax
                    lhs = b(i, u2 / u3) * b(i + 1, u1 / u3) * b(i, u1 / u2)
                    rhs = b(i + 1, u1 / u2) * b(i, u1 / u3) * b(i + 1, u2 / u3)
                    residual(f"yang-baxter:{i}:t{t}", "T_i(u2,u3)T_j(u1,u3)T_i(u1,u2) = T_j(u1,u2)T_i(u1,u3)T_j(u2,u3)",
                             lhs, rhs, spectral=[str(u1), str(u2), str(u3)])
                for i in range(1, n):
                    bx, by = instance.bax(i, x), instance.bax(i, y)
                    q = p.q
                    xy = x * y
                    if xy != 1:
                        kappa_coeff = delta * nu * (xy - 1) * (nu * xy + q ** 3) / (
                            (nu * y + q) * (nu * x + q) * (nu * xy + q)) if bmw else 0
                        rhs = instance.bax(i, xy) * (delta * (1 - xy) / ((1 - x) * (1 - y))) + 1 + \
                            instance.K(i) * kappa_coeff
                        residual(f"product:{i}:t{t}", "T(x)T(y) = c(x,y) T(xy) + 1 + k(x,y) K",
                                 bx * by, rhs, spectral=[str(x), str(y)])
                    shift = delta * (x - y) / ((y - 1) * (x - 1))
                    kshift = delta * nu * q * (x - y) / ((nu * y + q) * (nu * x + q)) if bmw else 0
                    residual(f"difference:{i}:t{t}", "T(x) = T(y) + c(x,y) + k(x,y) K",
                             bx, by + shift + instance.K(i) * kshift, spectral=[str(x), str(y)])
                    scalar = (q ** 2 - x) * (x * q ** 2 - 1) / (q ** 2 * x)
                    residual(f"tilde-unitarity:{i}:t{t}", "T~(u/v) T~(v/u) = (vq^2-u)(uq^2-v)/(q^2uv)",
                             instance.bax(i, x, TILDE) * instance.bax(i, 1 / x, TILDE), one * scalar,
                             spectral=[str(x)])
                    f = eval_formula('f', [u1, u2], p)
                    residual(f"inverse-law:{i}:t{t}", "T(v,u)^-1 = T(u,v) f(u,v)",
                             instance.bax(i, u2 / u1).inverse(), instance.bax(i, u1 / u2) * f,
                             spectral=[str(u1), str(u2)])
            except PoleError as exc:
                report.add(Check(f"spectral-pole:t{t}", "spectral values avoid poles", INFO,
                                 {'error': str(exc)}))

        for i in range(1, n):
            residual(f"tilde-at-one:{i}", "T~(1) = q - q^-1", instance.bax(i, 1, TILDE), one * delta)
            c0, cT, cK = bax_coefficient_functions(p, TILDE, bmw)
            derivative = instance.T(i) * cT.derivative()(1) + instance.K(i) * cK.derivative()(1) + \
                c0.derivative()(1)
            expected = -instance.T(i) + delta - instance.K(i) * (delta / (1 + p.q / nu) if bmw else 0)
            residual(f"tilde-derivative:{i}", "dT~/dx at 1 = -T - (q-q^-1)/(1+q/nu) K + (q-q^-1)",
                     derivative, expected)

        ys = [instance.jm(k) for k in range(1, n + 1)]
        for a in range(n):
            for b in range(a + 1, n):
                report.add(check(f"jm-commute:{a + 1},{b + 1}", "y_a y_b = y_b y_a",
                                 ys[a].commutator(ys[b]).is_zero()))
        for k in range(1, n + 1):
            for j in range(1, n):
                if j < k - 1 or j > k:
                    report.add(check(f"jm-locality:{k},{j}", "y_k commutes with T_j away from k-1, k",
                                     ys[k - 1].commutator(instance.T(j)).is_zero()))
        if bmw:
            for j in range(1, n):
                Kj = instance.K(j)
                residual(f"jm-kappa:{j}", "K_j y_{j+1} y_j = nu^2 K_j",
                         Kj * ys[j] * ys[j - 1], Kj * nu ** 2)
                residual(f"jm-kappa-mirror:{j}", "y_j y_{j+1} K_j = nu^2 K_j",
                         ys[j - 1] * ys[j] * Kj, Kj * nu ** 2)
        return report

    @staticmethod
    def build_braid_hecke(n: int, point: ParameterPoint, max_dim: int = 400,
                          tangle: bool = False) -> ClosedAlgebra:
        return close_algebra(braid_hecke_presentation(n, point, tangle), point, max_dim, seed=point.seed)

    @staticmethod
    def braid_hecke_trace_checks(n: int, point: ParameterPoint, upper: ClosedAlgebra,
                                 max_dim: int = 400) -> Report:
        """Existence, uniqueness and the trace identities of Tr_(n) on BH_n"""
        report = Report('braid-hecke-trace')
        lower = BmwOperations.build_braid_hecke(n - 1, point, max_dim)
        anchor = "Tr_(n): BH_n -> BH_(n-1) with the Markov trace conditions"
        try:
            trace = braid_hecke_trace(n, upper, lower, point)
        except NoSolution as exc:
            report.add(check(f"bh-trace:n={n}", anchor, False, {'error': str(exc)}))
            return report
        report.add(check(f"bh-trace:n={n}", anchor, True))
        report.add(check(f"bh-trace-unique:n={n}", "the trace conditions fix Tr_(n)", trace.unique))
        delta, nu = point.delta, point.nu
        top = T(n - 1)
        Tn, Tinv = upper.word(top), upper.word(f"{top}^-1")
        kappa = upper.unit() - (Tn - Tinv) / delta
        report.add(check(f"bh-trace-kappa:n={n}", "Tr(K_(n-1)) = nu", trace(kappa) == lower.scalar(nu),
                         {'found': str(trace(kappa).coeffs)}))
        if n < 3:
            return report
        below = braid_hecke_trace(n - 1, lower, BmwOperations.build_braid_hecke(n - 2, point, max_dim), point)
        for s, X in enumerate(lower.basis_elements()):
            Xn = trace.include(X)
            expected = below.include(below(X))
            report.add(check(f"bh-trace-conjugation:{s}", "Tr_(n)(T X T^-1) = Tr_(n-1)(X) = Tr_(n)(T^-1 X T)",
                             trace(Tn * Xn * Tinv) == expected == trace(Tinv * Xn * Tn),
                             {'word': str(lower.basis[s])}))
            report.add(check(f"bh-trace-kappa-swap:{s}", "Tr(T X K) = Tr(K X T)",
                             trace(Tn * Xn * kappa) == trace(kappa * Xn * Tn), {'word': str(lower.basis[s])}))
        cyclic = [j for j, Y in enumerate(upper.basis_elements()) if below(trace(Tn * Y)) != below(trace(Y * Tn))]
        report.add(check(f"bh-trace-cyclic:n={n}", "Tr_(n-1) Tr_(n)(T Y) = Tr_(n-1) Tr_(n)(Y T)", not cyclic,
                         {'words': [str(upper.basis[j]) for j in cyclic[:4]]}))
        return report

    @staticmethod
    def braid_hecke_suite(n: int, point: ParameterPoint, max_dim: int = 400) -> Report:
        """
        Experimental closure of BH_n and its derived relations

        Overflow is recorded as an informational entry.
        """
        report = Report('braid-hecke')
        report.add_point(point)
        q, nu, delta = point.q, point.nu, point.delta
        s = (q - nu) * (1 / q + nu) / (nu * delta)
        report.notes.append(f"kappa Hecke parameter constraint: p + p^-1 = {s}")
        if n >= 3:
            try:
                quotient = BmwOperations.build_braid_hecke(n, point, max_dim, tangle=True)
                report.add(check(f"bh-tangle-quotient:n={n}", "BH_n / tangle relations has dim (2n-1)!!",
                                 quotient.dim == double_factorial(2 * n - 1), {'dim': quotient.dim}))
            except DimensionOverflow as exc:
                report.add(check(f"bh-tangle-quotient:n={n}", "BH_n / tangle relations has dim (2n-1)!!",
                                 False, {'overflow': exc.reached}))
        try:
            algebra = BmwOperations.build_braid_hecke(n, point, max_dim)
        except DimensionOverflow as exc:
            report.add(Check(f"bh-closure:n={n}", "BH_n closes to a finite basis", INFO,
                             {'overflow': exc.reached, 'max_dim': max_dim}))
            return report
        report.add(Check(f"bh-closure:n={n}", "BH_n closes to a finite basis", INFO, {'dim': algebra.dim}))
        one = algebra.unit()
        for i in range(1, n):
            Ti = algebra.word(T(i))
            Tinv = algebra.word(f"{T(i)}^-1")
            Ki = one - (Ti - Tinv) / delta
            cubic = (Ti - q) * (Ti + 1 / q) * (Ti - nu)
            report.add(check(f"bh-cubic:{i}", "(T - q)(T + q^-1)(T - nu) = 0", cubic.is_zero()))
            report.add(check(f"bh-kappa-square:{i}", "K^2 = (q-nu)(q^-1+nu)/(nu(q-q^-1)) K",
                             (Ki * Ki - Ki * s).is_zero()))
        ys = [one]
        for k in range(1, n):
            Tk = algebra.word(T(k))
            ys.append(Tk * ys[-1] * Tk)
        for a, b in itertools.combinations(range(1, n), 2):
            report.add(check(f"bh-jm-commute:{a + 1},{b + 1}", "y_a y_b = y_b y_a in BH_n",
                             ys[a].commutator(ys[b]).is_zero()))
        for j in range(1, n):
            Kj = one - (algebra.word(T(j)) - algebra.word(f"{T(j)}^-1")) / delta
            residual = Kj * ys[j] * ys[j - 1] - ys[j - 1] * ys[j] * Kj
            report.add(check(f"bh-jm-kappa:{j}", "K_j y_{j+1} y_j = y_j y_{j+1} K_j", residual.is_zero(),
                             {'support': sorted(residual.coeffs)[:4]}))
        if n >= 2:
            report.merge(BmwOperations.braid_hecke_trace_checks(n, point, algebra, max_dim))
        if n >= 3:
            flip = {T(i): algebra.word(T(n - i)) for i in range(1, n)}
            flip.update({f"{T(i)}^-1": algebra.word(f"{T(n - i)}^-1") for i in range(1, n)})
            report.extend(check_homomorphism(algebra.presentation, flip, one, name='bh-flip'))

            def bh_bax(i: int, z: Fraction) -> AlgebraElement:
                Ti = algebra.word(T(i))
                Tinv = algebra.word(f"{T(i)}^-1")
                value = Ti * (q * z) + Tinv * nu + delta * z * (q + nu) / (z - 1)
                return value / (nu + q * z)

            rng = np.random.default_rng(point.seed)
            u1, u2, u3 = random_spectral(rng, 3, 97, [-nu / q])
            try:
                lhs = bh_bax(1, u2 / u3) * bh_bax(2, u1 / u3) * bh_bax(1, u1 / u2)
                rhs = bh_bax(2, u1 / u2) * bh_bax(1, u1 / u3) * bh_bax(2, u2 / u3)
                report.add(check("bh-yang-baxter", "braid-Hecke baxterized Yang-Baxter equation",
                                 (lhs - rhs).is_zero()))
            except (ZeroDivisionError, WorkbenchError) as exc:
                report.add(Check("bh-yang-baxter", "braid-Hecke baxterized Yang-Baxter equation", INFO,
                                 {'error': str(exc)}))
        return report
