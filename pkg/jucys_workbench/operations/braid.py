"""
Affine braid groups and their commuting families
Coxeter presentations of the affine types, words for the Jucys-Murphy type
families, the spectral Weyl representation, finite quotient backends, the
twisted flip layer carrying U and Z, and the catalog of embeddings
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import (
    FlipUnavailable,
    GuardExhaustion,
    InvolutionDomainError,
    UnknownGenerator,
    UnsupportedFamily,
    WorkbenchError,
)
from ..linalg import vec_axpy
from ..presentation import (
    AlgebraElement,
    ClosedAlgebra,
    LinComb,
    Presentation,
    Relation,
    Word,
    check_homomorphism,
    close_algebra,
    evaluate_word,
    normal_form,
)
from ..report import INFO, LIMITATION_NOTE, Check, Report, check
from ..scalar import BMW_GUARDS, ParameterPoint, random_rational, sample_generic
from .affine_bmw import AffineBmwInstance, AffineBmwOperations
from .bmw import HECKE, K, T, BmwOperations, factorial, lc, type_a_generators, type_a_inverses, type_a_relations
from .operators import (
    IDENTITY_MOBIUS,
    Mobius,
    SubstitutionMap,
    Vector,
    inversion,
    mobius_after,
    mobius_apply,
    reflection,
)

logger = logging.getLogger(__name__)

C1 = 'C1'
C = 'C'
B1 = 'B1'
D1 = 'D1'
A1 = 'A1'
A1X = 'A1X'
TYPES = (C1, C, B1, D1, A1, A1X)

XBAR = 'Xb'
U = 'U'

# Lowest strand parameter each type is defined for
MIN_RANK = {C1: 1, C: 1, B1: 2, D1: 2, A1: 3, A1X: 3}

FAMILIES = {
    C1: ('J', 'Jbar', 'a', 'b', 'I', 'Io', 'Z', 'Y', 'Yd', 'JJ'),
    C: ('a',),
    B1: ('Jtilde', 'Jtilde_bar'),
    D1: ("J''", "Jbar''"),
    A1X: ("J'", "Jbar'"),
}

# Families whose words contain the flip U
FLIP_FAMILIES = ('Z', 'Y', 'Yd')

ANCHORS = {
    2: "far generators commute",
    3: "T_i T_j T_i = T_j T_i T_j",
    4: "T_i T_j T_i T_j = T_j T_i T_j T_i",
}


def Tp(i: int) -> str:
    """Generator T'_i of the periodic group"""
    return f"T'{i}"


# ---------------------------------------------------------------------------
# Words


def ascending(a: int, b: int, sign: int = 1, name=T) -> Word:
    """g_a g_(a+1) ... g_b, empty when a > b"""
    return Word((name(i), sign) for i in range(a, b + 1))


def descending(a: int, b: int, sign: int = 1, name=T) -> Word:
    """g_a g_(a-1) ... g_b, empty when a < b"""
    return Word((name(i), sign) for i in range(a, b - 1, -1))


def gen(name: str, power: int = 1) -> Word:
    return Word.gen(name, power)


def free_reduce(word: Word) -> Word:
    stack: List[Tuple[str, int]] = []
    for letter in word:
        if stack and stack[-1] == (letter[0], -letter[1]):
            stack.pop()
        else:
            stack.append(letter)
    return Word(stack)


def substitute(word: Union[Word, str], images: Mapping[str, Word]) -> Word:
    """Replace every letter by its image word (inverted for inverse letters), freely reduced"""

    def image(letter) -> Word:
        name, sign = letter
        if name not in images:
            raise UnknownGenerator(f"No image given for generator '{name}'")
        return images[name] if sign > 0 else images[name].inverse()

    return free_reduce(Word.parse(word).map_letters(image))


def x_word(n: int) -> Word:
    """X = T_0 T_1 ... T_n"""
    return ascending(0, n)


def x_tilde(n: int) -> Word:
    """X~ = T_-1 T_0 T_1 ... T_n"""
    return gen(T(-1)) * ascending(0, n)


def x_double_prime(n: int) -> Word:
    """X'' = T_-1 T_0 T_1 ... T_(n-1) T_n T_(n+1)"""
    return gen(T(-1)) * ascending(0, n - 1) * gen(T(n)) * gen(T(n + 1))


def _j_family(n: int, x: Word, bar: bool = False, name=T) -> List[Word]:
    inner = 1 if bar else -1
    return [descending(i - 1, 1, inner, name) * x * descending(n - 1, i, -inner, name) for i in range(1, n + 1)]


def a_word(i: int) -> Word:
    return descending(i - 1, 1) * gen(T(0)) * ascending(1, i - 1)


def b_word(i: int, n: int) -> Word:
    return ascending(i, n - 1) * gen(T(n)) * descending(n - 1, i)


def i_word(i: int, n: int) -> Word:
    """I_i = (X T_(n-1) ... T_i)^i"""
    return (x_word(n) * descending(n - 1, i)) ** i


def i_word_expanded(i: int, n: int) -> Word:
    """I_i = X^i (T_(n-i) ... T_1)(T_(n-i+1) ... T_2) ... (T_(n-1) ... T_i)"""
    out = x_word(n) ** i
    for j in range(i):
        out = out * descending(n - i + j, 1 + j)
    return out


def z_word(n: int) -> Word:
    """Z = (T_0 ... T_(n-1))(T_0 ... T_(n-2)) ... (T_0 T_1) T_0 U"""
    out = Word()
    for k in range(n - 1, -1, -1):
        out = out * ascending(0, k)
    return out * gen(U)


def jm_words(type_: str, family: str, n: int) -> List[Word]:
    """
    Words of a commuting family

    Args:
        type_: Braid type tag (C1, C, B1, D1, A1X)
        family: Family name from FAMILIES[type_]
        n: Strand parameter

    Returns:
        The family members in index order

    Raises:
        UnsupportedFamily: if the family is not defined for the type or rank
    """
    if family not in FAMILIES.get(type_, ()):
        raise UnsupportedFamily(f"Family '{family}' is not defined for braid type {type_}")
    if n < MIN_RANK[type_]:
        raise UnsupportedFamily(f"Braid type {type_} needs n >= {MIN_RANK[type_]}, got {n}")
    if family == 'J':
        return _j_family(n, x_word(n))
    elif family == 'Jbar':
        return _j_family(n, x_word(n), bar=True)
    elif family == 'a':
        return [a_word(i) for i in range(1, n + 1)]
    elif family == 'b':
        return [b_word(i, n) for i in range(1, n + 1)]
    elif family == 'I':
        return [i_word(i, n) for i in range(1, n + 1)]
    elif family == 'Io':
        return [i_word_expanded(i, n) for i in range(1, n + 1)]
    elif family == 'Z':
        return [z_word(n)]
    elif family == 'Y':
        return [i_word(i, n) for i in range(1, n)] + [z_word(n)]
    elif family == 'Yd':
        if n < 2:
            raise UnsupportedFamily("Family 'Yd' needs n >= 2")
        z = z_word(n)
        return [i_word(i, n) for i in range(1, n - 1)] + [i_word(n - 1, n) * z.inverse(), z]
    elif family == 'JJ':
        ii = [Word()] + [i_word(i, n) for i in range(1, n + 1)]
        return [ii[1] * ii[i] * ii[i - 1].inverse() for i in range(1, n + 1)]
    elif family == 'Jtilde':
        return _j_family(n, x_tilde(n))
    elif family == 'Jtilde_bar':
        return _j_family(n, x_tilde(n), bar=True)
    elif family == "J''":
        return _j_family(n, x_double_prime(n))
    elif family == "Jbar''":
        return _j_family(n, x_double_prime(n), bar=True)
    elif family == "J'":
        return _j_family(n, gen(XBAR), name=Tp)
    else:
        return _j_family(n, gen(XBAR), bar=True, name=Tp)


# ---------------------------------------------------------------------------
# Presentations


def _alternating(a: str, b: str, m: int) -> Word:
    return Word((a if k % 2 == 0 else b, 1) for k in range(m))


@dataclass(frozen=True)
class BraidPresentation:
    """Coxeter-type presentation of one braid group; m = None means no relation"""

    type: str
    n: int

    def __post_init__(self):
        if self.type not in TYPES:
            raise ValueError(f"Unknown braid type '{self.type}', expected one of {TYPES}")
        if self.n < MIN_RANK[self.type]:
            raise ValueError(f"Braid type {self.type} needs n >= {MIN_RANK[self.type]}, got {self.n}")

    @property
    def nodes(self) -> List[str]:
        kind, n = self.type, self.n
        if kind == C1:
            return [T(i) for i in range(n + 1)]
        elif kind == C:
            return [T(i) for i in range(n)]
        elif kind == B1:
            return [T(i) for i in range(-1, n + 1)]
        elif kind == D1:
            return [T(i) for i in range(-1, n + 2)]
        return [Tp(i) for i in range(1, n + 1)]

    @property
    def generators(self) -> List[str]:
        return self.nodes + ([XBAR] if self.type == A1X else [])

    def _bonds(self) -> Dict[frozenset, Optional[int]]:
        kind, n = self.type, self.n
        bonds: Dict[frozenset, Optional[int]] = {}

        def bond(a: str, b: str, m: Optional[int]) -> None:
            bonds[frozenset((a, b))] = m

        if kind in (C1, C):
            top = n if kind == C1 else n - 1
            for i in range(1, top - 1):
                bond(T(i), T(i + 1), 3)
            if kind == C1 and n == 1:
                bond(T(0), T(1), None)
            else:
                if top >= 1:
                    bond(T(0), T(1), 4)
                if kind == C1:
                    bond(T(n - 1), T(n), 4)
        elif kind in (B1, D1):
            bond(T(-1), T(1), 3)
            bond(T(0), T(1), 3)
            if kind == B1:
                for i in range(1, n - 1):
                    bond(T(i), T(i + 1), 3)
                bond(T(n - 1), T(n), 4)
            else:
                for i in range(1, n):
                    bond(T(i), T(i + 1), 3)
                bond(T(n - 1), T(n + 1), 3)
        else:
            for i in range(1, n + 1):
                bond(Tp(i), Tp(i % n + 1), 3)
        return bonds

    def m(self, a: str, b: str) -> Optional[int]:
        if a == b:
            return 1
        return self._bonds().get(frozenset((a, b)), 2)

    def coxeter_matrix(self) -> pd.DataFrame:
        nodes = self.nodes
        rows = [[self.m(a, b) if self.m(a, b) is not None else np.inf for b in nodes] for a in nodes]
        return pd.DataFrame(rows, index=nodes, columns=nodes)

    def relations(self, with_flip: bool = False) -> List[Relation]:
        rels: List[Relation] = []
        for a, b in itertools.combinations(self.nodes, 2):
            m = self.m(a, b)
            if m is None:
                continue
            rels.append(Relation.words(f"coxeter:{a},{b}", _alternating(a, b, m), _alternating(b, a, m),
                                       ANCHORS[m]))
        if self.type == A1X:
            for i in range(1, self.n + 1):
                rels.append(Relation.words(f"shift:{i}", gen(XBAR) * gen(Tp(i)),
                                           gen(Tp(i % self.n + 1)) * gen(XBAR), "Xb T'_i = T'_(i+1) Xb"))
        if with_flip:
            if self.type != C1:
                raise FlipUnavailable(f"The flip U is only modeled for type {C1}")
            for i in range(self.n + 1):
                rels.append(Relation.words(f"flip:{i}", gen(U) * gen(T(i)), gen(T(self.n - i)) * gen(U),
                                           "U T_i U^-1 = T_(n-i)"))
        return rels

    def presentation(self, with_flip: bool = False) -> Presentation:
        names = self.generators + ([U] if with_flip else [])
        gens = tuple(letter for g in names for letter in ((g, 1), (g, -1)))
        label = f"B({self.type},{self.n})" + ("^" if with_flip else "")
        return Presentation(label, gens, tuple(self.relations(with_flip)))


def c_type_rank(type_: str, n: int) -> int:
    """Rank m of the C-type group B(C_m) a type is realized in"""
    return {B1: n + 1, D1: n + 2}.get(type_, n)


def c_type_images(type_: str, n: int) -> Tuple[int, Dict[str, Word]]:
    """
    Words in B(C_m) for the generators of a type

    B1 and D1 land in the quotient of B(C_m) by T_0^2 = 1 (and T_m^2 = 1 for
    D1) through S_0 = T_0 T_1 T_0 and S_m = T_m T_(m-1) T_m; the periodic
    types use T'_n -> X^-1 T_1 X and Xb -> X.
    """
    pres = BraidPresentation(type_, n)
    m = c_type_rank(type_, n)
    if type_ in (C1, C):
        return m, {g: gen(g) for g in pres.nodes}
    if type_ in (A1, A1X):
        x = x_word(n)
        images = {Tp(i): gen(T(i)) for i in range(1, n)}
        images[Tp(n)] = x.inverse() * gen(T(1)) * x
        if type_ == A1X:
            images[XBAR] = x
        return m, images
    images = {T(-1): Word.parse("T0 T1 T0"), T(0): gen(T(1))}
    for i in range(1, n + 1):
        images[T(i)] = gen(T(i + 1))
    if type_ == D1:
        images[T(n + 1)] = gen(T(m)) * gen(T(m - 1)) * gen(T(m))
    return m, images


# Involutions T_0^2 = 1 and T_m^2 = 1 a realization needs
NEEDED_INVOLUTIONS = {B1: frozenset({'T0'}), D1: frozenset({'T0', 'Tm'})}


# ---------------------------------------------------------------------------
# Backends


class Backend:
    """
    Images of the B(C_m) generators in one representation or quotient

    Elements only need *, == and inverse(). Words are evaluated once and
    cached; states, when present, are extra probe vectors on which
    substitution maps are compared.
    """

    def __init__(self, name: str, images: Mapping[str, object], unit, rank: int,
                 states: Sequence[Vector] = (), involutions: Iterable[str] = ()):
        self.name = name
        self.images = dict(images)
        self.unit = unit
        self.rank = rank
        self.states = tuple(states)
        self.involutions = frozenset(involutions)
        self._words: Dict[Word, object] = {}
        self._inverses: Dict[str, object] = {}

    def __repr__(self) -> str:
        return f"Backend({self.name}, rank={self.rank})"

    @property
    def has_flip(self) -> bool:
        return U in self.images

    def supports(self, word: Union[Word, str]) -> bool:
        return all(g in self.images for g, _ in Word.parse(word))

    def evaluate(self, word: Union[Word, str]):
        word = Word.parse(word)
        if word not in self._words:
            self._words[word] = evaluate_word(word, self.images, self.unit, self._inverses)
        return self._words[word]

    def agree(self, x, y) -> bool:
        if self.states and not all(x.apply(z) == y.apply(z) for z in self.states):
            return False
        return x == y

    def through(self, mapping: Mapping[str, Word], name: Optional[str] = None) -> "Backend":
        images: Dict[str, object] = {}
        for g, word in mapping.items():
            images[g] = self.evaluate(word)
            images[f"{g}^-1"] = self.evaluate(word.inverse())
        return Backend(name or self.name, images, self.unit, self.rank, self.states, self.involutions)

    def for_type(self, type_: str, n: int) -> "Backend":
        """
        The backend seen from the generators of another braid type

        Raises:
            ValueError: if the rank does not match or the backend lacks an
                involution the realization needs
        """
        m, mapping = c_type_images(type_, n)
        if m != self.rank:
            raise ValueError(f"Type {type_} with n={n} needs rank {m}, backend {self.name} has rank {self.rank}")
        missing = NEEDED_INVOLUTIONS.get(type_, frozenset()) - self.involutions
        if missing:
            raise ValueError(f"Backend {self.name} does not satisfy {sorted(missing)}^2 = 1 needed by type {type_}")
        if type_ == C1:
            return self
        return self.through(mapping)


@dataclass(frozen=True)
class WeylState:
    """A spectral vector together with the involutions sigma (at z_1) and sigma_bar (at z_n)"""

    vector: Vector
    sigma: Mobius
    sigma_bar: Mobius

    def __post_init__(self):
        for m in (self.sigma, self.sigma_bar):
            if mobius_after(m, m) != IDENTITY_MOBIUS:
                raise ValueError(f"Mobius map {m} is not an involution")

    @classmethod
    def of(cls, vector: Sequence, sigma: Mobius, sigma_bar: Mobius) -> "WeylState":
        return cls(tuple(Fraction(v) for v in vector), sigma, sigma_bar)


def weyl_images(n: int, sigma: Mobius, sigma_bar: Mobius) -> Dict[str, SubstitutionMap]:
    """s_0 = sigma on z_1, s_i swaps z_i and z_(i+1), s_n = sigma_bar on z_n; U reverses when sigma = sigma_bar"""
    images = {T(0): SubstitutionMap.coordinate(n, 1, sigma)}
    for i in range(1, n):
        images[T(i)] = SubstitutionMap.swap(n, i)
    images[T(n)] = SubstitutionMap.coordinate(n, n, sigma_bar)
    if sigma == sigma_bar:
        images[U] = SubstitutionMap.reversal(n)
    return images


def orbit_is_defined(x: Fraction, maps: Sequence[Mobius], depth: int) -> bool:
    """True when every alternating word of length <= depth in the involutions is defined at x"""
    for start in range(len(maps)):
        value = x
        for step in range(depth):
            try:
                value = mobius_apply(maps[(start + step) % len(maps)], value)
            except InvolutionDomainError:
                return False
    return True


def weyl_backend(n: int, sigma: Mobius, sigma_bar: Mobius, states: int = 10, seed: int = 0,
                 magnitude: int = 97, name: str = 'weyl') -> Backend:
    """
    Weyl substitution backend with random probe states

    Probes come from their own stream, independent of the one that drew the
    involution parameters, and avoid the poles of sigma and sigma_bar along
    every alternating orbit the family words can reach.

    Raises:
        GuardExhaustion: if no generic probe is found
    """
    rng = np.random.default_rng([seed, 1])
    maps = (sigma,) if sigma == sigma_bar else (sigma, sigma_bar)
    depth = 4 * n + 4
    limit = 100 * (states + 1)
    probes: List[Vector] = []
    draws = 0
    while len(probes) < states:
        if draws == limit:
            raise GuardExhaustion(f"No generic Weyl probe for {name} after {limit} draws (seed {seed})")
        draws += 1
        candidate = tuple(random_rational(rng, magnitude) for _ in range(n))
        if all(orbit_is_defined(x, maps, depth) for x in candidate):
            probes.append(candidate)
    return Backend(name, weyl_images(n, sigma, sigma_bar), SubstitutionMap.identity(n), n, probes,
                   involutions=('T0', 'Tm'))


def weyl_apply(word: Union[Word, str], state: WeylState, type_: str = C1) -> WeylState:
    """
    Act on a state by a word, letters applied left to right

    Raises:
        InvolutionDomainError: if an involution is applied at an excluded value
        FlipUnavailable: if the word uses U while sigma != sigma_bar
    """
    word = Word.parse(word)
    m = len(state.vector)
    n = {B1: m - 1, D1: m - 2}.get(type_, m)
    base = weyl_backend(m, state.sigma, state.sigma_bar, states=0)
    if any(g == U for g, _ in word) and not base.has_flip:
        raise FlipUnavailable("U acts by reversal only when sigma = sigma_bar")
    phi = base.for_type(type_, n).evaluate(word)
    return WeylState(phi.apply(state.vector), state.sigma, state.sigma_bar)


def affine_quotient_backend(instance: AffineBmwInstance) -> Backend:
    """The cyclotomic affine BMW quotient with T_n -> 1"""
    n = instance.n
    images: Dict[str, object] = {}
    for i in range(n):
        images[T(i)] = instance.word(T(i))
        images[f"{T(i)}^-1"] = instance.word(f"{T(i)}^-1")
    images[T(n)] = instance.one()
    return Backend(f"{instance.algebra.name}/T{n}=1", images, instance.one(), n, involutions=('Tm',))


def type_b_hecke_presentation(m: int, point: ParameterPoint) -> Presentation:
    """Hecke algebra of type B_m with T_0^2 = 1; dimension 2^m m!"""
    rels = list(type_a_relations(m, point, HECKE))
    rels.append(Relation("involution", lc("T0 T0"), LinComb.scalar(1), "T0^2 = 1"))
    if m >= 2:
        rels.append(Relation.words("affine-braid", "T1 T0 T1 T0", "T0 T1 T0 T1", ANCHORS[4]))
    for k in range(2, m):
        rels.append(Relation.words(f"far:T0,{T(k)}", f"T0 {T(k)}", f"{T(k)} T0", ANCHORS[2]))
    inverses = dict(type_a_inverses(m, point, HECKE))
    inverses[T(0)] = lc("T0")
    gens = ((T(0), 1),) + type_a_generators(m, HECKE)
    return Presentation(f"H(B_{m})", gens, tuple(rels), inverses, (), point, 2 ** m * factorial(m))


def hecke_b_backend(m: int, point: ParameterPoint, max_dim: Optional[int] = None) -> Backend:
    """H(B_m) with T_m -> 1, a quotient of B(C_m) in which T_0^2 = T_m^2 = 1"""
    algebra = close_algebra(type_b_hecke_presentation(m, point), point, max_dim, seed=point.seed)
    images: Dict[str, object] = {}
    for i in range(m):
        images[T(i)] = algebra.word(T(i))
        images[f"{T(i)}^-1"] = algebra.word(f"{T(i)}^-1")
    images[T(m)] = algebra.unit()
    return Backend(f"{algebra.name}/T{m}=1", images, algebra.unit(), m, involutions=('T0', 'Tm'))


# ---------------------------------------------------------------------------
# Twisted layer


class TwistedLayer:
    """
    Semidirect product of a closed algebra with an involutive automorphism

    A pair (a, k) stands for a U^k with U a U^-1 = flip(a). Construction
    checks that the flip images satisfy every relation and that the flip
    squares to the identity on the basis.
    """

    def __init__(self, algebra: ClosedAlgebra, flip: Mapping[str, Union[Word, str]]):
        if algebra.presentation is None:
            raise FlipUnavailable(f"{algebra.name} carries no presentation to check the flip against")
        self.algebra = algebra
        self.flip_words = {g: Word.parse(w) for g, w in flip.items()}
        images = {g: algebra.word(w) for g, w in self.flip_words.items()}
        broken = [c.id for c in check_homomorphism(algebra.presentation, images, algebra.unit(), name='flip')
                  if not c.passed]
        if broken:
            raise FlipUnavailable(f"{algebra.name} does not admit the flip: {', '.join(broken)}")
        self._columns = [normal_form(algebra, substitute(word, self.flip_words)) for word in algebra.basis]
        for j in range(algebra.dim):
            if self.flip(self._columns[j]) != algebra.basis_element(j):
                raise FlipUnavailable(f"Flip of {algebra.name} is not an involution at [{algebra.basis[j]}]")

    @classmethod
    def bmw(cls, n: int, point: ParameterPoint, max_dim: Optional[int] = None) -> "TwistedLayer":
        """BMW_n with the diagram flip T_i -> T_(n-i), K_i -> K_(n-i)"""
        instance = BmwOperations.build_bmw(n, point, max_dim)
        flip: Dict[str, Word] = {}
        for i in range(1, n):
            flip[T(i)] = gen(T(n - i))
            flip[K(i)] = gen(K(n - i))
        return cls(instance.algebra, flip)

    def flip(self, x: AlgebraElement) -> AlgebraElement:
        out: Dict[int, Fraction] = {}
        for j, c in x.coeffs.items():
            vec_axpy(out, c, self._columns[j].coeffs)
        return AlgebraElement(self.algebra, out)

    def flip_power(self, x: AlgebraElement, k: int) -> AlgebraElement:
        return self.flip(x) if k % 2 else x

    def element(self, body: AlgebraElement, twist: int = 0) -> "TwistedElement":
        return TwistedElement(self, body, twist)


class TwistedElement:
    """(a, k) with (a, k)(b, m) = (a flip^k(b), k + m) and twist counted mod 2"""

    __slots__ = ("layer", "body", "twist")

    def __init__(self, layer: TwistedLayer, body: AlgebraElement, twist: int = 0):
        self.layer = layer
        self.body = body
        self.twist = twist % 2

    def __mul__(self, other) -> "TwistedElement":
        if isinstance(other, (int, Fraction)):
            return TwistedElement(self.layer, self.body * other, self.twist)
        return TwistedElement(self.layer, self.body * self.layer.flip_power(other.body, self.twist),
                              self.twist + other.twist)

    def inverse(self) -> "TwistedElement":
        return TwistedElement(self.layer, self.layer.flip_power(self.body.inverse(), self.twist), -self.twist)

    def unit_like(self) -> "TwistedElement":
        return TwistedElement(self.layer, self.layer.algebra.unit(), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwistedElement):
            return NotImplemented
        return self.twist == other.twist and self.body == other.body

    __hash__ = None

    def __repr__(self) -> str:
        return f"({self.body!r}, U^{self.twist})"


def twisted_backend(layer: TwistedLayer, n: int, end_value: Fraction) -> Backend:
    """T_0 and T_n act by the same scalar, T_i by the algebra generators, U by the flip"""
    algebra = layer.algebra
    images: Dict[str, object] = {T(i): layer.element(algebra.word(T(i))) for i in range(1, n)}
    images[T(0)] = layer.element(algebra.scalar(end_value))
    images[T(n)] = layer.element(algebra.scalar(end_value))
    images[U] = layer.element(algebra.unit(), 1)
    involutions = ('T0', 'Tm') if end_value ** 2 == 1 else ()
    return Backend(f"{algebra.name}+flip", images, layer.element(algebra.unit()), n, involutions=involutions)


# ---------------------------------------------------------------------------
# Identities and commuting families


@dataclass(frozen=True)
class Identity:
    """lhs = rhs as group elements"""

    label: str
    lhs: Word
    rhs: Word
    anchor: str

    @classmethod
    def of(cls, label: str, lhs: Union[Word, str], rhs: Union[Word, str], anchor: str) -> "Identity":
        return cls(label, Word.parse(lhs), Word.parse(rhs), anchor)


def verify_identities(identities: Iterable[Identity], backend: Backend) -> List[Check]:
    """Evaluate both sides of each identity the backend has generators for"""
    checks: List[Check] = []
    for ident in identities:
        if not (backend.supports(ident.lhs) and backend.supports(ident.rhs)):
            continue
        try:
            ok = backend.agree(backend.evaluate(ident.lhs), backend.evaluate(ident.rhs))
            witness = {'lhs': str(ident.lhs), 'rhs': str(ident.rhs)}
        except WorkbenchError as exc:
            ok, witness = False, {'lhs': str(ident.lhs), 'rhs': str(ident.rhs), 'error': str(exc)}
        if not ok:
            logger.warning("%s fails in %s", ident.label, backend.name)
        checks.append(check(ident.label, ident.anchor, ok, witness, backend.name))
    return checks


def verify_commuting_family(words: Sequence[Union[Word, str]], backends: Sequence[Backend],
                            label: str = 'family') -> Report:
    """
    Check that every pair of a family commutes in every backend

    A pass in representations and finite quotients is necessary, not
    complete, evidence of commutativity in the braid group.
    """
    words = [Word.parse(w) for w in words]
    report = Report('commuting-family')
    report.notes.append(LIMITATION_NOTE)
    if len(words) < 2:
        report.add(Check(f"commute:{label}", "a family with fewer than two elements commutes", INFO,
                         {'size': len(words)}))
        return report
    for backend in backends:
        try:
            values = [backend.evaluate(w) for w in words]
        except WorkbenchError as exc:
            report.add(check(f"commute:{label}:evaluate", "family members evaluate", False,
                             {'error': str(exc)}, backend.name))
            continue
        for (i, x), (j, y) in itertools.combinations(enumerate(values, 1), 2):
            witness = {'left': str(words[i - 1]), 'right': str(words[j - 1])}
            try:
                ok = backend.agree(x * y, y * x)
            except WorkbenchError as exc:
                ok = False
                witness['error'] = str(exc)
            if not ok:
                logger.warning("%s_%d and %s_%d do not commute in %s", label, i, label, j, backend.name)
            report.add(check(f"commute:{label}:{i},{j}", f"{label}_{i} {label}_{j} = {label}_{j} {label}_{i}",
                             ok, witness, backend.name))
    return report


def twisted_check(identities: Iterable[Identity], backend: Backend) -> Report:
    """
    Verify identities involving U exactly in a twisted backend

    Raises:
        FlipUnavailable: if the backend has no image for U
    """
    if not backend.has_flip:
        raise FlipUnavailable(f"Backend {backend.name} has no image for U")
    report = Report('twisted')
    report.extend(verify_identities(identities, backend))
    return report


def x_identities(n: int) -> List[Identity]:
    """Shift identities of X and the relations among the I_i and J_i"""
    x = x_word(n)
    out = [Identity(f"x-shift:{i}", x * gen(T(i)), gen(T(i + 1)) * x, "X T_i = T_(i+1) X")
           for i in range(1, n - 1)]
    if n >= 2:
        out.append(Identity("x-square", gen(T(1)) * x * x, x * x * gen(T(n - 1)), "T_1 X^2 = X^2 T_(n-1)"))
        out.append(Identity("t-bar", x.inverse() * gen(T(1)) * x, x * gen(T(n - 1)) * x.inverse(),
                            "X^-1 T_1 X = X T_(n-1) X^-1"))
    js = jm_words(C1, 'J', n)
    ii = [Word()] + jm_words(C1, 'I', n)
    for i in range(1, n + 1):
        out.append(Identity(f"i-expanded:{i}", ii[i], i_word_expanded(i, n),
                            "(X T_(n-1) ... T_i)^i = X^i T_(n-i) ... T_1 ... T_(n-1) ... T_i"))
        out.append(Identity(f"i-product:{i}", ii[i], Word.product(*js[:i]), "I_i = J_1 ... J_i"))
        out.append(Identity(f"jj:{i}", js[0] * js[i - 1], ii[1] * ii[i] * ii[i - 1].inverse(),
                            "J_1 J_i = I_1 I_i I_(i-1)^-1"))
    return out


def u_identities(n: int) -> List[Identity]:
    """Identities of the flip U and of Z in the extended group"""
    x, z = x_word(n), z_word(n)
    u2 = gen(U, 2)
    out = [Identity(f"u-central:{i}", u2 * gen(T(i)), gen(T(i)) * u2, "U^2 is central") for i in range(n + 1)]
    out += [Identity(f"z-commutes:{i}", z * gen(T(i)), gen(T(i)) * z, "Z T_i = T_i Z") for i in range(1, n)]
    out.append(Identity("z-commutes:X", z * x, x * z, "Z X = X Z"))
    out.append(Identity("z-shift", z * ascending(1, n), ascending(0, n - 1) * z, "Z T_1 ... T_n = T_0 ... T_(n-1) Z"))
    out.append(Identity("z-square", z * z, i_word(n, n) * u2, "Z^2 = I_n U^2"))
    out.append(Identity("phi:T0", z * gen(T(0)) * z.inverse(), x * gen(T(n)) * x.inverse(),
                        "Z T_0 Z^-1 = X T_n X^-1"))
    js = jm_words(C1, 'J', n)
    out.append(Identity("phi:Tn", z * gen(T(n)) * z.inverse(), js[-1] * gen(T(n), -1),
                        "Z T_n Z^-1 = J_n T_n^-1"))
    out += [Identity(f"z-commutes:I{i}", z * i_word(i, n), i_word(i, n) * z, "Z I_i = I_i Z")
            for i in range(1, n + 1)]
    return out


def periodic_identities(n: int) -> List[Identity]:
    xb = gen(XBAR)
    return [Identity("xbar-square", gen(Tp(1)) * xb * xb, xb * xb * gen(Tp(n - 1)), "T'_1 Xb^2 = Xb^2 T'_(n-1)")]


def pi_words(n: int) -> List[Word]:
    """The four elements of Pi_n in the quotient T_0^2 = T_n^2 = U^2 = 1"""
    t0, tn, u = gen(T(0)), gen(T(n)), gen(U)
    if n % 2:
        return [Word(), t0 * u, t0 * tn, tn * u]
    return [Word(), t0 * tn, u, t0 * tn * u]


def d_type_generators(n: int) -> List[Word]:
    """S_0 = T_0 T_1 T_0, S_i = T_i, S_n = T_n T_(n-1) T_n"""
    return ([Word.parse("T0 T1 T0")] + [gen(T(i)) for i in range(1, n)]
            + [gen(T(n)) * gen(T(n - 1)) * gen(T(n))])


def pi_checks(n: int, backend: Backend) -> List[Check]:
    """Pi_n is a group of order four permuting S_0, ..., S_n (Weyl level)"""
    pis = [backend.evaluate(p) for p in pi_words(n)]
    gens = [backend.evaluate(s) for s in d_type_generators(n)]
    closed = all(any(backend.agree(p * q, r) for r in pis) for p in pis for q in pis)
    distinct = all(not backend.agree(p, q) for p, q in itertools.combinations(pis, 2))
    normalizing = all(any(backend.agree(p * s * p.inverse(), t) for t in gens) for p in pis for s in gens)
    tag = f"n={n}"
    return [
        check(f"pi:closed:{tag}", "Pi_n is closed under products", closed, {'n': n}, backend.name),
        check(f"pi:order:{tag}", "Pi_n has four distinct elements", distinct, {'n': n}, backend.name),
        check(f"pi:normalizes:{tag}", "Pi_n permutes S_0, ..., S_n", normalizing, {'n': n}, backend.name),
    ]


def weyl_action_checks(n: int, backend: Backend, sigma: Mobius, sigma_bar: Mobius) -> List[Check]:
    """J_k and Jbar_k act as sigma_bar o sigma on z_k, a_k as sigma, b_k as sigma_bar"""
    expected = {
        'J': mobius_after(sigma_bar, sigma),
        'Jbar': mobius_after(sigma_bar, sigma),
        'a': sigma,
        'b': sigma_bar,
    }
    checks = []
    for family, m in expected.items():
        for k, word in enumerate(jm_words(C1, family, n), 1):
            witness = {'word': str(word), 'map': str(backend.evaluate(word))}
            try:
                ok = backend.agree(backend.evaluate(word), SubstitutionMap.coordinate(n, k, m))
            except InvolutionDomainError as exc:
                ok = False
                witness['error'] = str(exc)
            checks.append(check(f"weyl-action:{family}:{k}", f"{family}_{k} acts on z_{k} only", ok,
                                witness, backend.name))
    for g in BraidPresentation(C1, n).nodes:
        ok = all(backend.evaluate(gen(g, 2)).apply(z) == tuple(z) for z in backend.states)
        checks.append(check(f"weyl-involutive:{g}", "s_g^2 = 1 on random states", ok, {'generator': g},
                            backend.name))
    return checks


# ---------------------------------------------------------------------------
# Embeddings and automorphisms


@dataclass(frozen=True)
class Embedding:
    """A generator map between braid presentations"""

    name: str
    source: BraidPresentation
    target: BraidPresentation
    images: Mapping[str, Word]
    anchor: str

    def apply(self, word: Union[Word, str]) -> Word:
        return substitute(word, self.images)

    def then(self, other: "Embedding", name: Optional[str] = None) -> "Embedding":
        """self followed by other"""
        return Embedding(name or f"{other.name}*{self.name}", self.source, other.target,
                         {g: other.apply(w) for g, w in self.images.items()}, f"{other.anchor}; {self.anchor}")

    def power(self, k: int) -> "Embedding":
        out = self
        for _ in range(k - 1):
            out = out.then(self, self.name)
        return out

    def is_identity(self) -> bool:
        return all(free_reduce(w) == gen(g) for g, w in self.images.items())


def rho1(n: int) -> Embedding:
    pres = BraidPresentation(C1, n)
    return Embedding('rho1', pres, pres, {g: gen(g, -1) for g in pres.nodes}, "rho1(T_i) = T_i^-1")


def rho2(n: int) -> Embedding:
    pres = BraidPresentation(C1, n)
    return Embedding('rho2', pres, pres, {T(i): gen(T(n - i)) for i in range(n + 1)}, "rho2(T_i) = T_(n-i)")


def rho3(n: int) -> Embedding:
    pres = BraidPresentation(A1X, n)
    images = {Tp(i): gen(Tp(i % n + 1)) for i in range(1, n + 1)}
    images[XBAR] = gen(XBAR)
    return Embedding('rho3', pres, pres, images, "rho3(T'_i) = T'_(i+1)")


def rho4(n: int) -> Embedding:
    pres = BraidPresentation(A1, n)
    return Embedding('rho4', pres, pres, {Tp(i): gen(Tp(n - i + 1)) for i in range(1, n + 1)},
                     "rho4(T'_i) = T'_(n-i+1)")


def rho5(n: int) -> Embedding:
    pres = BraidPresentation(A1X, n)
    images = {Tp(i): gen(Tp(i), -1) for i in range(1, n + 1)}
    images[XBAR] = gen(XBAR)
    return Embedding('rho5', pres, pres, images, "rho5(T'_i) = T'_i^-1, rho5(Xb) = Xb")


def mu(n: int) -> Embedding:
    images = {T(i): gen(T(i)) for i in range(n - 1)}
    images[T(n - 1)] = Word.product(gen(T(n - 1)), gen(T(n)), gen(T(n - 1)))
    return Embedding('mu', BraidPresentation(C1, n - 1), BraidPresentation(C1, n), images,
                     "mu(T'_i) = T_i, mu(T'_(n-1)) = T_(n-1) T_n T_(n-1)")


def lam(n: int) -> Embedding:
    images = {T(i): gen(T(i + 1)) for i in range(1, n)}
    images[T(0)] = Word.parse("T1 T0 T1")
    return Embedding('lambda', BraidPresentation(C1, n - 1), BraidPresentation(C1, n), images,
                     "lambda(T'_i) = T_(i+1), lambda(T'_0) = T_1 T_0 T_1")


def lam_tilde(n: int) -> Embedding:
    images = {T(i): gen(T(i + 1)) for i in range(1, n)}
    images[T(0)] = Word.parse("T0 T1 T0 T1")
    return Embedding('lambda-tilde', BraidPresentation(C1, n - 1), BraidPresentation(C1, n), images,
                     "lambda~(T'_i) = T_(i+1), lambda~(T'_0) = T_0 T_1 T_0 T_1")


def c_minus_two(n: int) -> Embedding:
    images = {T(i): gen(T(i + 1)) for i in range(1, n - 2)}
    images[T(0)] = Word.parse("T0 T1 T0 T1")
    images[T(n - 2)] = Word.product(*(gen(T(k)) for k in (n - 1, n, n - 1, n)))
    return Embedding('c-minus-two', BraidPresentation(C1, n - 2), BraidPresentation(C1, n), images,
                     "T''_i -> T_(i+1), T''_0 -> T_0 T_1 T_0 T_1, T''_(n-2) -> T_(n-1) T_n T_(n-1) T_n")


def rho_tilde(n: int) -> Embedding:
    images = {T(i): gen(T(i)) for i in range(1, n + 1)}
    images[T(0)] = Word.parse("T-1 T0")
    return Embedding('rho-tilde', BraidPresentation(C1, n), BraidPresentation(B1, n), images,
                     "T_0 -> T_-1 T_0, T_i -> T_i")


def rho_zero(n: int) -> Embedding:
    images = {T(i): gen(T(i)) for i in range(-1, n)}
    images[T(n)] = gen(T(n)) * gen(T(n + 1))
    return Embedding('rho-zero', BraidPresentation(B1, n), BraidPresentation(D1, n), images,
                     "T_i -> T_i, T_n -> T_n T_(n+1)")


def b_minus_two(n: int) -> Embedding:
    """B(C_(n-2)) into the D-type subgroup of B(C_n)/(T_0^2 = T_n^2 = 1), as rho-zero after rho-tilde"""
    return rho_tilde(n - 2).then(rho_zero(n - 2), 'b-minus-two')


def rho_prime(n: int) -> Embedding:
    _, images = c_type_images(A1, n)
    return Embedding('rho-prime', BraidPresentation(A1, n), BraidPresentation(C1, n), images,
                     "T'_i -> T_i, T'_n -> X^-1 T_1 X")


def rho_double_prime(n: int) -> Embedding:
    _, images = c_type_images(A1X, n)
    return Embedding('rho-double-prime', BraidPresentation(A1X, n), BraidPresentation(C1, n), images,
                     "T'_i -> T_i, T'_n -> X^-1 T_1 X, Xb -> X")


def embedding_catalog(n: int) -> Dict[str, Embedding]:
    """Every embedding and automorphism defined at strand parameter n"""
    makers = [(rho1, 1), (rho2, 1), (mu, 2), (lam, 2), (lam_tilde, 2), (c_minus_two, 3), (rho_tilde, 2),
              (rho_zero, 2), (b_minus_two, 4), (rho_prime, 3), (rho_double_prime, 3), (rho3, 3), (rho4, 3),
              (rho5, 3)]
    out: Dict[str, Embedding] = {}
    for maker, lowest in makers:
        if n >= lowest:
            e = maker(n)
            out[e.name] = e
    return out


def check_embedding(embedding: Embedding, backend: Backend) -> List[Check]:
    """Map every source relation into a backend realizing the target type"""
    target = backend.for_type(embedding.target.type, embedding.target.n)
    images: Dict[str, object] = {}
    for g, word in embedding.images.items():
        images[g] = target.evaluate(word)
        images[f"{g}^-1"] = target.evaluate(word.inverse())
    return check_homomorphism(embedding.source.presentation(), images, target.unit, name=f"embed:{embedding.name}",
                              backend=backend.name)


# ---------------------------------------------------------------------------
# Suite


class BraidOperations:
    """Presentations, families, backends and the braid-jm suite"""

    @staticmethod
    def apply(operation: str, **kwargs):
        """
        Dispatch a named braid operation

        Args:
            operation: one of presentation, jm_words, weyl_apply, verify_commuting_family,
                twisted_check, embeddings, suite
            **kwargs: Arguments of the operation

        Returns:
            Result of the operation
        """
        if operation == 'presentation':
            return BraidPresentation(**kwargs)
        elif operation == 'jm_words':
            return jm_words(**kwargs)
        elif operation == 'weyl_apply':
            return weyl_apply(**kwargs)
        elif operation == 'verify_commuting_family':
            return verify_commuting_family(**kwargs)
        elif operation == 'twisted_check':
            return twisted_check(**kwargs)
        elif operation == 'embeddings':
            return embedding_catalog(**kwargs)
        elif operation == 'suite':
            return BraidOperations.braid_jm_suite(**kwargs)
        else:
            raise ValueError(f"Unknown braid operation: {operation}")

    @staticmethod
    def c_type_backends(n: int, d: int = 2, seed: int = 0, magnitude: int = 97, states: int = 10,
                        max_dim: Optional[int] = None, report: Optional[Report] = None) -> Dict[str, Backend]:
        """
        Backends for B(C_n): Weyl with distinct and with equal involutions,
        the cyclotomic quotient T_n -> 1 and the twisted BMW_n layer
        """
        rng = np.random.default_rng(seed)
        a, b = random_rational(rng, magnitude), random_rational(rng, magnitude)
        backends = {
            'weyl': weyl_backend(n, reflection(a), inversion(b), states, seed, magnitude),
            'weyl-flip': weyl_backend(n, reflection(a), reflection(a), states, seed, magnitude, 'weyl-flip'),
        }
        affine = AffineBmwOperations.build_affine(n, d, seed=seed, magnitude=magnitude, max_dim=max_dim)
        backends['quotient'] = affine_quotient_backend(affine)
        point = sample_generic(('q', 'nu'), BMW_GUARDS, seed, magnitude)
        backends['twisted'] = twisted_backend(TwistedLayer.bmw(n, point, max_dim), n, random_rational(rng, magnitude))
        if report is not None:
            report.add_point(affine.point)
            report.add_point(point)
        return backends

    @staticmethod
    def braid_jm_suite(n: int = 3, d: int = 2, seed: int = 0, magnitude: int = 97, states: int = 10,
                       max_dim: Optional[int] = None) -> Report:
        """
        Verify the braid presentations, commuting families, flip identities
        and embeddings of every type through representations and quotients

        Args:
            n: Strand parameter of the C-type checks
            d: Degree of the cyclotomic quotient
            seed: Seed for points, involution parameters and states
            magnitude: Bound on sampled numerators and denominators
            states: Random states of the Weyl backends
            max_dim: Closure bound

        Returns:
            Report with one record per relation, pair and identity
        """
        report = Report('braid-jm', config={'n': n, 'd': d, 'seed': seed, 'magnitude': magnitude})
        report.notes.append(LIMITATION_NOTE)
        backends = BraidOperations.c_type_backends(n, d, seed, magnitude, states, max_dim, report)
        flip_backends = [b for b in backends.values() if b.has_flip]
        pres = BraidPresentation(C1, n)

        for backend in backends.values():
            report.extend(check_homomorphism(pres.presentation(), backend.images, backend.unit,
                                             name=f"presentation:{C1}", backend=backend.name))
        for backend in flip_backends:
            report.extend(check_homomorphism(pres.presentation(with_flip=True), backend.images, backend.unit,
                                             name=f"presentation:{C1}^", backend=backend.name))

        for family in FAMILIES[C1]:
            if family == 'Yd' and n < 2:
                continue
            targets = flip_backends if family in FLIP_FAMILIES else list(backends.values())
            report.merge(verify_commuting_family(jm_words(C1, family, n), targets, family))
        for backend in backends.values():
            report.extend(verify_identities(x_identities(n), backend))
        for backend in flip_backends:
            report.merge(twisted_check(u_identities(n), backend))
        for i in range(1, n + 1):
            flipped = substitute(a_word(i), rho2(n).images)
            report.add(check(f"word:b-from-a:{i}", "b_(n-i+1) = rho2(a_i)", flipped == b_word(n - i + 1, n),
                             {'rho2(a_i)': str(flipped)}))

        weyl = backends['weyl']
        sigma, sigma_bar = weyl.images[T(0)].maps[0], weyl.images[T(n)].maps[n - 1]
        report.extend(weyl_action_checks(n, weyl, sigma, sigma_bar))

        BraidOperations._automorphism_checks(n, backends, report)
        BraidOperations._embedding_checks(n, backends, report)
        if n >= MIN_RANK[A1X]:
            BraidOperations._periodic_checks(n, backends, report)
        BraidOperations._orthogonal_checks(seed, magnitude, states, max_dim, report)
        logger.info("braid-jm: %d checks, %d failures", len(report.checks), len(report.failures))
        return report

    @staticmethod
    def _automorphism_checks(n: int, backends: Mapping[str, Backend], report: Report) -> None:
        for e in (rho1(n), rho2(n)):
            report.add(check(f"involution:{e.name}", f"{e.name} o {e.name} = id", e.power(2).is_identity(),
                             {'images': {g: str(w) for g, w in e.power(2).images.items()}}))
            for name, backend in backends.items():
                # T_n -> 1 breaks the flip symmetry of the cyclotomic quotient
                if e.name == 'rho2' and name == 'quotient':
                    continue
                report.extend(check_embedding(e, backend))

    @staticmethod
    def _embedding_checks(n: int, backends: Mapping[str, Backend], report: Report) -> None:
        if n < 2:
            return
        makers = [mu, lam, lam_tilde] + ([c_minus_two] if n >= 3 else [])
        for maker in makers:
            e = maker(n)
            for backend in backends.values():
                report.extend(check_embedding(e, backend))
        m = mu(n)
        ident = [Identity(f"mu-of-I:{i}", m.apply(i_word(i, n - 1)), i_word(i, n), "mu(I'_i) = I_i")
                 for i in range(1, n)]
        la = lam(n)
        ident += [Identity(f"lambda-commutes-T0:{g}", la.images[g] * gen(T(0)), gen(T(0)) * la.images[g],
                           "lambda images commute with T_0") for g in la.images]
        for backend in backends.values():
            report.extend(verify_identities(ident, backend))

    @staticmethod
    def _periodic_checks(n: int, backends: Mapping[str, Backend], report: Report) -> None:
        periodic = {}
        for name, backend in backends.items():
            for e in (rho_prime(n), rho_double_prime(n)):
                report.extend(check_embedding(e, backend))
            periodic[name] = backend.for_type(A1X, n)
        for family in FAMILIES[A1X]:
            report.merge(verify_commuting_family(jm_words(A1X, family, n), list(periodic.values()), family))
        for backend in periodic.values():
            report.extend(verify_identities(periodic_identities(n), backend))
        for e in (rho3(n), rho4(n), rho5(n)):
            order = n if e.name == 'rho3' else 2
            report.add(check(f"involution:{e.name}", f"{e.name}^{order} = id", e.power(order).is_identity(),
                             {'order': order}))
            for name, backend in backends.items():
                target = backend.for_type(e.target.type, n)
                images: Dict[str, object] = {}
                for g, word in e.images.items():
                    images[g] = target.evaluate(word)
                    images[f"{g}^-1"] = target.evaluate(word.inverse())
                report.extend(check_homomorphism(e.source.presentation(), images, target.unit,
                                                 name=f"embed:{e.name}", backend=backend.name))

    @staticmethod
    def _orthogonal_checks(seed: int, magnitude: int, states: int, max_dim: Optional[int], report: Report) -> None:
        """B-type and D-type groups realized in B(C_m) modulo T_0^2 = T_m^2 = 1"""
        rng = np.random.default_rng(seed + 1)
        a, b = random_rational(rng, magnitude), random_rational(rng, magnitude)
        point = sample_generic(('q', 'nu'), BMW_GUARDS, seed, magnitude)
        report.add_point(point)
        nb, nd = MIN_RANK[B1], MIN_RANK[D1]
        by_rank: Dict[int, List[Backend]] = {}
        for m in (c_type_rank(B1, nb), c_type_rank(D1, nd)):
            by_rank[m] = [weyl_backend(m, reflection(a), inversion(b), states, seed, magnitude),
                          hecke_b_backend(m, point, max_dim)]

        for type_, k, family_maker in ((B1, nb, rho_tilde), (D1, nd, rho_zero)):
            pres = BraidPresentation(type_, k)
            for backend in by_rank[c_type_rank(type_, k)]:
                target = backend.for_type(type_, k)
                report.extend(check_homomorphism(pres.presentation(), target.images, target.unit,
                                                 name=f"presentation:{type_}", backend=backend.name))
                report.extend(check_embedding(family_maker(k), backend))
                for family in FAMILIES[type_]:
                    report.merge(verify_commuting_family(jm_words(type_, family, k), [target], family))
        for backend in by_rank[c_type_rank(D1, nd)]:
            report.extend(check_embedding(b_minus_two(nd + 2), backend))

        tilde = rho_tilde(nb)
        for plain, lifted in zip(jm_words(C1, 'J', nb), jm_words(B1, 'Jtilde', nb)):
            report.add(check("word:jtilde", "Jtilde_i = rho-tilde(J_i)", tilde.apply(plain) == free_reduce(lifted),
                             {'image': str(tilde.apply(plain)), 'family': str(lifted)}))

        mb = c_type_rank(B1, nb)
        report.merge(verify_commuting_family(jm_words(C1, 'JJ', mb), by_rank[mb], 'JJ'))
        for m in sorted(by_rank):
            flip = weyl_backend(m, reflection(a), reflection(a), states, seed, magnitude, 'weyl-flip')
            report.extend(pi_checks(m, flip))
            report.merge(verify_commuting_family(jm_words(C1, 'Yd', m), [flip], 'Yd'))
