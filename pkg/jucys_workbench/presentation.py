"""
Finitely presented associative algebras
Words, linear combinations, presentations, closure to a finite basis by linear
vector enumeration, algebra elements and a homomorphism checker
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DimensionOverflow,
    InadmissiblePoint,
    NonAssociative,
    OwnerMismatch,
    SingularElement,
    UnknownGenerator,
    WorkbenchError,
)
from .linalg import EchelonBasis, NoSolution, SparseVec, vec_axpy, vec_clean, vec_scale
from .parser import Letter, WordParser
from .report import Check, check
from .scalar import ParameterPoint, to_rational

logger = logging.getLogger(__name__)

ONE = Fraction(1)
DEFAULT_MAX_DIM = 5000
LIVE_FACTOR = 25


class Word:
    """Immutable sequence of signed generator letters; the empty word is the unit"""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters: Tuple[Letter, ...] = tuple((str(g), int(s)) for g, s in letters)

    @classmethod
    def parse(cls, text: Union[str, "Word"]) -> "Word":
        if isinstance(text, Word):
            return text
        return cls(WordParser.parse(text))

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        sign = 1 if power > 0 else -1
        return cls([(name, sign)] * abs(power))

    @classmethod
    def product(cls, *parts: "Word") -> "Word":
        out: List[Letter] = []
        for part in parts:
            out.extend(part.letters)
        return cls(out)

    def inverse(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self.letters))

    def reversed(self) -> "Word":
        return Word(reversed(self.letters))

    def map_letters(self, fn: Callable[[Letter], "Word"]) -> "Word":
        return Word.product(*(fn(letter) for letter in self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        return WordParser.format(self.letters)

    def __repr__(self) -> str:
        return f"Word('{self}')"


class LinComb:
    """Formal linear combination of words with rational coefficients"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, Fraction]] = None):
        self.terms: Dict[Word, Fraction] = {w: to_rational(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, word: Union[Word, str], coeff: Fraction = ONE) -> "LinComb":
        return cls({Word.parse(word): coeff})

    @classmethod
    def scalar(cls, coeff: Fraction) -> "LinComb":
        return cls({Word(): coeff})

    @classmethod
    def coerce(cls, value) -> "LinComb":
        if isinstance(value, LinComb):
            return value
        if isinstance(value, (Word, str)):
            return cls.of(value)
        return cls.scalar(to_rational(value))

    def items(self):
        return self.terms.items()

    def __add__(self, other) -> "LinComb":
        out = dict(self.terms)
        for w, c in LinComb.coerce(other).terms.items():
            out[w] = out.get(w, 0) + c
        return LinComb(out)

    __radd__ = __add__

    def __neg__(self) -> "LinComb":
        return LinComb({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "LinComb":
        return self + (-LinComb.coerce(other))

    def __rsub__(self, other) -> "LinComb":
        return LinComb.coerce(other) - self

    def __mul__(self, other) -> "LinComb":
        if isinstance(other, (int, Fraction)):
            return LinComb({w: c * other for w, c in self.terms.items()})
        other = LinComb.coerce(other)
        out: Dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0) + c1 * c2
        return LinComb(out)

    def __rmul__(self, other) -> "LinComb":
        if isinstance(other, (int, Fraction)):
            return self * other
        return LinComb.coerce(other) * self

    def reversed(self) -> "LinComb":
        return LinComb({w.reversed(): c for w, c in self.terms.items()})

    def single_word(self) -> Optional[Word]:
        """The word when this is exactly one word with coefficient one"""
        if len(self.terms) == 1:
            (w, c), = self.terms.items()
            if c == 1:
                return w
        return None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{w}]" for w, c in self.terms.items())

    __repr__ = __str__


@dataclass(frozen=True)
class Relation:
    """lhs = rhs in the presented algebra or group"""

    label: str
    lhs: LinComb
    rhs: LinComb
    anchor: str = ""

    @classmethod
    def words(cls, label: str, lhs: Union[Word, str], rhs: Union[Word, str], anchor: str = "") -> "Relation":
        return cls(label, LinComb.of(lhs), LinComb.of(rhs), anchor)

    @property
    def difference(self) -> LinComb:
        return self.lhs - self.rhs

    @property
    def is_word_relation(self) -> bool:
        return self.lhs.single_word() is not None and self.rhs.single_word() is not None

    def reversed(self) -> "Relation":
        return Relation(self.label + "~rev", self.lhs.reversed(), self.rhs.reversed(), self.anchor)


@dataclass(frozen=True)
class Presentation:
    """
    Generators, inverse expressions and relations of an algebra at one point

    generators lists the letters the closure tables are built for. A
    generator g is invertible when either (g, -1) is itself a letter or
    inverse_exprs[g] gives g^-1 as a combination of generator words.
    """

    name: str
    generators: Tuple[Letter, ...]
    relations: Tuple[Relation, ...]
    inverse_exprs: Mapping[str, LinComb] = field(default_factory=dict)
    module_relations: Tuple[LinComb, ...] = ()
    point: Optional[ParameterPoint] = None
    expected_dim: Optional[int] = None

    @property
    def generator_names(self) -> List[str]:
        seen: List[str] = []
        for g, _ in self.generators:
            if g not in seen:
                seen.append(g)
        return seen

    @property
    def invertible(self) -> frozenset:
        names = {g for g, s in self.generators if s < 0}
        return frozenset(names | set(self.inverse_exprs))

    def letters(self) -> List[Letter]:
        """Generators plus the inverse letters available through expressions"""
        out = list(self.generators)
        for g in self.generator_names:
            if g in self.inverse_exprs and (g, -1) not in out:
                out.append((g, -1))
        return out

    def with_relations(self, extra: Iterable[Relation], name: Optional[str] = None,
                       expected_dim: Optional[int] = None) -> "Presentation":
        return Presentation(name or self.name, self.generators, self.relations + tuple(extra),
                            self.inverse_exprs, self.module_relations, self.point, expected_dim)

    def with_module_relations(self, extra: Iterable[LinComb], name: Optional[str] = None) -> "Presentation":
        return Presentation(name or self.name, self.generators, self.relations, self.inverse_exprs,
                            self.module_relations + tuple(extra), self.point, None)


class VectorEnumerator:
    """
    Linear analogue of coset enumeration for the right module v0*A

    Vectors are numbered as they are defined. A coincidence kills the
    highest-numbered vector of a linear relation and records it as a
    combination of lower vectors; its table row is re-imposed as new
    relations or deductions.
    """

    def __init__(self, presentation: Presentation, max_dim: int = DEFAULT_MAX_DIM,
                 max_live: Optional[int] = None):
        self.presentation = presentation
        self.max_dim = max_dim
        self.max_live = max_live or max(256, LIVE_FACTOR * max_dim)
        self.symbols: Tuple[Letter, ...] = tuple(presentation.generators)
        self._symbol_set = set(self.symbols)
        self.table: List[Optional[Dict[Letter, Optional[SparseVec]]]] = []
        self.defs: List[Optional[Tuple[int, Letter]]] = []
        self.repl: Dict[int, SparseVec] = {}
        self.live = 0
        self.pending: List[SparseVec] = []

    def _new_vector(self, parent: Optional[int], letter: Optional[Letter]) -> int:
        j = len(self.table)
        self.table.append({g: None for g in self.symbols})
        self.defs.append(None if parent is None else (parent, letter))
        self.live += 1
        if self.live > self.max_live:
            raise DimensionOverflow(
                f"{self.presentation.name}: more than {self.max_live} live vectors during closure",
                reached=self.live,
            )
        if parent is not None:
            self.table[parent][letter] = {j: ONE}
        return j

    def normalize(self, v: SparseVec) -> SparseVec:
        if not any(k in self.repl for k in v):
            return v
        out: SparseVec = {}
        for k, c in v.items():
            if k in self.repl:
                resolved = self.normalize(self.repl[k])
                self.repl[k] = resolved
                vec_axpy(out, c, resolved)
            else:
                vec_axpy(out, c, {k: ONE})
        return out

    def act(self, v: SparseVec, letter: Letter, define: bool = True) -> Optional[SparseVec]:
        if letter in self._symbol_set:
            v = self.normalize(v)
            out: SparseVec = {}
            for k, c in v.items():
                entry = self.table[k][letter]
                if entry is None:
                    if not define:
                        return None
                    self._new_vector(k, letter)
                    entry = self.table[k][letter]
                vec_axpy(out, c, entry)
            return self.normalize(out)
        name, sign = letter
        if sign < 0 and name in self.presentation.inverse_exprs:
            return self.act_lincomb(v, self.presentation.inverse_exprs[name], define)
        raise UnknownGenerator(f"Letter {WordParser.format([letter])} is not a generator of "
                               f"{self.presentation.name}")

    def act_word(self, v: SparseVec, word: Word, define: bool = True) -> Optional[SparseVec]:
        for letter in word:
            if not v:
                return {}
            v = self.act(v, letter, define)
            if v is None:
                return None
        return self.normalize(v)

    def act_lincomb(self, v: SparseVec, lc: LinComb, define: bool = True) -> Optional[SparseVec]:
        out: SparseVec = {}
        for word, c in lc.items():
            image = self.act_word(v, word, define)
            if image is None:
                return None
            vec_axpy(out, c, image)
        return self.normalize(out)

    def _impose(self, relation_value: SparseVec) -> None:
        self.pending.append(relation_value)
        while self.pending:
            e = self.normalize(self.pending.pop())
            if not e:
                continue
            m = max(e)
            lead = e[m]
            expr = {k: -c / lead for k, c in e.items() if k != m}
            self.repl[m] = expr
            self.live -= 1
            row = self.table[m]
            self.table[m] = None
            for letter, image in row.items():
                if image is not None:
                    self._transfer(expr, letter, image)

    def _transfer(self, expr: SparseVec, letter: Letter, image: SparseVec) -> None:
        """Impose (sum expr[k]*k)*letter = image on the surviving vectors"""
        expr = self.normalize(expr)
        known: SparseVec = {}
        undefined: List[int] = []
        for k, c in expr.items():
            entry = self.table[k][letter]
            if entry is None:
                undefined.append(k)
            else:
                vec_axpy(known, c, entry)
        if not undefined:
            diff = dict(known)
            vec_axpy(diff, -ONE, image)
            self.pending.append(diff)
            return
        for k in undefined[:-1]:
            j = self._new_vector(k, letter)
            vec_axpy(known, expr[k], {j: ONE})
        last = undefined[-1]
        value = dict(image)
        vec_axpy(value, -ONE, known)
        self.table[last][letter] = self.normalize(vec_scale(value, 1 / expr[last]))

    def run(self) -> None:
        pres = self.presentation
        self._new_vector(None, None)
        for rel in pres.module_relations:
            self._impose(self.act_lincomb({0: ONE}, rel))
        diffs = [rel.difference for rel in pres.relations]
        i = 0
        while i < len(self.table):
            if self.table[i] is not None:
                for diff in diffs:
                    if self.table[i] is None:
                        break
                    self._impose(self.act_lincomb({i: ONE}, diff))
                row = self.table[i]
                if row is not None:
                    for letter in self.symbols:
                        if self.table[i] is not None and self.table[i][letter] is None:
                            self._new_vector(i, letter)
            if i and i % 500 == 0:
                logger.debug("%s: processed %d vectors, %d live", pres.name, i, self.live)
            i += 1

    def basis_word(self, j: int) -> Word:
        letters: List[Letter] = []
        while self.defs[j] is not None:
            parent, letter = self.defs[j]
            letters.append(letter)
            j = parent
        return Word(reversed(letters))


def close_algebra(presentation: Presentation, point: Optional[ParameterPoint] = None,
                  max_dim: Optional[int] = None, audit: int = 64, seed: int = 0) -> "ClosedAlgebra":
    """
    Close a presentation to a finite-dimensional algebra

    Args:
        presentation: Generators and relations with concrete rational coefficients
        point: Parameter point the coefficients were evaluated at
        max_dim: Largest accepted dimension
        audit: Number of random basis triples checked for associativity
        seed: Seed for the audit triples

    Returns:
        ClosedAlgebra with basis words and right multiplication tables
    """
    if max_dim is None:
        expected = presentation.expected_dim
        max_dim = 4 * expected if expected else DEFAULT_MAX_DIM
    enum = VectorEnumerator(presentation, max_dim)
    enum.run()

    if enum.table[0] is None:
        raise InadmissiblePoint(f"{presentation.name}: relations collapse the algebra to zero",
                                constraint="unit = 0")
    live = [i for i, row in enumerate(enum.table) if row is not None]
    if len(live) > max_dim:
        raise DimensionOverflow(f"{presentation.name}: dimension {len(live)} exceeds {max_dim}",
                                reached=len(live))
    position = {old: new for new, old in enumerate(live)}

    def renumber(v: SparseVec) -> SparseVec:
        return {position[k]: c for k, c in enum.normalize(v).items()}

    basis = [enum.basis_word(i) for i in live]
    right = {
        letter: [renumber(enum.table[i][letter]) for i in live]
        for letter in enum.symbols
    }
    algebra = ClosedAlgebra(presentation, point or presentation.point, basis, right)
    algebra._complete_inverse_tables()
    logger.info("Closed %s: dimension %d (%d vectors defined)", presentation.name, algebra.dim, len(enum.table))
    if audit:
        algebra.audit_associativity(audit, seed)
    return algebra


class ClosedAlgebra:
    """A finite-dimensional algebra given by basis words and right multiplication tables"""

    def __init__(self, presentation: Optional[Presentation], point: Optional[ParameterPoint],
                 basis: Sequence[Word], right: Mapping[Letter, Sequence[SparseVec]], name: Optional[str] = None):
        self.presentation = presentation
        self.point = point
        self.name = name or (presentation.name if presentation else "algebra")
        self.basis: List[Word] = list(basis)
        self.right: Dict[Letter, List[SparseVec]] = {g: list(rows) for g, rows in right.items()}
        self._index = {w: i for i, w in enumerate(self.basis)}
        self._left: Dict[Letter, List[SparseVec]] = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"ClosedAlgebra({self.name}, dim={self.dim})"

    def _complete_inverse_tables(self) -> None:
        if self.presentation is None:
            return
        for name, expr in self.presentation.inverse_exprs.items():
            letter = (name, -1)
            if letter not in self.right:
                self.right[letter] = [self.act_lincomb({i: ONE}, expr) for i in range(self.dim)]

    # -- vector level ---------------------------------------------------------

    def act(self, v: SparseVec, letter: Letter) -> SparseVec:
        rows = self.right.get(letter)
        if rows is None:
            raise UnknownGenerator(f"Letter {WordParser.format([letter])} is not a generator of {self.name}")
        out: SparseVec = {}
        for k, c in v.items():
            vec_axpy(out, c, rows[k])
        return out

    def act_word(self, v: SparseVec, word: Word) -> SparseVec:
        for letter in word:
            if not v:
                break
            v = self.act(v, letter)
        return v

    def act_lincomb(self, v: SparseVec, lc: LinComb) -> SparseVec:
        out: SparseVec = {}
        for word, c in lc.items():
            vec_axpy(out, c, self.act_word(v, word))
        return out

    def multiply_vecs(self, a: SparseVec, b: SparseVec) -> SparseVec:
        """a*b = sum_j b_j (a*w_j), sharing prefixes of the basis words"""
        cache: Dict[Tuple[Letter, ...], SparseVec] = {(): a}

        def image(letters: Tuple[Letter, ...]) -> SparseVec:
            if letters in cache:
                return cache[letters]
            value = self.act(image(letters[:-1]), letters[-1])
            cache[letters] = value
            return value

        out: SparseVec = {}
        for j, c in b.items():
            vec_axpy(out, c, image(self.basis[j].letters))
        return out

    # -- element level --------------------------------------------------------

    def element(self, coeffs: Mapping[int, Fraction]) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, {0: ONE})

    def scalar(self, c) -> "AlgebraElement":
        return AlgebraElement(self, {0: to_rational(c)})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def basis_element(self, j: int) -> "AlgebraElement":
        return AlgebraElement(self, {j: ONE})

    def basis_elements(self) -> List["AlgebraElement"]:
        return [self.basis_element(j) for j in range(self.dim)]

    def word(self, word: Union[Word, str]) -> "AlgebraElement":
        return normal_form(self, Word.parse(word))

    def __call__(self, word: Union[Word, str, LinComb]) -> "AlgebraElement":
        if isinstance(word, LinComb):
            return AlgebraElement(self, self.act_lincomb({0: ONE}, word))
        return self.word(word)

    def index_of(self, word: Union[Word, str]) -> int:
        return self._index[Word.parse(word)]

    def left_table(self, letter: Letter) -> List[SparseVec]:
        if letter not in self._left:
            g = self.act({0: ONE}, letter)
            self._left[letter] = [self.multiply_vecs(g, {j: ONE}) for j in range(self.dim)]
        return self._left[letter]

    def audit_associativity(self, samples: int = 64, seed: int = 0) -> None:
        """Check (ab)c = a(bc) on random basis triples"""
        if self.dim == 0:
            return
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            a, b, c = (int(x) for x in rng.integers(0, self.dim, size=3))
            left = self.multiply_vecs(self.multiply_vecs({a: ONE}, {b: ONE}), {c: ONE})
            right = self.multiply_vecs({a: ONE}, self.multiply_vecs({b: ONE}, {c: ONE}))
            if left != right:
                raise NonAssociative(
                    f"{self.name}: (b{a} b{b}) b{c} != b{a} (b{b} b{c}) "
                    f"for basis words [{self.basis[a]}], [{self.basis[b]}], [{self.basis[c]}]"
                )

    # -- export ---------------------------------------------------------------

    def export(self) -> Dict[str, object]:
        tables = []
        for letter in sorted(self.right, key=lambda g: (g[0], -g[1])):
            gen = WordParser.format([letter])
            for row, vec in enumerate(self.right[letter]):
                for col in sorted(vec):
                    tables.append([gen, row, col, str(vec[col])])
        return {
            'presentation': self.name,
            'point': self.point.to_json() if self.point else None,
            'basis': [str(w) for w in self.basis],
            'tables': tables,
        }

    @classmethod
    def from_export(cls, data: Mapping[str, object]) -> "ClosedAlgebra":
        basis = [Word.parse(w) for w in data['basis']]
        right: Dict[Letter, List[SparseVec]] = {}
        for gen, row, col, value in data['tables']:
            (letter,) = WordParser.parse(gen)
            rows = right.setdefault(letter, [{} for _ in basis])
            rows[row][col] = Fraction(value)
        point = None
        if data.get('point'):
            raw = data['point']
            point = ParameterPoint(tuple(sorted((k, Fraction(v)) for k, v in raw['assignment'].items())),
                                   raw['seed'])
        return cls(None, point, basis, right, name=str(data['presentation']))

    def same_tables(self, other: "ClosedAlgebra") -> bool:
        return self.basis == other.basis and self.right == other.right


class AlgebraElement:
    """Sparse coefficient vector over the basis of one ClosedAlgebra"""

    __slots__ = ("owner", "coeffs")

    def __init__(self, owner: ClosedAlgebra, coeffs: Mapping[int, Fraction]):
        self.owner = owner
        self.coeffs: SparseVec = vec_clean(dict(coeffs))

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"Expected AlgebraElement, got {type(other).__name__}")
        if other.owner is not self.owner:
            raise OwnerMismatch(f"Elements of {self.owner.name} and {other.owner.name} cannot be combined")

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        return self.owner.scalar(other)

    def __add__(self, other) -> "AlgebraElement":
        o = self._lift(other)
        out = dict(self.coeffs)
        vec_axpy(out, ONE, o.coeffs)
        return AlgebraElement(self.owner, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.owner, vec_scale(self.coeffs, -ONE))

    def __sub__(self, other) -> "AlgebraElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "AlgebraElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, Fraction)):
            return AlgebraElement(self.owner, vec_scale(self.coeffs, to_rational(other)))
        self._check(other)
        return AlgebraElement(self.owner, self.owner.multiply_vecs(self.coeffs, other.coeffs))

    def __rmul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "AlgebraElement":
        return self * (1 / to_rational(other))

    def __pow__(self, k: int) -> "AlgebraElement":
        base = self if k >= 0 else self.inverse()
        out = self.owner.unit()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.owner.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return other.owner is self.owner and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_scalar(self) -> bool:
        return set(self.coeffs) <= {0}

    def scalar_value(self) -> Fraction:
        if not self.is_scalar():
            raise ValueError("Element is not a multiple of the unit")
        return self.coeffs.get(0, Fraction(0))

    def coefficient(self, j: int) -> Fraction:
        return self.coeffs.get(j, Fraction(0))

    def unit_like(self) -> "AlgebraElement":
        return self.owner.unit()

    def commutator(self, other: "AlgebraElement") -> "AlgebraElement":
        return self * other - other * self

    def act(self, letter: Letter) -> "AlgebraElement":
        """Right multiplication by one generator letter"""
        return AlgebraElement(self.owner, self.owner.act(self.coeffs, letter))

    def left_columns(self) -> List[SparseVec]:
        """Columns self*b_j of the left multiplication matrix"""
        return [self.owner.multiply_vecs(self.coeffs, {j: ONE}) for j in range(self.owner.dim)]

    def rank(self) -> int:
        basis = EchelonBasis()
        for col in self.left_columns():
            basis.add(col)
        return basis.rank

    def inverse(self) -> "AlgebraElement":
        """Two-sided inverse by solving self*x = 1"""
        basis = EchelonBasis()
        for j, col in enumerate(self.left_columns()):
            basis.add(col, j)
        try:
            combo = basis.express({0: ONE})
        except NoSolution:
            raise SingularElement(f"Element of {self.owner.name} is not invertible "
                                  f"(rank {basis.rank} < {self.owner.dim})") from None
        inv = AlgebraElement(self.owner, combo)
        if not (inv * self - 1).is_zero():
            raise SingularElement(f"Element of {self.owner.name} has only a one-sided inverse")
        return inv

    def divides_by(self, other: "AlgebraElement") -> Optional[Fraction]:
        """lambda with self = lambda*other, or None"""
        self._check(other)
        if other.is_zero():
            return Fraction(0) if self.is_zero() else None
        j = next(iter(other.coeffs))
        ratio = self.coeffs.get(j, Fraction(0)) / other.coeffs[j]
        return ratio if (self - other * ratio).is_zero() else None

    def to_json(self) -> Dict[str, str]:
        return {str(self.owner.basis[j]): str(c) for j, c in sorted(self.coeffs.items())}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*[{self.owner.basis[j]}]" for j, c in sorted(self.coeffs.items()))


def normal_form(algebra: ClosedAlgebra, word: Union[Word, str]) -> AlgebraElement:
    """Expansion of a word over the basis by iterated table application"""
    return AlgebraElement(algebra, algebra.act_word({0: ONE}, Word.parse(word)))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def commutator(a, b):
    """ab - ba for algebra elements; duck-typed for other operator classes"""
    return a.commutator(b)


# ---------------------------------------------------------------------------
# Homomorphism checks


def evaluate_word(word: Word, images: Mapping[str, object], unit, cache: Optional[Dict[str, object]] = None):
    """Product of generator images along a word; inverses computed on demand"""
    cache = {} if cache is None else cache
    out = unit
    for name, sign in word:
        if name not in images:
            raise UnknownGenerator(f"No image given for generator '{name}'")
        if sign > 0:
            factor = images[name]
        else:
            key = f"{name}^-1"
            if key not in cache:
                cache[key] = images[key] if key in images else images[name].inverse()
            factor = cache[key]
        out = out * factor
    return out


def evaluate_lincomb(lc: LinComb, images: Mapping[str, object], unit, cache=None):
    total = None
    for word, c in lc.items():
        term = evaluate_word(word, images, unit, cache) * c
        total = term if total is None else total + term
    return total if total is not None else unit * 0


def relation_holds(relation: Relation, images: Mapping[str, object], unit, anti: bool = False,
                   cache: Optional[Dict[str, object]] = None) -> bool:
    lhs, rhs = (relation.lhs.reversed(), relation.rhs.reversed()) if anti else (relation.lhs, relation.rhs)
    if relation.is_word_relation:
        return evaluate_word(lhs.single_word(), images, unit, cache) == \
            evaluate_word(rhs.single_word(), images, unit, cache)
    return (evaluate_lincomb(lhs, images, unit, cache) - evaluate_lincomb(rhs, images, unit, cache)).is_zero()


def check_homomorphism(source: Presentation, images: Mapping[str, object], unit=None,
                       anti: bool = False, name: str = "hom", backend: Optional[str] = None) -> List[Check]:
    """
    Check that generator images satisfy every defining relation

    Args:
        source: Presentation whose relations are mapped
        images: generator name -> element of the target (AlgebraElement or any
            object with *, ==, inverse(), unit_like())
        unit: Unit of the target; defaults to the unit of the first image
        anti: Reverse word order (anti-homomorphism)
        name: Prefix for check ids

    Returns:
        One Check per relation plus invertibility checks
    """
    if unit is None:
        unit = next(iter(images.values())).unit_like()
    checks: List[Check] = []
    cache: Dict[str, object] = {}
    missing = [g for g in source.generator_names if g not in images]
    if missing:
        checks.append(check(f"{name}:images", "every generator has an image", False,
                            {'missing': missing}, backend))
        return checks
    singular = False
    for g in sorted(source.invertible):
        key = f"{g}^-1"
        try:
            cache[key] = images[key] if key in images else images[g].inverse()
            ok = True
        except (SingularElement, ZeroDivisionError):
            ok = False
            singular = True
        checks.append(check(f"{name}:invertible:{g}", f"image of {g} is invertible", ok,
                            {'generator': g}, backend))
    if singular:
        return checks
    for rel in source.relations:
        try:
            ok = relation_holds(rel, images, unit, anti, cache)
            witness = {'relation': rel.label}
        except WorkbenchError as exc:
            ok, witness = False, {'relation': rel.label, 'error': str(exc)}
        checks.append(check(f"{name}:{rel.label}", rel.anchor or rel.label, ok, witness, backend))
    return checks
