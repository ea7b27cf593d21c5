"""
Markov trace on the cyclotomic affine BMW tower
Level algebras A_0 in A_1 in ... in A_top, the right modules used to evaluate
kappa_m X kappa_m, the trace property suite and the crossing identities
"""

import functools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InadmissiblePoint, NotProportional, OwnerMismatch, PoleError
from ..linalg import EchelonBasis, NoSolution, SparseVec, vec_axpy
from ..presentation import (
    AlgebraElement,
    ClosedAlgebra,
    Presentation,
    Word,
    check_homomorphism,
    close_algebra,
)
from ..report import INFO, Check, Report, check
from ..scalar import DEFAULT_MAGNITUDE, ParameterPoint, eval_formula
from .affine_bmw import (
    ADMISSIBILITY,
    Admissibility,
    AffineBmwInstance,
    admissibility,
    admissible_point,
    affine_presentation,
)
from .bmw import K, lc, random_spectral

logger = logging.getLogger(__name__)

ONE = Fraction(1)


def level_presentation(m: int, d: int, point: ParameterPoint, record: Optional[Admissibility] = None) -> Presentation:
    """A_m; level 0 is the ground field"""
    if m == 0:
        return Presentation(f"aBMW_0(d={d})", (), (), {}, (), point, 1)
    return affine_presentation(m, d, point, record)


def module_presentation(m: int, d: int, point: ParameterPoint, record: Admissibility) -> Presentation:
    """v0 A_{m+1} with v0 (K_m - mu) = 0, a copy of kappa_m A_{m+1}"""
    base = affine_presentation(m + 1, d, point, record)
    return base.with_module_relations([lc(K(m)) - record.mu], name=f"kappa_{m} aBMW_{m + 1}(d={d})")


def word_images(target: ClosedAlgebra, words: Sequence[Word]) -> List[SparseVec]:
    """v0 * word in the target for every word, sharing common prefixes"""
    cache: Dict[Tuple, SparseVec] = {(): {0: ONE}}

    def image(letters: Tuple) -> SparseVec:
        if letters not in cache:
            cache[letters] = target.act(image(letters[:-1]), letters[-1])
        return cache[letters]

    return [image(w.letters) for w in words]


class TowerContext:
    """
    Compatible levels A_0 in A_1 in ... in A_top at one admissible point

    modules[m] is the right A_{m+1}-module generated by v0 with v0 K_m = mu v0.
    It is isomorphic to kappa_m A_{m+1}, so kappa_m X kappa_m for X in A_m is
    read off from v0 X K_m.
    """

    def __init__(self, d: int, point: ParameterPoint, record: Admissibility,
                 levels: Dict[int, ClosedAlgebra], modules: Dict[int, ClosedAlgebra]):
        self.d = d
        self.point = point
        self.admissibility = record
        self.levels = levels
        self.modules = modules
        self._instances: Dict[int, AffineBmwInstance] = {}
        self._inclusions: Dict[int, List[SparseVec]] = {}
        self._restrictions: Dict[int, EchelonBasis] = {}
        self._module_images: Dict[int, List[SparseVec]] = {}
        self._trace_columns: Dict[int, EchelonBasis] = {}
        self.derived: Dict[Tuple, object] = {}

    @classmethod
    def build(cls, d: int, top: int, point: Optional[ParameterPoint] = None, seed: int = 0,
              magnitude: int = DEFAULT_MAGNITUDE, max_dim: Optional[int] = None) -> "TowerContext":
        """
        Close A_0..A_top and the trace modules for levels 1..top

        Raises:
            InadmissiblePoint: if the point violates sum_j c_j = mu
        """
        if top < 1:
            raise ValueError(f"A trace tower needs at least one level above 0, got top={top}")
        if point is None:
            point = admissible_point(d, seed, magnitude)
        record = admissibility(point, d)
        if not record.admissible:
            raise InadmissiblePoint(f"Point {point} violates {ADMISSIBILITY} (residual {record.residual})",
                                    constraint=ADMISSIBILITY)
        levels = {
            m: close_algebra(level_presentation(m, d, point, record), point, max_dim, seed=point.seed)
            for m in range(top + 1)
        }
        modules: Dict[int, ClosedAlgebra] = {}
        for m in range(1, top + 1):
            modules[m] = close_algebra(module_presentation(m, d, point, record), point, max_dim, audit=0)
            if modules[m].dim != levels[m].dim:
                logger.warning("Trace module at level %d has dimension %d, level algebra has %d",
                               m, modules[m].dim, levels[m].dim)
        return cls(d, point, record, levels, modules)

    @property
    def top(self) -> int:
        return max(self.levels)

    @property
    def nu(self) -> Fraction:
        return self.point.nu

    @property
    def mu(self) -> Fraction:
        return self.admissibility.mu

    def instance(self, m: int) -> AffineBmwInstance:
        if m < 1 or m not in self.levels:
            raise ValueError(f"No affine instance at level {m} (tower has levels 0..{self.top})")
        if m not in self._instances:
            self._instances[m] = AffineBmwInstance(m, self.d, self.levels[m], self.point, self.admissibility)
        return self._instances[m]

    def level_of(self, X: AlgebraElement) -> int:
        for m, algebra in self.levels.items():
            if X.owner is algebra:
                return m
        raise OwnerMismatch(f"Element of {X.owner.name} does not belong to this tower")

    def _inclusion_columns(self, m: int) -> List[SparseVec]:
        """Images in A_m of the basis words of A_{m-1}"""
        if m not in self._inclusions:
            self._inclusions[m] = word_images(self.levels[m], self.levels[m - 1].basis)
        return self._inclusions[m]

    def include(self, X: AlgebraElement, level: int) -> AlgebraElement:
        """Image of X under A_m in A_{m+1} in ... in A_level"""
        m = self.level_of(X)
        if level < m:
            raise ValueError(f"Cannot include level {m} into lower level {level}")
        coeffs = X.coeffs
        while m < level:
            m += 1
            columns = self._inclusion_columns(m)
            out: SparseVec = {}
            for j, c in coeffs.items():
                vec_axpy(out, c, columns[j])
            coeffs = out
        return self.levels[level].element(coeffs)

    def restrict(self, Y: AlgebraElement) -> Optional[AlgebraElement]:
        """Y as an element of the next level down, or None when Y lies outside it"""
        m = self.level_of(Y)
        if m == 0:
            return None
        if m not in self._restrictions:
            basis = EchelonBasis()
            for j, col in enumerate(self._inclusion_columns(m)):
                basis.add(col, j)
            self._restrictions[m] = basis
        try:
            combo = self._restrictions[m].express(Y.coeffs)
        except NoSolution:
            return None
        return self.levels[m - 1].element(combo)

    def module_vector(self, X: AlgebraElement) -> SparseVec:
        """v0 X in the trace module of the level of X"""
        m = self.level_of(X)
        if m not in self._module_images:
            self._module_images[m] = word_images(self.modules[m], self.levels[m].basis)
        images = self._module_images[m]
        out: SparseVec = {}
        for j, c in X.coeffs.items():
            vec_axpy(out, c, images[j])
        return out

    def trace_columns(self, m: int) -> EchelonBasis:
        """Echelon form of v0 b over the basis b of A_{m-1}, inside the level-m module"""
        if m not in self._trace_columns:
            basis = EchelonBasis()
            images = word_images(self.modules[m], self.levels[m - 1].basis)
            for j, col in enumerate(images):
                if not basis.add(col, j):
                    logger.warning("Level %d trace columns are dependent at basis word %s",
                                   m, self.levels[m - 1].basis[j])
            self._trace_columns[m] = basis
        return self._trace_columns[m]


@functools.lru_cache(maxsize=4)
def shared_tower(d: int, top: int, seed: int = 0, magnitude: int = DEFAULT_MAGNITUDE,
                 max_dim: Optional[int] = None) -> TowerContext:
    """TowerContext.build memoized on its arguments, so suites at one point close the levels once"""
    return TowerContext.build(d, top, seed=seed, magnitude=magnitude, max_dim=max_dim)


def markov_trace(ctx: TowerContext, X: AlgebraElement) -> AlgebraElement:
    """
    Tr_(m): A_m -> A_{m-1}, defined by kappa_m X kappa_m = nu^-1 Tr_(m)(X) kappa_m

    Raises:
        NotProportional: if kappa_m X kappa_m is not in A_{m-1} kappa_m
    """
    m = ctx.level_of(X)
    if m == 0 or m not in ctx.modules:
        raise ValueError(f"Trace is available on levels 1..{max(ctx.modules)}, got level {m}")
    sandwich = ctx.modules[m].act(ctx.module_vector(X), (K(m), 1))
    try:
        combo = ctx.trace_columns(m).express(sandwich)
    except NoSolution:
        raise NotProportional(f"kappa_{m} X kappa_{m} is not a multiple of kappa_{m} over level {m - 1}") from None
    return ctx.levels[m - 1].element({j: ctx.nu * c for j, c in combo.items()})


def crossing_coefficients(point: ParameterPoint, x: Fraction, z: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """
    (a, b, c) with Tr(T_k(x) X T_k(z)) = a Tr(T_k X kappa_k) + b Tr(X) - c X

    Raises:
        PoleError: if x nu + q, z nu + q, x - 1 or z - 1 vanishes
    """
    q, nu = point.q, point.nu
    delta = q - 1 / q
    x, z = Fraction(x), Fraction(z)
    for label, value in (("x nu + q", x * nu + q), ("z nu + q", z * nu + q), ("x - 1", x - 1), ("z - 1", z - 1)):
        if value == 0:
            raise PoleError(f"Crossing coefficients have a pole at x={x}, z={z}", factor=label)
    den = (x * nu + q) * (z * nu + q)
    xz = x * z
    a = delta * (nu ** 2 * xz - q ** 2) / den
    b = (q ** 2 * nu ** 2 * xz - nu ** 2 * xz + xz * nu ** 2 / q ** 2 + q * nu * (x + z) + q ** 2) / den
    c = delta * (xz * nu ** 2 - q ** 2) * (xz * nu * q ** 2 + xz * nu ** 2 * q + (x + z) * nu - xz * nu + q) / (
        den * q * (z - 1) * (x - 1))
    return a, b, c


class TraceOperations:
    """Tower construction, the trace map and its identity suites"""

    @staticmethod
    def apply(operation: str, **kwargs):
        """
        Dispatch a named trace operation

        Args:
            operation: one of build_tower, shared_tower, markov_trace, trace_property_suite, lemma_identities
            **kwargs: Arguments of the operation

        Returns:
            Result of the operation
        """
        if operation == 'build_tower':
            return TowerContext.build(**kwargs)
        elif operation == 'shared_tower':
            return shared_tower(**kwargs)
        elif operation == 'markov_trace':
            return markov_trace(**kwargs)
        elif operation == 'trace_property_suite':
            return TraceOperations.trace_property_suite(**kwargs)
        elif operation == 'lemma_identities':
            return TraceOperations.lemma_identities(**kwargs)
        else:
            raise ValueError(f"Unknown trace operation: {operation}")

    @staticmethod
    def trace_property_suite(ctx: TowerContext, k: Optional[int] = None, trials: int = 3,
                             seed: int = 0) -> Report:
        """
        Values, conjugation invariance, kappa cycling, the bimodule property and
        tower cycling of Tr_(k+1) and Tr_(k), each over a full basis

        Args:
            ctx: Tower with levels up to k+1
            k: Middle level; defaults to top - 1
            trials: Random pairs for the linearity check
        """
        k = ctx.top - 1 if k is None else k
        if k < 1 or k + 1 > ctx.top:
            raise ValueError(f"Trace suite needs 1 <= k and k+1 <= {ctx.top}, got k={k}")
        report = Report('markov-trace')
        report.add_point(ctx.point)
        nu, mu = ctx.nu, ctx.mu
        tr = lambda X: markov_trace(ctx, X)  # noqa: E731
        up = ctx.instance(k + 1)
        lower = ctx.levels[k]

        for m in range(1, ctx.top + 1):
            report.add(check(f"module-dimension:{m}", "dim kappa_m A_(m+1) = dim A_m",
                             ctx.modules[m].dim == ctx.levels[m].dim,
                             {'module': ctx.modules[m].dim, 'level': ctx.levels[m].dim}))
            below = ctx.levels[m - 1]
            if below.presentation is not None and below.presentation.generators:
                images = {g: ctx.levels[m].word(g) for g in below.presentation.generator_names}
                report.extend(check_homomorphism(below.presentation, images, ctx.levels[m].unit(),
                                                 name=f"inclusion:{m - 1}-{m}"))
            back = all(ctx.restrict(ctx.include(b, m)) == b for b in below.basis_elements())
            outside = ctx.restrict(ctx.levels[m].word(f"T{m - 1}" if m >= 2 else "T0"))
            report.add(check(f"subalgebra-test:{m}", "restriction inverts inclusion and rejects the new generator",
                             back and (outside is None or ctx.d == 1)))

        report.add(check(f"trace-values:T:{k + 1}", "Tr(T_k) = 1", tr(up.T(k)) == lower.unit()))
        report.add(check(f"trace-values:Tinv:{k + 1}", "Tr(T_k^-1) = nu^2", tr(up.Tinv(k)) == lower.scalar(nu ** 2)))
        report.add(check(f"trace-values:kappa:{k + 1}", "Tr(kappa_k) = nu", tr(up.K(k)) == lower.scalar(nu)))
        report.add(check(f"trace-values:unit:{k + 1}", "Tr(1) = nu mu", tr(up.one()) == lower.scalar(nu * mu)))
        report.add(check(f"trace-values:lower:{k + 1}", "Tr(X_k) = nu mu X_k",
                         all(tr(ctx.include(X, k + 1)) == X * (nu * mu) for X in lower.basis_elements())))
        first = ctx.instance(1)
        record = ctx.admissibility
        for j in range(-1, 2 * ctx.d + 1):
            found = tr(first.T0() ** j)
            expected = nu * record.omega(j)
            report.add(check(f"trace-values:T0^{j}", "Tr_(1)(T0^k) = nu zhat^(k)",
                             found == ctx.levels[0].scalar(expected),
                             {'found': found.to_json(), 'expected': str(expected)}))

        Tk, Tkinv, Kk = up.T(k), up.Tinv(k), up.K(k)
        for j, X in enumerate(lower.basis_elements()):
            word = str(lower.basis[j])
            Xk = ctx.include(X, k + 1)
            inner = ctx.include(tr(X), k)
            report.add(check(f"trace-conjugation:{word}", "Tr(T_k X T_k^-1) = Tr_(k)(X) = Tr(T_k^-1 X T_k)",
                             tr(Tk * Xk * Tkinv) == inner and tr(Tkinv * Xk * Tk) == inner, {'basis': word}))
            report.add(check(f"trace-kappa-cycling:{word}", "Tr(T_k X kappa_k) = Tr(kappa_k X T_k)",
                             tr(Tk * Xk * Kk) == tr(Kk * Xk * Tk), {'basis': word}))

        lows = lower.basis_elements()
        for j, Y in enumerate(ctx.levels[k + 1].basis_elements()):
            word = str(ctx.levels[k + 1].basis[j])
            trY = tr(Y)
            bimodule = all(
                tr(ctx.include(X, k + 1) * Y * ctx.include(Xp, k + 1)) == X * trY * Xp
                for X in lows for Xp in lows
            )
            report.add(check(f"trace-bimodule:{word}", "Tr(X Y X') = X Tr(Y) X'", bimodule, {'basis': word}))
            report.add(check(f"trace-cycling:{word}", "Tr_(k) Tr_(k+1)(T_k Y) = Tr_(k) Tr_(k+1)(Y T_k)",
                             tr(tr(Tk * Y)) == tr(tr(Y * Tk)), {'basis': word}))

        rng = np.random.default_rng(seed)
        basis = ctx.levels[k + 1].basis_elements()
        for t in range(trials):
            a, b = random_spectral(rng, 2, 97)
            i, j = (int(v) for v in rng.integers(0, len(basis), size=2))
            X, Y = basis[i] * up.T(k) + up.K(k), basis[j] * up.Tinv(k)
            report.add(check(f"trace-linearity:t{t}", "Tr(aX + bY) = a Tr(X) + b Tr(Y)",
                             tr(X * a + Y * b) == tr(X) * a + tr(Y) * b,
                             {'a': str(a), 'b': str(b), 'pair': [i, j]}))
        return report

    @staticmethod
    def lemma_identities(ctx: TowerContext, x: Optional[Fraction] = None, z: Optional[Fraction] = None,
                         k: Optional[int] = None, trials: int = 5, seed: int = 0, magnitude: int = 97) -> Report:
        """
        Sandwich of X_k between two baxterized generators under Tr_(k+1),
        and its crossing-unitarity specialization x z = q^2 nu^-2

        Args:
            x, z: Spectral values; random pairs are drawn when omitted
            k: Level of X_k; defaults to top - 1
        """
        k = ctx.top - 1 if k is None else k
        if k < 1 or k + 1 > ctx.top:
            raise ValueError(f"Crossing identities need 1 <= k and k+1 <= {ctx.top}, got k={k}")
        report = Report('trace-crossing')
        report.add_point(ctx.point)
        p = ctx.point
        q, nu = p.q, p.nu
        up = ctx.instance(k + 1)
        lower = ctx.levels[k]
        tr = lambda X: markov_trace(ctx, X)  # noqa: E731
        crossing = q ** 2 / nu ** 2

        rng = np.random.default_rng(seed)
        if x is not None and z is not None:
            pairs = [(Fraction(x), Fraction(z))]
        else:
            pairs = [tuple(random_spectral(rng, 2, magnitude, [-q / nu])) for _ in range(trials)]

        lifted = [(str(lower.basis[j]), X, ctx.include(X, k + 1)) for j, X in enumerate(lower.basis_elements())]
        for t, (xv, zv) in enumerate(pairs):
            try:
                a, b, c = crossing_coefficients(p, xv, zv)
                bx, bz = up.bax(k, xv), up.bax(k, zv)
                bad = [word for word, X, Xk in lifted
                       if tr(bx * Xk * bz) != tr(up.T(k) * Xk * up.K(k)) * a + ctx.include(tr(X), k) * b - X * c]
                report.add(check(f"crossing-expansion:t{t}",
                                 "Tr(T_k(x) X T_k(z)) = a Tr(T_k X kappa_k) + b Tr_(k)(X) - c X",
                                 not bad, {'x': str(xv), 'z': str(zv), 'basis': bad[:4]}))
                zc = crossing / xv
                f = eval_formula('F', [xv], p)
                bc = up.bax(k, zc)
                bad = [word for word, X, Xk in lifted if tr(bx * Xk * bc) != ctx.include(tr(X), k) / f]
                report.add(check(f"crossing-unitarity:t{t}", "Tr(T_k(x) X T_k(q^2 nu^-2 / x)) = F(x)^-1 Tr_(k)(X)",
                                 not bad, {'x': str(xv), 'basis': bad[:4]}))
                a, b, c = crossing_coefficients(p, xv, zc)
                report.add(check(f"crossing-consistency:t{t}", "expansion at x z = q^2 nu^-2 reduces to F(x)^-1",
                                 a == 0 and c == 0 and b == 1 / f, {'x': str(xv)}))
            except PoleError as exc:
                report.add(Check(f"spectral-pole:t{t}", "spectral values avoid poles", INFO, {'error': str(exc)}))
        return report
