"""
q-KZ connections over R-matrix and reflection data
RKInstance bundles (R^, K, K-bar, sigma, sigma-bar, Q), either realized in a
closed affine BMW quotient or as exact matrices on (C^2)^n. The module builds
the connection families as explicit transcriptions and as images of the
Jucys-Murphy words, checks flatness, and runs the periodic transfer suite.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    InvolutionDomainError,
    PoleError,
    SingularBoundary,
    SingularElement,
    UnsupportedFamily,
)
from ..presentation import check_homomorphism
from ..report import INFO, Check, Report, check
from ..scalar import ParameterPoint, sample_generic, to_rational
from .affine_bmw import AffineBmwInstance, AffineBmwOperations
from .bmw import PLAIN, random_spectral
from .braid import A1X, C1, MIN_RANK, XBAR, Backend, BraidPresentation, Tp, jm_words
from .operators import (
    ConnectionOperator,
    MatrixOp,
    Mobius,
    SubstitutionMap,
    Vector,
    inversion,
    kron_all,
    mobius_after,
    mobius_apply,
    reflection,
    scaled_inversion,
)

logger = logging.getLogger(__name__)

ALGEBRA = 'algebra'
MATRIX = 'matrix'

KBAR_ONE = 'one'
KBAR_SCALAR = 'scalar'
KBAR_SHIFT = 'shift'
KBAR_MODES = (KBAR_ONE, KBAR_SCALAR, KBAR_SHIFT)

FLAVOR_A = 'A'
FLAVOR_ABAR = 'Abar'
FLAVOR_BOUNDARY = 'boundary'
FLAVOR_PERIODIC = 'periodic'
FLAVORS = (FLAVOR_A, FLAVOR_ABAR, FLAVOR_BOUNDARY, FLAVOR_PERIODIC)

INVOLUTIONS: Dict[str, Callable[[Fraction], Mobius]] = {
    'reflection': reflection,
    'inversion': inversion,
    'scaled_inversion': scaled_inversion,
}

JIMBO_GUARDS = ("q - 1/q", "q**2 + 1", "w", "xi", "w**2 - 1", "xi**2 - 1")

POLE_ERRORS = (PoleError, SingularElement, SingularBoundary, InvolutionDomainError, ZeroDivisionError)


@dataclass(frozen=True)
class Involution:
    """A named spectral involution: reflection a - x, inversion b/x, scaled_inversion 1/(c x)"""

    tag: str
    value: Fraction

    def __post_init__(self):
        if self.tag not in INVOLUTIONS:
            raise ValueError(f"Unknown involution tag '{self.tag}', expected one of {sorted(INVOLUTIONS)}")
        object.__setattr__(self, 'value', to_rational(self.value))

    @property
    def mobius(self) -> Mobius:
        return INVOLUTIONS[self.tag](self.value)

    def __call__(self, x: Fraction) -> Fraction:
        return mobius_apply(self.mobius, Fraction(x))

    def to_json(self) -> Dict[str, str]:
        return {'tag': self.tag, 'value': str(self.value)}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "Involution":
        return cls(data['tag'], to_rational(data['value']))


# ---------------------------------------------------------------------------
# Matrices on (C^2)^n; factor 1 is the most significant tensor digit


def swap_matrix() -> MatrixOp:
    """P on C^2 (x) C^2"""
    return MatrixOp([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])


def jimbo_braid(q: Fraction) -> MatrixOp:
    """Constant Hecke braid matrix with (T - q)(T + q^-1) = 0"""
    q = Fraction(q)
    return MatrixOp([[q, 0, 0, 0], [0, 0, 1, 0], [0, 1, q - 1 / q, 0], [0, 0, 0, q]])


def chain(local: MatrixOp, k: int, n: int) -> MatrixOp:
    """local acting on factors k, k+1 of n"""
    if not 1 <= k < n:
        raise ValueError(f"Site {k} is not a nearest-neighbour pair of {n} factors")
    return kron_all(MatrixOp.identity(2 ** (k - 1)), local, MatrixOp.identity(2 ** (n - k - 1)))


def on_factor(op: MatrixOp, k: int, n: int) -> MatrixOp:
    """A 2x2 matrix acting on factor k of n"""
    return kron_all(MatrixOp.identity(2 ** (k - 1)), op, MatrixOp.identity(2 ** (n - k)))


def embed_pair(local: MatrixOp, i: int, j: int, n: int) -> MatrixOp:
    """local acting on factors (i, j) of n, with its first space at factor i"""
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"Invalid factor pair ({i}, {j}) for {n} factors")
    dims = (2,) * n
    size = 2 ** n
    out = np.empty((size, size), dtype=object)
    out.fill(Fraction(0))
    for col in range(size):
        digits = [int(v) for v in np.unravel_index(col, dims)]
        src = 2 * digits[i - 1] + digits[j - 1]
        for dst in range(4):
            value = local.data[dst, src]
            if value == 0:
                continue
            target = list(digits)
            target[i - 1], target[j - 1] = divmod(dst, 2)
            out[int(np.ravel_multi_index(tuple(target), dims)), col] += value
    return MatrixOp(out)


def partial_trace_last(m: MatrixOp) -> MatrixOp:
    """Trace over the last tensor factor"""
    half = m.size // 2
    blocks = m.data.reshape(half, 2, half, 2)
    return MatrixOp(blocks[:, 0, :, 0] + blocks[:, 1, :, 1])


def boundary_weight(u: Fraction, xi: Fraction) -> Fraction:
    """alpha(u) = (xi - u)/(u (xi u - 1)), with alpha(u) alpha(1/u) = 1"""
    if u == 0 or xi * u == 1:
        raise PoleError(f"Diagonal boundary weight has a pole at u={u}", factor="u (xi u - 1)")
    return (xi - u) / (u * (xi * u - 1))


# ---------------------------------------------------------------------------
# Instances


class RKInstance:
    """
    R-matrix and reflection data for q-KZ connections

    R^(x, y) acts on sites k, k+1; K(x) sits at site 1 and K-bar(x) at site n.
    The K-bar modes are 'one' (unit), 'scalar' (kbar_scale times the unit)
    and 'shift', where rho(T_n) is the pure substitution sigma on z_n.
    """

    def __init__(self, name: str, n: int, unit, sigma: Involution, sigma_bar: Involution,
                 kbar: str = KBAR_ONE, kbar_scale=1, family: str = 'custom',
                 affine: Optional[AffineBmwInstance] = None, braid: Optional[MatrixOp] = None,
                 parameters: Optional[Mapping[str, Fraction]] = None, twist: Optional[MatrixOp] = None,
                 unitary: bool = False, corruption: Optional[Tuple[int, int, Fraction]] = None):
        if n < 1:
            raise ValueError(f"An RK instance needs n >= 1, got {n}")
        if kbar not in KBAR_MODES:
            raise ValueError(f"Unknown K-bar mode '{kbar}', expected one of {KBAR_MODES}")
        self.name = name
        self.n = n
        self.unit = unit
        self.sigma = sigma
        self.sigma_bar = sigma_bar
        self.kbar = kbar
        self.kbar_scale = to_rational(kbar_scale)
        self.family = family
        self.affine = affine
        self.braid = braid
        self.parameters = {k: to_rational(v) for k, v in (parameters or {}).items()}
        self.twist = twist
        self.unitary = unitary
        self.corruption = corruption
        self._cache: Dict[Tuple, object] = {}

    def __repr__(self) -> str:
        return f"RKInstance({self.name}, n={self.n}, kbar={self.kbar})"

    # -- constructors

    @classmethod
    def from_bmw(cls, affine: AffineBmwInstance, kbar: str = KBAR_ONE, c_prime=None,
                 kbar_scale=1, name: Optional[str] = None) -> "RKInstance":
        """R^(x, y) = T_k(x/y), K(x) = y_1(w x), sigma = 1/(c x), sigma-bar = 1/(c' x)"""
        c = affine.c
        c_prime = c if c_prime is None else to_rational(c_prime)
        return cls(name or f"bmw-{kbar}", affine.n, affine.one(), Involution('scaled_inversion', c),
                   Involution('scaled_inversion', c_prime), kbar, kbar_scale, family='bmw', affine=affine,
                   parameters={'c_prime': c_prime})

    @classmethod
    def jimbo(cls, n: int, q, w, xi, c_prime=None, kbar: str = KBAR_ONE, kbar_scale=1,
              twist: Optional[Sequence] = None, name: Optional[str] = None,
              braid: Optional[MatrixOp] = None) -> "RKInstance":
        """
        Trigonometric R^ on C^2 (x) C^2 with the diagonal boundary diag(alpha(w x), 1)

        Args:
            twist: Diagonal entries (t1, t2) of a constant twist Q
            braid: Hecke-type braid matrix to baxterize instead of the standard one
        """
        q, w, xi = to_rational(q), to_rational(w), to_rational(xi)
        c = w * w
        c_prime = c if c_prime is None else to_rational(c_prime)
        unitary = kbar == KBAR_SHIFT or kbar == KBAR_ONE or to_rational(kbar_scale) ** 2 == 1
        q_matrix = None if twist is None else MatrixOp([[twist[0], 0], [0, twist[1]]])
        return cls(name or f"jimbo-{kbar}", n, MatrixOp.identity(2 ** n), Involution('scaled_inversion', c),
                   Involution('scaled_inversion', c_prime), kbar, kbar_scale,
                   family='jimbo' if braid is None else 'hecke',
                   braid=jimbo_braid(q) if braid is None else braid,
                   parameters={'q': q, 'w': w, 'xi': xi, 'c_prime': c_prime}, twist=q_matrix, unitary=unitary)

    @classmethod
    def random_jimbo(cls, n: int, seed: int = 0, magnitude: int = 97, shifted: bool = True,
                     kbar: str = KBAR_ONE, twisted: bool = False, kbar_scale=1) -> "RKInstance":
        """Jimbo instance at a generic point; shifted draws c' independently of c = w^2"""
        names = ('q', 'w', 'xi') + (('cp', 't1', 't2') if shifted or twisted else ())
        point = sample_generic(names, JIMBO_GUARDS, seed, magnitude)
        c_prime = point['cp'] if shifted else None
        twist = (point['t1'], point['t2']) if twisted else None
        return cls.jimbo(n, point.q, point['w'], point['xi'], c_prime, kbar, kbar_scale, twist=twist)

    @classmethod
    def identity_r(cls, n: int, c=2, c_prime=None) -> "RKInstance":
        """R^ = P, K = 1: the trivial solution"""
        c = to_rational(c)
        c_prime = c if c_prime is None else to_rational(c_prime)
        return cls('identity', n, MatrixOp.identity(2 ** n), Involution('scaled_inversion', c),
                   Involution('scaled_inversion', c_prime), family='identity',
                   parameters={'c': c, 'c_prime': c_prime}, unitary=True)

    def with_corrupted_entry(self, row: int, col: int, delta) -> "RKInstance":
        """Copy whose local R^ has delta added at (row, col)"""
        if self.kind != MATRIX:
            raise ValueError("Only matrix instances have a local R-matrix to corrupt")
        return RKInstance(f"{self.name}-corrupt", self.n, self.unit, self.sigma, self.sigma_bar, self.kbar,
                          self.kbar_scale, self.family, None, self.braid, self.parameters, self.twist,
                          self.unitary, (row, col, to_rational(delta)))

    def with_n(self, n: int) -> "RKInstance":
        """The same matrix data on n sites"""
        if self.kind != MATRIX:
            raise ValueError("Only matrix instances can change the number of sites")
        return RKInstance(self.name, n, MatrixOp.identity(2 ** n), self.sigma, self.sigma_bar, self.kbar,
                          self.kbar_scale, self.family, None, self.braid, self.parameters, self.twist,
                          self.unitary, self.corruption)

    # -- data

    @property
    def kind(self) -> str:
        return ALGEBRA if self.affine is not None else MATRIX

    @property
    def point(self) -> ParameterPoint:
        if self.affine is not None:
            return self.affine.point.with_values(**self.parameters)
        return ParameterPoint.of(0, **self.parameters)

    @property
    def sigma_bar_effective(self) -> Involution:
        return self.sigma if self.kbar == KBAR_SHIFT else self.sigma_bar

    def shift_map(self, k: int) -> SubstitutionMap:
        """D_{z_k}: z_k -> sigma-bar(sigma(z_k))"""
        return SubstitutionMap.coordinate(self.n, k, mobius_after(self.sigma_bar_effective.mobius,
                                                                  self.sigma.mobius))

    def local_hat(self, x: Fraction, y: Fraction) -> MatrixOp:
        """R^(x, y) on C^2 (x) C^2"""
        x, y = Fraction(x), Fraction(y)
        if self.braid is None:
            out = swap_matrix()
        else:
            q = self.parameters['q']
            if x == q * q * y:
                raise PoleError(f"R-matrix has a pole at x={x}, y={y}", factor="x - q^2 y")
            out = (self.braid * (x - y) - x * (q - 1 / q)) * (q / (x - q * q * y))
        if self.corruption is not None:
            row, col, delta = self.corruption
            out = out.with_entry(row, col, out.entry(row, col) + delta)
        return out

    def local_r(self, x: Fraction, y: Fraction) -> MatrixOp:
        """R = P R^"""
        return swap_matrix() * self.local_hat(x, y)

    def r_hat(self, k: int, x: Fraction, y: Fraction):
        key = ('r', k, Fraction(x), Fraction(y))
        if key not in self._cache:
            if self.affine is not None:
                if y == 0:
                    raise PoleError("R^(x, y) needs y != 0", factor="y")
                self._cache[key] = self.affine.bax(k, Fraction(x) / Fraction(y), PLAIN)
            else:
                self._cache[key] = chain(self.local_hat(x, y), k, self.n)
        return self._cache[key]

    def r_hat_inv(self, k: int, x: Fraction, y: Fraction):
        key = ('r-inv', k, Fraction(x), Fraction(y))
        if key not in self._cache:
            try:
                self._cache[key] = self.r_hat(k, x, y).inverse()
            except SingularElement:
                raise PoleError(f"R^_{k}({x}, {y}) is not invertible", factor="det R^") from None
        return self._cache[key]

    def boundary(self, x: Fraction):
        """K(x) at site 1"""
        key = ('k', Fraction(x))
        if key not in self._cache:
            if self.affine is not None:
                self._cache[key] = self.affine.boundary(1, self.affine.w * Fraction(x))
            elif 'xi' not in self.parameters:
                self._cache[key] = self.unit
            else:
                alpha = boundary_weight(self.parameters['w'] * Fraction(x), self.parameters['xi'])
                self._cache[key] = on_factor(MatrixOp([[alpha, 0], [0, 1]]), 1, self.n)
        return self._cache[key]

    def kbar_value(self, x: Fraction):
        """K-bar(x) at site n; the shift mode has unit coefficient"""
        if self.kbar == KBAR_SCALAR:
            return self.unit * self.kbar_scale
        return self.unit

    def twist_on(self, k: int, n: Optional[int] = None) -> MatrixOp:
        n = self.n if n is None else n
        if self.twist is None:
            return MatrixOp.identity(2 ** n)
        return on_factor(self.twist, k, n)

    def r_pair(self, i: int, j: int, x: Fraction, y: Fraction, n: Optional[int] = None) -> MatrixOp:
        """R_{ij}(x, y) on n factors"""
        n = self.n if n is None else n
        key = ('pair', i, j, Fraction(x), Fraction(y), n)
        if key not in self._cache:
            self._cache[key] = embed_pair(self.local_r(x, y), i, j, n)
        return self._cache[key]

    # -- export

    def to_json(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            'name': self.name,
            'n': self.n,
            'family': self.family,
            'sigma': self.sigma.to_json(),
            'sigma_bar': self.sigma_bar.to_json(),
            'kbar': self.kbar,
            'kbar_scale': str(self.kbar_scale),
            'parameters': {k: str(v) for k, v in sorted(self.parameters.items())},
        }
        if self.affine is not None:
            data['degree'] = self.affine.d
            data['point'] = self.affine.point.to_json()
        else:
            data['braid'] = None if self.braid is None else self.braid.to_json()
            data['twist'] = None if self.twist is None else self.twist.to_json()
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, object], max_dim: Optional[int] = None) -> "RKInstance":
        """
        Rebuild an instance from its JSON form

        BMW instances are re-closed at the recorded point; matrix instances
        read the braid matrix and twist as rational strings.
        """
        params = {k: to_rational(v) for k, v in dict(data.get('parameters') or {}).items()}
        sigma = Involution.from_json(data['sigma'])
        sigma_bar = Involution.from_json(data['sigma_bar'])
        kbar = data.get('kbar', KBAR_ONE)
        scale = to_rational(data.get('kbar_scale', '1'))
        n = int(data['n'])
        family = data.get('family', 'custom')
        if family == 'bmw':
            raw = dict(data['point'])
            point = ParameterPoint(tuple(sorted((k, to_rational(v)) for k, v in dict(raw['assignment']).items())),
                                   int(raw.get('seed', 0)))
            affine = AffineBmwOperations.build_affine(n, int(data['degree']), point=point, max_dim=max_dim)
            out = cls.from_bmw(affine, kbar, params.get('c_prime'), scale, name=data.get('name'))
        else:
            braid = data.get('braid')
            twist = data.get('twist')
            unitary = family == 'identity' or kbar != KBAR_SCALAR or scale ** 2 == 1
            out = cls(data.get('name', family), n, MatrixOp.identity(2 ** n), sigma, sigma_bar, kbar, scale, family,
                      braid=None if braid is None else MatrixOp([[to_rational(v) for v in row] for row in braid]),
                      parameters=params,
                      twist=None if twist is None else MatrixOp([[to_rational(v) for v in row] for row in twist]),
                      unitary=unitary)
        out.sigma, out.sigma_bar = sigma, sigma_bar
        return out


def probe_vectors(n: int, count: int, seed: int = 0, magnitude: int = 97) -> List[Vector]:
    rng = np.random.default_rng(seed)
    return [tuple(random_spectral(rng, n, magnitude)) for _ in range(count)]


# ---------------------------------------------------------------------------
# Validation


def validate_instance(inst: RKInstance, trials: int = 3, seed: int = 0, magnitude: int = 97) -> Report:
    """
    Yang-Baxter, reflection, dual reflection, unitarity and twist residuals at
    random spectral values, plus the braid relations of the rho images

    Args:
        inst: Instance to validate
        trials: Random spectral triples per identity

    Returns:
        Report whose YBE records carry the site and the failing triple
    """
    report = Report('rk-validate', config={'instance': inst.name, 'trials': trials, 'seed': seed})
    report.add_point(inst.point)
    rng = np.random.default_rng(seed)
    n = inst.n
    sigma, sigma_bar = inst.sigma, inst.sigma_bar
    # the YBE needs three sites; matrix data can be checked on a longer chain
    ybe_inst = inst if n >= 3 or inst.kind != MATRIX else inst.with_n(3)

    def residual(check_id: str, anchor: str, lhs, rhs, **witness):
        ok = lhs == rhs
        if not ok:
            logger.warning("%s fails for %s", check_id, inst.name)
        report.add(check(check_id, anchor, ok, witness))

    for t in range(trials):
        x, y, z = random_spectral(rng, 3, magnitude)
        triple = [str(x), str(y), str(z)]
        try:
            if ybe_inst.n >= 3:
                r = ybe_inst.r_hat
                for k in range(1, ybe_inst.n - 1):
                    residual(f"ybe:{k}:t{t}", "R^_k(x,y) R^_k+1(x,z) R^_k(y,z) = R^_k+1(y,z) R^_k(x,z) R^_k+1(x,y)",
                             r(k, x, y) * r(k + 1, x, z) * r(k, y, z), r(k + 1, y, z) * r(k, x, z) * r(k + 1, x, y),
                             site=k, triple=triple)
            elif t == 0:
                report.add(Check("ybe", "Yang-Baxter equation needs three sites", INFO, {'n': n}))
            if n >= 2:
                r, K = inst.r_hat, inst.boundary
                sx, sy = sigma(x), sigma(y)
                residual(f"reflection:t{t}", "R^(x,y) K1(x) R^(y,sx) K1(y) = K1(y) R^(x,sy) K1(x) R^(sy,sx)",
                         r(1, x, y) * K(x) * r(1, y, sx) * K(y), K(y) * r(1, x, sy) * K(x) * r(1, sy, sx),
                         pair=triple[:2])
                if inst.kbar != KBAR_SHIFT:
                    m = n - 1
                    Kb = inst.kbar_value
                    tx, ty = sigma_bar(x), sigma_bar(y)
                    residual(f"dual-reflection:t{t}",
                             "R^(x,y) Kb(y) R^(ty,x) Kb(x) = Kb(x) R^(tx,y) Kb(y) R^(ty,tx)",
                             r(m, x, y) * Kb(y) * r(m, ty, x) * Kb(x), Kb(x) * r(m, tx, y) * Kb(y) * r(m, ty, tx),
                             pair=triple[:2])
            if inst.unitary:
                r = inst.r_hat
                if n >= 2:
                    residual(f"unitarity:r:t{t}", "R^(x,y) R^(y,x) = 1", r(1, x, y) * r(1, y, x), inst.unit,
                             pair=triple[:2])
                residual(f"unitarity:k:t{t}", "K(x) K(sigma x) = 1", inst.boundary(x) * inst.boundary(sigma(x)),
                         inst.unit, value=triple[0])
                if inst.kbar != KBAR_SHIFT:
                    residual(f"unitarity:kbar:t{t}", "Kb(x) Kb(sigma-bar x) = 1",
                             inst.kbar_value(x) * inst.kbar_value(sigma_bar(x)), inst.unit, value=triple[0])
            elif t == 0:
                report.add(Check("unitarity", "instance does not claim unitarity", INFO, {'family': inst.family}))
            if inst.twist is not None and n >= 2:
                qq = inst.twist_on(1) * inst.twist_on(2)
                rr = inst.r_pair(1, 2, x, y)
                residual(f"twist-consistency:t{t}", "Q_1 Q_2 R_12(x,y) = R_12(x,y) Q_1 Q_2", qq * rr, rr * qq,
                         pair=triple[:2])
        except POLE_ERRORS as exc:
            report.add(Check(f"spectral-pole:t{t}", "spectral values avoid poles", INFO, {'error': str(exc)}))

    backend = connection_backend(inst, probe_vectors(n, 2, seed + 1, magnitude))
    report.extend(check_homomorphism(BraidPresentation(C1, n).presentation(), backend.images, backend.unit,
                                     name=f"rho:{inst.name}", backend=backend.name))
    return report


# ---------------------------------------------------------------------------
# Connections


def _mult(inst: RKInstance, fn: Callable[[Vector], object], probes: Sequence[Vector],
          label: str = "") -> ConnectionOperator:
    return ConnectionOperator.multiplication(fn, inst.n, inst.unit, probes, label)


def _identity(inst: RKInstance, probes: Sequence[Vector]) -> ConnectionOperator:
    return ConnectionOperator.shift(SubstitutionMap.identity(inst.n), inst.unit, probes, 'id')


def connection_backend(inst: RKInstance, probes: Sequence[Vector] = ()) -> Backend:
    """
    rho(T_i) = (R^_i(z_i+1, z_i), s_i), rho(T_0) = (K(z_1), sigma on z_1),
    rho(T_n) = (K-bar(z_n), sigma-bar on z_n)
    """
    n = inst.n
    images: Dict[str, ConnectionOperator] = {
        'T0': ConnectionOperator(lambda z: inst.boundary(z[0]), SubstitutionMap.coordinate(n, 1, inst.sigma.mobius),
                                 inst.unit, probes, 'T0'),
        f"T{n}": ConnectionOperator(lambda z: inst.kbar_value(z[n - 1]),
                                    SubstitutionMap.coordinate(n, n, inst.sigma_bar_effective.mobius),
                                    inst.unit, probes, f"T{n}"),
    }
    for i in range(1, n):
        images[f"T{i}"] = ConnectionOperator(lambda z, i=i: inst.r_hat(i, z[i], z[i - 1]),
                                             SubstitutionMap.swap(n, i), inst.unit, probes, f"T{i}")
    return Backend(f"rho:{inst.name}", images, _identity(inst, probes), n)


def periodic_backend(inst: RKInstance, probes: Sequence[Vector] = ()) -> Backend:
    """
    The periodic group through T'_i = rho(T_i), Xb = Q_1 D_1 P_12 s_1 ... P_n-1,n s_n-1
    and T'_n = Xb^-1 T'_1 Xb

    Raises:
        UnsupportedFamily: for algebra instances or n below the periodic rank
    """
    n = inst.n
    if inst.kind != MATRIX:
        raise UnsupportedFamily("Periodic connections need a matrix instance")
    if n < MIN_RANK[A1X]:
        raise UnsupportedFamily(f"Periodic connections need n >= {MIN_RANK[A1X]}, got {n}")
    base = connection_backend(inst, probes)
    x = _mult(inst, lambda z: inst.twist_on(1), probes, 'Q1')
    x = x * ConnectionOperator.shift(inst.shift_map(1), inst.unit, probes, 'D1')
    for j in range(1, n):
        p = chain(swap_matrix(), j, n)
        x = x * ConnectionOperator(lambda z, p=p: p, SubstitutionMap.swap(n, j), inst.unit, probes, f"P{j}")
    images = {Tp(i): base.images[f"T{i}"] for i in range(1, n)}
    images[XBAR] = x
    images[Tp(n)] = x.inverse() * base.images['T1'] * x
    return Backend(f"periodic:{inst.name}", images, _identity(inst, probes), n)


def _a_connection(inst: RKInstance, k: int, probes: Sequence[Vector]) -> ConnectionOperator:
    n, sigma = inst.n, inst.sigma

    def left(z):
        x = z[k - 1]
        sx = sigma(x)
        out = inst.unit
        for j in range(k - 1, 0, -1):
            out = out * inst.r_hat_inv(j, z[j - 1], x)
        out = out * inst.boundary(x)
        for j in range(1, k):
            out = out * inst.r_hat(j, z[j - 1], sx)
        for j in range(k, n):
            out = out * inst.r_hat(j, z[j], sx)
        return out * inst.kbar_value(sx)

    def right(z):
        out = inst.unit
        for j in range(n - 1, k - 1, -1):
            out = out * inst.r_hat(j, z[k - 1], z[j])
        return out

    shift = ConnectionOperator.shift(inst.shift_map(k), inst.unit, probes, f"D{k}")
    return _mult(inst, left, probes) * shift * _mult(inst, right, probes)


def _abar_connection(inst: RKInstance, k: int, probes: Sequence[Vector]) -> ConnectionOperator:
    n, sigma = inst.n, inst.sigma

    def left(z):
        x = z[k - 1]
        sx = sigma(x)
        out = inst.unit
        for j in range(k - 1, 0, -1):
            out = out * inst.r_hat(j, x, z[j - 1])
        out = out * inst.boundary(x)
        for j in range(1, k):
            out = out * inst.r_hat(j, z[j - 1], sx)
        for j in range(k, n):
            out = out * inst.r_hat(j, z[j], sx)
        return out * inst.kbar_value(sx)

    def right(z):
        out = inst.unit
        for j in range(n - 1, k - 1, -1):
            out = out * inst.r_hat_inv(j, z[j], z[k - 1])
        return out

    shift = ConnectionOperator.shift(inst.shift_map(k), inst.unit, probes, f"D{k}")
    return _mult(inst, left, probes) * shift * _mult(inst, right, probes)


def dressed_boundary(inst: RKInstance, k: int, probes: Sequence[Vector] = ()) -> ConnectionOperator:
    """K_k = R^-1_k-1(z_k-1, x) K_k-1 R^_k-1(z_k-1, sigma x), K_1 = K(x), x = z_k"""
    sigma = inst.sigma
    op = _mult(inst, lambda z: inst.boundary(z[k - 1]), probes, 'K1')
    for j in range(2, k + 1):
        before = _mult(inst, lambda z, j=j: inst.r_hat_inv(j - 1, z[j - 2], z[k - 1]), probes)
        after = _mult(inst, lambda z, j=j: inst.r_hat(j - 1, z[j - 2], sigma(z[k - 1])), probes)
        op = before * op * after
    return op


def dressed_dual(inst: RKInstance, k: int, probes: Sequence[Vector] = (), with_kbar: bool = True) -> ConnectionOperator:
    """
    R^_k(z_k+1, sx) ... R^_n-1(z_n, sx) Kb(sx) D_k R^_n-1(x, z_n) ... R^_k(x, z_k+1)

    with_kbar=False drops K-bar, the reduction for K-bar = 1.
    """
    n, sigma = inst.n, inst.sigma
    shift = ConnectionOperator.shift(inst.shift_map(k), inst.unit, probes, f"D{k}")
    if with_kbar:
        op = _mult(inst, lambda z: inst.kbar_value(sigma(z[k - 1])), probes, 'Kb') * shift
    else:
        op = shift
    for j in range(n - 1, k - 1, -1):
        before = _mult(inst, lambda z, j=j: inst.r_hat(j, z[j], sigma(z[k - 1])), probes)
        after = _mult(inst, lambda z, j=j: inst.r_hat(j, z[k - 1], z[j]), probes)
        op = before * op * after
    return op


def _periodic_connection(inst: RKInstance, k: int, probes: Sequence[Vector]) -> ConnectionOperator:
    if inst.kind != MATRIX:
        raise UnsupportedFamily("Periodic connections need a matrix instance")
    n = inst.n

    def left(z):
        out = inst.unit
        for j in range(k - 1, 0, -1):
            out = out * inst.r_pair(k, j, z[k - 1], z[j - 1])
        return out * inst.twist_on(k)

    def right(z):
        out = inst.unit
        for j in range(n, k, -1):
            out = out * inst.r_pair(k, j, z[k - 1], z[j - 1])
        return out

    shift = ConnectionOperator.shift(inst.shift_map(k), inst.unit, probes, f"D{k}")
    return _mult(inst, left, probes) * shift * _mult(inst, right, probes)


def build_connection(inst: RKInstance, k: int, flavor: str = FLAVOR_A,
                     probes: Sequence[Vector] = ()) -> ConnectionOperator:
    """
    Connection A_k of one flavor, evaluated eagerly at the probes

    Args:
        inst: R-matrix and reflection data
        k: Index 1..n
        flavor: A, Abar, boundary or periodic
        probes: Spectral vectors the operator is compared at

    Raises:
        PoleError: if a coefficient is singular at one of the probes
    """
    if not 1 <= k <= inst.n:
        raise ValueError(f"Connection index {k} outside 1..{inst.n}")
    if flavor == FLAVOR_A:
        op = _a_connection(inst, k, probes)
    elif flavor == FLAVOR_ABAR:
        op = _abar_connection(inst, k, probes)
    elif flavor == FLAVOR_BOUNDARY:
        op = dressed_boundary(inst, k, probes) * dressed_dual(inst, k, probes)
    elif flavor == FLAVOR_PERIODIC:
        op = _periodic_connection(inst, k, probes)
    else:
        raise ValueError(f"Unknown connection flavor '{flavor}', expected one of {FLAVORS}")
    op.label = f"{flavor}{k}"
    for z in op.probes:
        try:
            op.coefficient(z)
        except POLE_ERRORS as exc:
            raise PoleError(f"{flavor}_{k} is singular at z={[str(v) for v in z]}: {exc}") from None
    return op


def reduced_connection(inst: RKInstance, k: int, probes: Sequence[Vector] = ()) -> ConnectionOperator:
    """Boundary flavor with K-bar replaced by 1"""
    op = dressed_boundary(inst, k, probes) * dressed_dual(inst, k, probes, with_kbar=False)
    op.label = f"reduced{k}"
    return op


def connection_family(inst: RKInstance, flavor: str, probes: Sequence[Vector]) -> List[ConnectionOperator]:
    return [build_connection(inst, k, flavor, probes) for k in range(1, inst.n + 1)]


def flatness_check(connections: Iterable[ConnectionOperator], label: str = 'family') -> Report:
    """
    [A_k, A_r] = 0 for every pair, compared at the probe vectors

    Raises:
        IncompatibleSubstitutions: if a commutator pairs different substitutions
    """
    ops = list(connections)
    if not ops:
        raise ValueError("flatness_check needs at least one connection")
    report = Report('flatness')
    pairs = list(itertools.combinations(enumerate(ops, 1), 2)) or [((1, ops[0]), (1, ops[0]))]
    for (i, a), (j, b) in pairs:
        comm = a.commutator(b)
        witness = None
        try:
            for z in comm.probes:
                if not comm.coefficient(z).is_zero():
                    witness = {'probe': [str(v) for v in z]}
                    break
            ok = witness is None
        except POLE_ERRORS as exc:
            ok, witness = False, {'error': str(exc)}
        if not ok:
            logger.warning("Connections %d and %d of %s do not commute", i, j, label)
        report.add(check(f"flat:{label}:{i},{j}", f"[A_{i}, A_{j}] = 0", ok, witness))
    return report


# ---------------------------------------------------------------------------
# Transfer matrices (periodic chain)


def transfer_matrix(inst: RKInstance, z: Sequence[Fraction], u: Fraction) -> MatrixOp:
    """tau(z; u) = Tr_a R_an(u, z_n) ... R_a1(u, z_1) with the auxiliary space last"""
    if inst.kind != MATRIX:
        raise UnsupportedFamily("Transfer matrices are built for matrix instances")
    n = inst.n
    a = n + 1
    out = MatrixOp.identity(2 ** a)
    for j in range(n, 0, -1):
        out = out * inst.r_pair(a, j, u, z[j - 1], a)
    return partial_trace_last(out)


def transfer_operator(inst: RKInstance, u: Fraction, probes: Sequence[Vector] = ()) -> ConnectionOperator:
    return _mult(inst, lambda z: transfer_matrix(inst, z, u), probes, f"tau({u})")


def periodic_transfer_suite(inst: RKInstance, probes: Sequence[Vector], lambdas: int = 5, seed: int = 0,
                            magnitude: int = 97) -> Report:
    """
    Commutativity of tau(z) and tau(lambda z), homogeneity in the spectral
    ratio, tau(z; z_k) against the periodic connection and [A_k, tau] = 0

    The last two need the unit shift and no twist.
    """
    report = Report('periodic-transfer', config={'instance': inst.name, 'lambdas': lambdas, 'seed': seed})
    report.add_point(inst.point)
    rng = np.random.default_rng(seed)
    one = Fraction(1)
    for p, z in enumerate(probes):
        try:
            base = transfer_matrix(inst, z, one)
            for lam in random_spectral(rng, lambdas, magnitude):
                scaled = transfer_matrix(inst, [lam * v for v in z], one)
                report.add(check(f"transfer-commute:p{p}", "[tau(z), tau(lambda z)] = 0",
                                 base.commutator(scaled).is_zero(), {'lambda': str(lam)}))
                report.add(check(f"transfer-homogeneous:p{p}", "tau(lambda z; 1) = tau(z; 1/lambda)",
                                 scaled == transfer_matrix(inst, z, 1 / lam), {'lambda': str(lam)}))
        except POLE_ERRORS as exc:
            report.add(Check(f"spectral-pole:p{p}", "spectral values avoid poles", INFO, {'error': str(exc)}))

    unit_shift = all(inst.shift_map(k).is_identity() for k in range(1, inst.n + 1))
    if not unit_shift or inst.twist is not None:
        report.add(Check("transfer-connection", "[A_k, tau] = 0 is checked at unit shift without twist", INFO,
                         {'instance': inst.name}))
        return report
    for u in random_spectral(rng, 2, magnitude):
        tau = transfer_operator(inst, u, probes)
        for k in range(1, inst.n + 1):
            a_k = build_connection(inst, k, FLAVOR_PERIODIC, probes)
            report.add(check(f"transfer-connection:{k}", "[A_k, tau(u)] = 0", a_k.commutator(tau).is_zero(),
                             {'u': str(u)}))
    for k in range(1, inst.n + 1):
        a_k = build_connection(inst, k, FLAVOR_PERIODIC, probes)
        ok = all(a_k.coefficient(z) == transfer_matrix(inst, z, z[k - 1]) for z in probes)
        report.add(check(f"transfer-at-site:{k}", "tau(z; z_k) = A_k", ok))
    return report


def identity_transfer_checks(n: int, probes: Sequence[Vector]) -> List[Check]:
    """With R = 1 the transfer matrix is 2 times the unit"""
    inst = RKInstance.identity_r(n)
    checks: List[Check] = []
    for p, z in enumerate(probes):
        tau = transfer_matrix(inst, z, Fraction(1))
        checks.append(check(f"transfer-identity:p{p}", "tau = 2 for R = 1", tau == 2))
    return checks


# ---------------------------------------------------------------------------
# Suites


class QkzOperations:
    """R-matrix instances, connection families and the q-KZ suites"""

    @staticmethod
    def apply(operation: str, **kwargs):
        """
        Dispatch a named q-KZ operation

        Args:
            operation: one of validate_instance, build_connection, flatness_check,
                periodic_transfer_suite, instance_checks, flatness_suite, periodic_suite
            **kwargs: Arguments of the operation

        Returns:
            Result of the operation
        """
        if operation == 'validate_instance':
            return validate_instance(**kwargs)
        elif operation == 'build_connection':
            return build_connection(**kwargs)
        elif operation == 'flatness_check':
            return flatness_check(**kwargs)
        elif operation == 'periodic_transfer_suite':
            return periodic_transfer_suite(**kwargs)
        elif operation == 'instance_checks':
            return QkzOperations.instance_checks(**kwargs)
        elif operation == 'flatness_suite':
            return QkzOperations.flatness_suite(**kwargs)
        elif operation == 'periodic_suite':
            return QkzOperations.periodic_suite(**kwargs)
        else:
            raise ValueError(f"Unknown q-KZ operation: {operation}")

    @staticmethod
    def instance_checks(inst: RKInstance, probes: Sequence[Vector], trials: int = 3, seed: int = 0,
                        magnitude: int = 97) -> Report:
        """
        Validate one instance, then check both connection families, the
        boundary transcription and the shift parts against the rho images
        """
        report = Report('qkz-instance', config={'instance': inst.name})
        report.merge(validate_instance(inst, trials, seed, magnitude))
        n = inst.n
        backend = connection_backend(inst, probes)
        families: Dict[str, List[ConnectionOperator]] = {}
        for flavor in (FLAVOR_A, FLAVOR_ABAR, FLAVOR_BOUNDARY):
            try:
                families[flavor] = connection_family(inst, flavor, probes)
            except PoleError as exc:
                report.add(check(f"build:{flavor}:{inst.name}", "connections are regular at the probes", False,
                                 {'error': str(exc)}))
                continue
            report.merge(flatness_check(families[flavor], f"{flavor}:{inst.name}"))
            for k, op in enumerate(families[flavor], 1):
                report.add(check(f"shift-part:{flavor}:{k}", "substitution part of A_k is D_z_k",
                                 op.substitution == inst.shift_map(k), {'found': str(op.substitution)}))

        for flavor, family in ((FLAVOR_A, 'J'), (FLAVOR_ABAR, 'Jbar')):
            if flavor not in families:
                continue
            for k, word in enumerate(jm_words(C1, family, n), 1):
                report.add(check(f"rho-image:{flavor}:{k}", f"{flavor}_k = rho({family}_k)",
                                 families[flavor][k - 1] == backend.evaluate(word), {'word': str(word)},
                                 backend.name))
        if FLAVOR_A in families and FLAVOR_BOUNDARY in families:
            for k in range(1, n + 1):
                report.add(check(f"dressed:{k}", "K_k(z_k) Kb_k(sigma z_k) = A_k",
                                 families[FLAVOR_BOUNDARY][k - 1] == families[FLAVOR_A][k - 1]))
        if inst.kbar == KBAR_ONE and FLAVOR_BOUNDARY in families:
            for k in range(1, n + 1):
                report.add(check(f"reduced:{k}", "A_k with K-bar = 1 equals its reduced form",
                                 reduced_connection(inst, k, probes) == families[FLAVOR_BOUNDARY][k - 1]))
        return report

    @staticmethod
    def flatness_suite(n: int = 3, d: int = 2, seed: int = 0, magnitude: int = 97, trials: int = 2,
                       probes: int = 2, max_dim: Optional[int] = None) -> Report:
        """
        Both connection families for the BMW instance with K-bar = 1 and with
        a generic shift, and for Jimbo instances in every K-bar mode

        Args:
            n: Number of sites
            d: Degree of the cyclotomic quotient behind the BMW instance
            trials: Random triples per validation identity
            probes: Probe vectors per connection comparison
        """
        report = Report('qkz-flatness', config={'n': n, 'd': d, 'seed': seed, 'magnitude': magnitude,
                                                'trials': trials})
        vectors = probe_vectors(n, probes, seed, magnitude)
        affine = AffineBmwOperations.build_affine(n, d, seed=seed, magnitude=magnitude, max_dim=max_dim)
        report.add_point(affine.point)
        rng = np.random.default_rng(seed)
        c_prime = random_spectral(rng, 1, magnitude, [affine.c])[0]
        instances = [
            RKInstance.from_bmw(affine, KBAR_ONE),
            RKInstance.from_bmw(affine, KBAR_ONE, c_prime, name='bmw-shifted'),
            RKInstance.from_bmw(affine, KBAR_SHIFT, name='bmw-shift'),
        ]
        for mode in KBAR_MODES:
            scale = random_spectral(rng, 1, magnitude)[0] if mode == KBAR_SCALAR else 1
            instances.append(RKInstance.random_jimbo(n, seed, magnitude, shifted=True, kbar=mode, kbar_scale=scale))
        for inst in instances:
            report.merge(QkzOperations.instance_checks(inst, vectors, trials, seed, magnitude))
        logger.info("qkz-flatness: %d checks, %d failures", len(report.checks), len(report.failures))
        return report

    @staticmethod
    def periodic_suite(n: int = 3, seed: int = 0, magnitude: int = 97, probes: int = 2,
                       lambdas: int = 5) -> Report:
        """
        Periodic connections against rho(Jbar'_k), their flatness, and the
        transfer-matrix identities

        The twisted instance with a generic shift carries the connection checks;
        the untwisted instance at unit shift carries the transfer checks.
        """
        n = max(n, MIN_RANK[A1X])
        report = Report('periodic', config={'n': n, 'seed': seed, 'magnitude': magnitude})
        vectors = probe_vectors(n, probes, seed, magnitude)
        twisted = RKInstance.random_jimbo(n, seed, magnitude, shifted=True, twisted=True)
        plain = RKInstance.random_jimbo(n, seed + 1, magnitude, shifted=False)
        for inst in (twisted, plain):
            report.add_point(inst.point)
            backend = periodic_backend(inst, vectors)
            report.extend(check_homomorphism(BraidPresentation(A1X, n).presentation(), backend.images,
                                             backend.unit, name=f"periodic:{inst.name}", backend=backend.name))
            family = connection_family(inst, FLAVOR_PERIODIC, vectors)
            report.merge(flatness_check(family, f"periodic:{inst.name}"))
            for k, word in enumerate(jm_words(A1X, "Jbar'", n), 1):
                report.add(check(f"rho-image:periodic:{k}", "A_k = rho(Jbar'_k)",
                                 family[k - 1] == backend.evaluate(word), {'word': str(word)}, backend.name))
        report.merge(periodic_transfer_suite(plain, vectors, lambdas, seed, magnitude))
        report.extend(identity_transfer_checks(n, vectors))
        logger.info("periodic: %d checks, %d failures", len(report.checks), len(report.failures))
        return report
