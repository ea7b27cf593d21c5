"""
Core module for JucysWorkbench
Contains the Workbench class that maps suite names onto the operation handlers
"""

import logging
from dataclasses import asdict, replace
from typing import Any, Dict, List, Optional

import numpy as np

from .config import SUITES, SuiteConfig
from .operations import (
    AffineBmwOperations,
    BetheOperations,
    BmwOperations,
    BraidOperations,
    QkzOperations,
    TraceOperations,
)
from .operations.bethe import phi_table, transfer_matrix
from .operations.bmw import random_spectral
from .operations.qkz import RKInstance
from .operations.trace import shared_tower
from .report import Report, dims_table
from .scalar import BMW_GUARDS, sample_generic

logger = logging.getLogger(__name__)

ALGEBRAS = ('bmw', 'hecke', 'affine')

# Hecke closures stay cheap up to this many strands
HECKE_MAX_N = 5

# Braid-Hecke closures are experimental beyond this
BRAID_HECKE_MAX_N = 3


class Workbench:
    """
    Runs named verification suites for one configuration

    Every suite is delegated to the apply method of the matching
    *Operations class and returns a Report.
    """

    def __init__(self, config: Optional[SuiteConfig] = None, **kwargs):
        """
        Args:
            config: Validated suite configuration
            **kwargs: Field overrides applied on top of config
        """
        config = config or SuiteConfig()
        if kwargs:
            config = replace(config, **kwargs)
        self.config = config.validate()

    def __repr__(self) -> str:
        return f"Workbench(suite={self.config.suite}, n={self.config.n}, seed={self.config.seed})"

    def run(self, suite: Optional[str] = None) -> Report:
        suite = suite or self.config.suite
        if suite == 'all':
            report = Report('all', config=self._config_json())
            for name in SUITES[:-1]:
                logger.info("Running suite %s", name)
                report.merge(self._execute_suite(name))
            return report
        return self._execute_suite(suite)

    def _config_json(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self.config).items() if k not in ('out', 'fmt', 'verbose')}

    def _execute_suite(self, suite: str) -> Report:
        c = self.config
        if suite == 'bmw-identities':
            result = self._bmw_identities()
        elif suite == 'braid-jm':
            result = BraidOperations.apply('suite', n=c.n, d=c.degree, seed=c.seed,
                                           magnitude=c.magnitude, max_dim=c.max_dim)
        elif suite == 'affine-reflection':
            result = self._affine_reflection()
        elif suite == 'trace':
            result = self._trace()
        elif suite == 'bethe':
            result = BetheOperations.apply('bethe_suite', n=c.n, d=c.degree, seed=c.seed, magnitude=c.magnitude,
                                           trials=c.trials, max_dim=c.max_dim)
        elif suite == 'qkz-flatness':
            result = QkzOperations.apply('flatness_suite', n=c.n, d=c.degree, seed=c.seed, magnitude=c.magnitude,
                                         trials=c.trials, max_dim=c.max_dim)
        elif suite == 'periodic':
            result = QkzOperations.apply('periodic_suite', n=c.n, seed=c.seed, magnitude=c.magnitude)
        elif suite == 'cherednik':
            result = BetheOperations.apply('cherednik_suite', n=c.n, d=c.degree, seed=c.seed,
                                           magnitude=c.magnitude, max_dim=c.max_dim)
        else:
            raise ValueError(f"Unknown suite: {suite}")
        result.suite = suite
        result.config = {**self._config_json(), **result.config, 'suite': suite}
        return result

    def _bmw_identities(self) -> Report:
        c = self.config
        report = Report('bmw-identities')
        for i in range(c.trials):
            point = sample_generic(('q', 'nu'), BMW_GUARDS, c.seed + i, c.magnitude)
            instance = BmwOperations.apply('build_bmw', n=c.n, point=point, max_dim=c.max_dim)
            report.merge(BmwOperations.apply('identity_suite', instance=instance, trials=c.trials, seed=c.seed + i,
                                             magnitude=c.magnitude))
            if c.n <= HECKE_MAX_N:
                hecke = BmwOperations.apply('build_hecke', n=c.n, point=point, max_dim=c.max_dim)
                report.merge(BmwOperations.apply('identity_suite', instance=hecke, trials=c.trials,
                                                 seed=c.seed + i, magnitude=c.magnitude))
            if i == 0:
                report.merge(BmwOperations.apply('braid_hecke', n=min(c.n, BRAID_HECKE_MAX_N), point=point,
                                                 max_dim=c.max_dim or 400))
        return report

    def _affine_reflection(self) -> Report:
        c = self.config
        report = AffineBmwOperations.apply('dimension_suite', n=c.n, d=c.degree, seeds=(c.seed, c.seed + 1),
                                           magnitude=c.magnitude, max_dim=c.max_dim)
        instance = AffineBmwOperations.apply('build_affine', n=c.n, d=c.degree, seed=c.seed,
                                             magnitude=c.magnitude, max_dim=c.max_dim)
        report.merge(AffineBmwOperations.apply('reflection_suite', instance=instance, trials=c.trials,
                                               seed=c.seed, magnitude=c.magnitude))
        return report

    def _trace(self) -> Report:
        c = self.config
        ctx = TraceOperations.apply('shared_tower', d=c.degree, top=max(c.n, 2), seed=c.seed,
                                    magnitude=c.magnitude, max_dim=c.max_dim)
        report = TraceOperations.apply('trace_property_suite', ctx=ctx, trials=c.trials, seed=c.seed)
        report.merge(TraceOperations.apply('lemma_identities', ctx=ctx, trials=c.trials, seed=c.seed,
                                           magnitude=c.magnitude))
        return report

    # -- exports

    def dims(self, algebra: str = 'bmw', only: bool = False) -> List[Dict[str, Any]]:
        """Closure dimensions for 1..n strands, or for n strands alone"""
        c = self.config
        if algebra not in ALGEBRAS:
            raise ValueError(f"Unknown algebra '{algebra}', expected one of {ALGEBRAS}")
        rows = []
        for m in range(c.n if only else 1, c.n + 1):
            instance = self.build(algebra, m)
            rows.append({'algebra': algebra, 'n': m, 'dim': instance.dimension, 'expected': instance.expected_dim})
        return rows

    def dims_text(self, algebra: str = 'bmw', only: bool = False) -> str:
        return dims_table(self.dims(algebra, only))

    def build(self, algebra: str, n: Optional[int] = None):
        c = self.config
        n = c.n if n is None else n
        if algebra == 'affine':
            return AffineBmwOperations.apply('build_affine', n=n, d=c.degree, seed=c.seed, magnitude=c.magnitude,
                                             max_dim=c.max_dim)
        point = sample_generic(('q', 'nu'), BMW_GUARDS, c.seed, c.magnitude)
        operation = 'build_bmw' if algebra == 'bmw' else 'build_hecke'
        return BmwOperations.apply(operation, n=n, point=point, max_dim=c.max_dim)

    def structure(self, algebra: str = 'bmw'):
        if algebra not in ALGEBRAS:
            raise ValueError(f"Unknown algebra '{algebra}', expected one of {ALGEBRAS}")
        return self.build(algebra).algebra

    def export_structure(self, algebra: str = 'bmw') -> Dict[str, Any]:
        """Structure constants of the closed algebra, re-importable with ClosedAlgebra.from_export"""
        return self.structure(algebra).export()

    def export_hamiltonians(self) -> Dict[str, Any]:
        """Phi_k tables of the transfer matrix at level n"""
        c = self.config
        ctx = shared_tower(c.degree, c.n + 1, c.seed, c.magnitude, c.max_dim)
        zs = random_spectral(np.random.default_rng(c.seed), c.n, c.magnitude)
        tm = transfer_matrix(ctx, zs, c.seed, c.magnitude)
        low, high = tm.degree_range()
        return {
            'n': c.n,
            'degree': c.degree,
            'point': ctx.point.to_json(),
            'zs': [str(z) for z in zs],
            'denominator': [str(v) for v in tm.denominator],
            'degree_range': [low, high],
            'phi': phi_table(tm).to_dict(orient='index'),
        }

    def export_instance(self, family: str = 'jimbo') -> Dict[str, Any]:
        """RK instance data as JSON with rational strings"""
        c = self.config
        if family == 'jimbo':
            inst = RKInstance.random_jimbo(c.n, c.seed, c.magnitude)
        elif family == 'bmw':
            inst = RKInstance.from_bmw(self.build('affine'))
        elif family == 'identity':
            inst = RKInstance.identity_r(c.n)
        else:
            raise ValueError(f"Unknown instance family '{family}', expected jimbo, bmw or identity")
        return inst.to_json()
