"""Shared seeded fixtures; small magnitudes keep closure arithmetic cheap"""

import pytest

from jucys_workbench.operations.affine_bmw import AffineBmwOperations
from jucys_workbench.operations.bmw import BmwOperations
from jucys_workbench.operations.trace import TowerContext
from jucys_workbench.scalar import BMW_GUARDS, sample_generic

MAGNITUDE = 97


@pytest.fixture(scope='module')
def point():
    return sample_generic(('q', 'nu'), BMW_GUARDS, seed=7, magnitude=MAGNITUDE)


@pytest.fixture(scope='module')
def bmw2(point):
    return BmwOperations.build_bmw(2, point)


@pytest.fixture(scope='module')
def bmw3(point):
    return BmwOperations.build_bmw(3, point)


@pytest.fixture(scope='module')
def hecke3(point):
    return BmwOperations.build_hecke(3, point)


@pytest.fixture(scope='module')
def affine2():
    return AffineBmwOperations.build_affine(2, 2, seed=3, magnitude=MAGNITUDE)


@pytest.fixture(scope='module')
def tower():
    return TowerContext.build(2, 2, seed=3, magnitude=MAGNITUDE)
