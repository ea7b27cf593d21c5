import pytest

from jucys_workbench import Report, SuiteConfig, Workbench
from jucys_workbench.errors import ConfigError
from jucys_workbench.presentation import ClosedAlgebra


@pytest.fixture
def bench():
    return Workbench(SuiteConfig(suite='bmw-identities', n=2, trials=1, magnitude=97))


def test_kwargs_override_config():
    bench = Workbench(SuiteConfig(n=4), n=2, seed=5)
    assert bench.config.n == 2
    assert bench.config.seed == 5
    assert 'seed=5' in repr(bench)


def test_invalid_config_is_rejected():
    with pytest.raises(ConfigError):
        Workbench(n=0)


def test_run_single_suite(bench):
    report = bench.run()
    assert isinstance(report, Report)
    assert report.suite == 'bmw-identities'
    assert report.ok, report.failures
    assert report.config['n'] == 2
    assert 'out' not in report.config
    assert any(c.id == 'dimension:n=2' for c in report.checks)
    assert any(c.id == 'bh-trace:n=2' for c in report.checks)


def test_run_is_deterministic(bench):
    assert bench.run().dumps() == bench.run().dumps()


def test_unknown_suite(bench):
    with pytest.raises(ValueError):
        bench.run('no-such-suite')


def test_dims(bench):
    rows = bench.dims('bmw')
    assert [r['dim'] for r in rows] == [1, 3]
    assert all(r['dim'] == r['expected'] for r in rows)
    hecke = Workbench(suite='bmw-identities', n=3, magnitude=97).dims('hecke')
    assert [r['dim'] for r in hecke] == [1, 2, 6]
    assert 'dim' in bench.dims_text('bmw')
    assert bench.dims('bmw', only=True) == rows[-1:]
    with pytest.raises(ValueError):
        bench.dims('lie')


def test_export_structure_round_trips(bench):
    closed = bench.structure('hecke')
    data = bench.export_structure('hecke')
    assert len(data['basis']) == 2
    assert closed.same_tables(ClosedAlgebra.from_export(data))


def test_export_instance(bench):
    assert bench.export_instance('identity')['n'] == 2
    assert bench.export_instance('jimbo')['family'] == 'jimbo'
    with pytest.raises(ValueError):
        bench.export_instance('xxz')


def test_export_hamiltonians():
    data = Workbench(suite='bethe', n=1, degree=2, seed=3, magnitude=97).export_hamiltonians()
    assert data['n'] == 1
    assert len(data['zs']) == 1
    low, high = data['degree_range']
    assert low <= high
    assert set(data['phi']) == set(range(len(data['phi'])))
