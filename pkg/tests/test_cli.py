import json

from jucys_workbench.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from jucys_workbench.presentation import ClosedAlgebra


def test_verify_bmw_identities(capsys):
    code = main(['verify', '--suite', 'bmw-identities', '--n', '3', '--trials', '2', '--seed', '7'], env={})
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data['suite'] == 'bmw-identities'
    assert data['summary']['fail'] == 0
    assert data['config']['seed'] == 7


def test_verify_is_reproducible(tmp_path):
    args = ['verify', '--suite', 'bmw-identities', '--n', '2', '--trials', '1', '--seed', '3']
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert main(args + ['--out', str(first)], env={}) == EXIT_OK
    assert main(args + ['--out', str(second)], env={}) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_text_format(capsys):
    code = main(['verify', '--suite', 'bmw-identities', '--n', '2', '--trials', '1', '--format', 'text'], env={})
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith('suite: bmw-identities')


def test_invalid_n_is_usage_error(capsys):
    assert main(['verify', '--suite', 'bmw-identities', '--n', '0'], env={}) == EXIT_USAGE
    assert 'n must be at least 1' in capsys.readouterr().err


def test_unknown_suite_is_usage_error():
    assert main(['verify', '--suite', 'everything'], env={}) == EXIT_USAGE


def test_missing_config_file(tmp_path):
    assert main(['verify', '--config', str(tmp_path / 'none.cfg')], env={}) == EXIT_USAGE


def test_config_file_and_env_seed(tmp_path, capsys):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text("suite = bmw-identities\nn = 2\ntrials = 1\n")
    assert main(['verify', '--config', str(cfg)], env={'JUCYS_SEED': '13'}) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['config']['seed'] == 13


def test_dims_bmw(capsys):
    assert main(['dims', '--algebra', 'bmw', '--n', '4'], env={}) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert '105' in lines[-1]


def test_dims_only_prints_the_top_row(capsys):
    assert main(['dims', '--algebra', 'bmw', '--n', '3', '--only'], env={}) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[1].split() == ['bmw', '3', '15', '15']


def test_export_structure_bmw2(capsys):
    assert main(['export', 'structure', '--algebra', 'bmw', '--n', '2'], env={}) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert len(data['basis']) == 3
    assert {row[0] for row in data['tables']} == {'T1', 'T1^-1', 'K1'}
    assert ClosedAlgebra.from_export(data).dim == 3


def test_export_structure_hecke_has_no_kappa(capsys):
    assert main(['export', 'structure', '--algebra', 'hecke', '--n', '3'], env={}) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert len(data['basis']) == 6
    assert not any(row[0].startswith('K') for row in data['tables'])


def test_export_structure_is_seed_fixed(tmp_path):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    for path in (first, second):
        assert main(['export', 'structure', '--n', '3', '--seed', '2', '--out', str(path)], env={}) == EXIT_OK
    assert first.read_text() == second.read_text()


def test_export_identity_instance(capsys):
    assert main(['export', 'instance', '--family', 'identity', '--n', '2'], env={}) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data['n'] == 2


def test_failure_exit_code(monkeypatch, capsys):
    from jucys_workbench import cli
    from jucys_workbench.report import Report, check

    class Failing:
        def __init__(self, config):
            pass

        def run(self):
            report = Report('bmw-identities')
            report.add(check('inverse:1', 'T T^-1 = 1', False, {'support': [1]}))
            return report

    monkeypatch.setattr(cli, 'Workbench', Failing)
    assert main(['verify', '--suite', 'bmw-identities'], env={}) == EXIT_FAILED
    assert json.loads(capsys.readouterr().out)['summary']['fail'] == 1


def test_structural_error_is_logged(monkeypatch, caplog):
    from jucys_workbench import cli
    from jucys_workbench.errors import DimensionOverflow

    class Overflowing:
        def __init__(self, config):
            pass

        def run(self):
            raise DimensionOverflow("closure passed max_dim=10")

    monkeypatch.setattr(cli, 'Workbench', Overflowing)
    with caplog.at_level('ERROR', logger='jucys_workbench.cli'):
        assert main(['verify', '--suite', 'bmw-identities'], env={}) == EXIT_USAGE
    assert 'DimensionOverflow' in caplog.text
