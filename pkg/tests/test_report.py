import json

from jucys_workbench.report import FAIL, INFO, PASS, Check, Report, check, dims_table
from jucys_workbench.scalar import ParameterPoint


def sample_report() -> Report:
    report = Report('demo', config={'n': 2})
    report.add(check('inverse:1', 'T T^-1 = 1', True, {'support': []}))
    report.add(check('inverse:2', 'T T^-1 = 1', False, {'support': [3]}))
    report.add(Check('spectral-pole:t0', 'spectral values avoid poles', INFO, {'error': 'pole'}))
    report.add_point(ParameterPoint.of(seed=1, q=2, nu=3))
    return report


def test_check_drops_witness_on_pass():
    assert check('a', 'x = x', True, {'support': []}).witness is None
    assert check('a', 'x = y', False, {'support': [1]}).witness == {'support': [1]}


def test_failures_and_summary():
    report = sample_report()
    assert not report.ok
    assert [c.id for c in report.failures] == ['inverse:2']
    summary = report.summary()
    assert summary['pass'] == 1
    assert summary['fail'] == 1
    assert summary['by_group']['inverse'] == {PASS: 1, FAIL: 1}
    assert summary['by_group']['spectral-pole'] == {INFO: 1}


def test_json_schema_and_determinism():
    a, b = sample_report().dumps(), sample_report().dumps()
    assert a == b
    data = json.loads(a)
    assert set(data) == {'suite', 'config', 'points', 'checks', 'notes', 'summary'}
    assert data['points'] == [{'seed': 1, 'assignment': {'nu': '3', 'q': '2'}}]
    failed = [c for c in data['checks'] if c['status'] == FAIL]
    assert failed == [{'id': 'inverse:2', 'anchor': 'T T^-1 = 1', 'status': FAIL, 'witness': {'support': [3]}}]


def test_merge_deduplicates_points():
    report = sample_report()
    report.merge(sample_report())
    assert len(report.points) == 1
    assert len(report.checks) == 6


def test_render_text():
    text = sample_report().render_text()
    assert text.startswith('suite: demo')
    assert 'inverse:2' in text
    assert text.rstrip().endswith('pass=1 fail=1')


def test_empty_report():
    report = Report('empty')
    assert report.ok
    assert report.summary() == {'pass': 0, 'fail': 0, 'by_group': {}}
    assert '(no checks)' in report.render_text()


def test_dims_table():
    text = dims_table([{'algebra': 'bmw', 'n': 4, 'dim': 105, 'expected': 105}])
    assert '105' in text
    assert text.splitlines()[0].split() == ['algebra', 'n', 'dim', 'expected']
