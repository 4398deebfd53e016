import csv
import io
import json

import pytest

from rcutils.complexlib.complex import Complex
from rcutils.complexlib.sampler import SampleParams, sample_complex
from rcutils.rcrun import main
from rcutils.utils.formats import dumps_complex
from rcutils.utils.harness import HITTING_FIELDS, SUMMARY_FIELDS, TRIAL_FIELDS, analyze_complex


def table(text):
    """Parses the first CSV table of an output, skipping the comment line."""
    lines = text.splitlines()
    assert lines[0].startswith('# rcrun ')
    body = []
    for line in lines[1:]:
        if line.startswith('#'):
            break
        body.append(line)
    return list(csv.DictReader(io.StringIO('\n'.join(body))))


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_constants(capsys):
    code, out = run(capsys, 'constants', '--d', '2,3', '--truncation', '10000')
    assert code == 0
    rows = table(out)
    assert [row['d'] for row in rows] == ['2', '3']
    assert float(rows[0]['c_d']) == pytest.approx(2.783, abs=0.002)
    assert float(rows[0]['gamma_d']) == pytest.approx(2.455, abs=0.002)
    assert float(rows[1]['gamma_d']) == pytest.approx(3.089, abs=0.002)
    assert '# tree series at z=1/e' in out


def test_constants_json(capsys):
    code, out = run(capsys, 'constants', '--d', '2', '--truncation', '10000', '--json')
    assert code == 0
    document = json.loads(out)
    assert document['command'] == 'constants'
    assert document['rows'][0]['c_d_2'] == pytest.approx(document['rows'][0]['c_d'], abs=1e-8)
    series = document['tree_series']
    assert abs(series['R'] - 1) <= series['tail_bound']


def test_sample_empty(capsys):
    code, out = run(capsys, 'sample', '--n', '5', '--d', '2', '--c', '0', '--seed', '1')
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith('# rcrun') and 'seed=1' in lines[0]
    assert lines[1:] == ['n 5', 'd 2', 'simplices 0']


def test_sample_then_analyze(tmp_path, capsys):
    path = str(tmp_path / 'y.cplx')
    code, _ = run(capsys, 'sample', '--n', '14', '--d', '2', '--c', '3.0', '--seed', '9',
                  '--out', path)
    assert code == 0
    code, out = run(capsys, 'analyze', '--in', path, '--json')
    assert code == 0
    expected = analyze_complex(sample_complex(SampleParams(n=14, d=2, c=3.0, seed=9)))
    assert json.loads(out)['rows'] == [expected.to_dict()]


def test_analyze_sphere(tmp_path, capsys):
    path = tmp_path / 'sphere.cplx'
    path.write_text(dumps_complex(Complex.boundary(4, 2)))
    code, out = run(capsys, 'analyze', '--in', str(path))
    assert code == 0
    (row,) = table(out)
    assert row['collapsible'] == 'false'
    assert (row['h_d_p2'], row['h_d_p3'], row['h_d_p5']) == ('1', '1', '1')
    assert row['num_boundaries'] == '1'
    assert row['boundaries'] == '0 1 2 3'
    assert row['field_dependent'] == 'false'


def test_analyze_malformed_file(tmp_path, capsys):
    path = tmp_path / 'bad.cplx'
    path.write_text('n 4\nd 2\nsimplices 1\n0 2 1\n')
    code, out = run(capsys, 'analyze', '--in', str(path))
    assert code == 1
    assert out == ''


def test_analyze_missing_file(tmp_path, capsys):
    code, _ = run(capsys, 'analyze', '--in', str(tmp_path / 'missing.cplx'))
    assert code == 1


@pytest.mark.parametrize('argv', [
    [],
    ['sample', '--n', '5', '--d', '2'],
    ['sample', '--n', '5', '--d', '2', '--c', '1', '--p', '0.1'],
    ['sample', '--n', '5', '--d', '2', '--c', '1', '--bogus'],
    ['constants', '--d', 'x'],
    ['--verbosity', 'loud', 'constants', '--d', '2'],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_invalid_parameters(capsys):
    code, _ = run(capsys, 'sample', '--n', '5', '--d', '2', '--c', '10')
    assert code == 1
    code, _ = run(capsys, 'sweep', '--d', '2', '--n', '10')
    assert code == 1
    code, _ = run(capsys, 'sweep', '--d', '2', '--n', '10', '--c', '1', '--trials', '1',
                  '--primes', '4')
    assert code == 1


def test_sweep_is_identical_for_any_jobs(tmp_path, capsys):
    argv = ['sweep', '--d', '2', '--n', '12', '--c', '1.0,3.0', '--trials', '6', '--seed', '5']
    outputs = []
    for jobs in ('1', '3'):
        summary = tmp_path / 'summary{}.csv'.format(jobs)
        code, out = run(capsys, *argv, '--jobs', jobs, '--summary', str(summary))
        assert code == 0
        outputs.append((out, summary.read_text()))
    assert outputs[0] == outputs[1]
    out, summary = outputs[0]
    assert 'seed=5' in out.splitlines()[0]
    assert out.splitlines()[1] == ','.join(TRIAL_FIELDS)
    assert len(table(out)) == 12
    assert summary.splitlines()[1] == ','.join(SUMMARY_FIELDS)
    assert len(table(summary)) == 2


def test_sweep_config_file(tmp_path, capsys):
    config = tmp_path / 'sweep.json'
    config.write_text(json.dumps({'d': 2, 'n_list': [10], 'c_grid': [1.0, 2.0], 'trials': 5,
                                  'seed': 3, 'primes': [2]}))
    code, out = run(capsys, 'sweep', '--config', str(config), '--trials', '2', '--jobs', '1')
    assert code == 0
    rows = table(out)
    assert len(rows) == 4
    assert all(row['h_d_p3'] == '' for row in rows)


def test_sweep_json(tmp_path, capsys):
    summary = tmp_path / 'summary.json'
    code, out = run(capsys, 'sweep', '--d', '2', '--n', '10', '--c', '2.0', '--trials', '3',
                    '--jobs', '1', '--json', '--summary', str(summary))
    assert code == 0
    document = json.loads(out)
    assert len(document['rows']) == 3
    assert set(TRIAL_FIELDS) <= set(document['rows'][0])
    rows = json.loads(summary.read_text())['rows']
    assert set(SUMMARY_FIELDS) <= set(rows[0])
    assert 'pr_hd_zero_not_collapsible' in rows[0]


def test_tree(capsys):
    code, out = run(capsys, 'tree', '--d', '2', '--k', '1', '--gamma', '0,1.0', '--trials', '200',
                    '--seed', '4', '--jobs', '1')
    assert code == 0
    rows = table(out)
    assert float(rows[0]['estimate']) == 1.0
    assert float(rows[1]['rho_k']) == pytest.approx(0.6706, abs=1e-4)


def test_tree_profile(capsys):
    code, out = run(capsys, 'tree', '--d', '2', '--k', '10', '--gamma', '2.0,2.4,2.5,3.0',
                    '--profile')
    assert code == 0
    rows = table(out)
    limits = [float(row['rho_limit']) for row in rows]
    assert limits[0] == pytest.approx(1.0, abs=1e-6)
    assert limits[-1] < 0.99


def test_hitting(capsys):
    code, out = run(capsys, 'hitting', '--n', '10', '--d', '2', '--runs', '3', '--seed', '2',
                    '--jobs', '1')
    assert code == 0
    assert out.splitlines()[1] == ','.join(HITTING_FIELDS)
    rows = table(out)
    assert [row['run'] for row in rows] == ['0', '1', '2']
    assert all(int(row['M_first_core']) <= int(row['M_jump']) for row in rows)


def test_acyclic(capsys):
    code, out = run(capsys, 'acyclic', '--n', '50', '--c', '0', '--trials', '5', '--jobs', '1')
    assert code == 0
    (row,) = table(out)
    assert float(row['estimate']) == 1.0
    assert float(row['reference']) == 1.0
