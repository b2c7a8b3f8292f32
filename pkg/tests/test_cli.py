#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import io
import json
import math

import pytest

from oabounds import ArraySpec, IsResult, TiltProfile, optimal_tilt
from oabounds._cli import RunRequest, build_parser, main, run
from oabounds import disable_logger, enable_logger

EXAMPLE_1 = {"alphabet_sizes": [13, 10, 7, 5], "block_lengths": [20, 20, 20, 20], "strength": 4}
EXAMPLE_2 = {"alphabet_sizes": list(range(21, 61)), "block_lengths": [20]*40, "strength": 20}
PLATEAU = {"alphabet_sizes": [2, 4, 8, 16], "block_lengths": [1, 1, 1, 1], "strength": 1}


@pytest.fixture(autouse=True)
def quiet():
    # Documents only on the captured streams
    disable_logger()
    yield
    enable_logger()


@pytest.fixture
def spec_file(tmp_path):
    def write(doc, name='spec.json'):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def error_of(err):
    return json.loads(err.strip().splitlines()[-1])


def run_main(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_exact(spec_file, capsys):
    path = spec_file(EXAMPLE_1)
    status, out, _ = run_main(capsys, 'exact', path, '--bound', 'rao', '--method', 'dp')
    assert status == 0
    doc = json.loads(out)
    assert doc['value'] == '190051'
    assert doc['mantissa'] == pytest.approx(1.90051)
    assert doc['exponent10'] == 5
    assert doc['method'] == 'dp'
    assert doc['bound'] == 'rao'
    assert 'variant' not in doc


def test_exact_methods_agree(spec_file, capsys):
    path = spec_file({"alphabet_sizes": [3, 2, 4], "block_lengths": [2, 3, 2], "strength": 5})
    for bound in ('rao', 'gv'):
        values = set()
        for method in ('direct', 'dp', 'oracle'):
            status, out, _ = run_main(capsys, 'exact', path, '--bound', bound, '--method', method)
            assert status == 0
            values.add(json.loads(out)['value'])
        assert len(values) == 1


def test_exact_variant(spec_file, capsys):
    path = spec_file({"alphabet_sizes": [2, 3], "block_lengths": [2, 2], "strength": 4})
    status, out, _ = run_main(capsys, 'exact', path, '--bound', 'gv-expectation')
    assert status == 0
    doc = json.loads(out)
    assert doc['variant'] == 'full'
    assert doc['value'] == '36'

    status, out, _ = run_main(capsys, 'exact', path, '--bound', 'gv-expectation', '--variant', 'short-scaled')
    assert json.loads(out)['variant'] == 'short-scaled'


def test_exact_csv(spec_file, capsys):
    status, out, _ = run_main(capsys, 'exact', spec_file(EXAMPLE_1), '--output', 'csv')
    assert status == 0
    header, row = out.splitlines()
    assert header == 'value,mantissa,exponent10,bound,method'
    assert row.startswith('190051,')


def test_rate(spec_file, capsys):
    status, out, _ = run_main(capsys, 'rate', spec_file(EXAMPLE_2), '--bound', 'rao')
    assert status == 0
    doc = json.loads(out)
    assert doc['kind'] == 'rao'
    assert doc['rate'] == pytest.approx(0.113, abs=1e-3)
    assert len(doc['thetas']) == 40
    assert doc['ld_estimate']['n'] == 800

    tilt = TiltProfile.from_dict({k: doc[k] for k in ('lambda_star', 'thetas', 'rate', 'budget', 'constrained')})
    assert tilt == optimal_tilt(ArraySpec.from_dict(EXAMPLE_2), 'rao')


def test_rate_csv(spec_file, capsys):
    status, out, _ = run_main(capsys, 'rate', spec_file(EXAMPLE_1), '--output', 'csv')
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == 'block,alphabet_size,theta'
    assert len(lines) == 5
    assert lines[1].startswith('1,13,0.038')


def test_simulate(spec_file, capsys):
    status, out, _ = run_main(capsys, 'simulate', spec_file(EXAMPLE_1), '--samples', '500', '--seed', '7')
    assert status == 0
    doc = json.loads(out)
    for key in ('log_estimate', 'mantissa', 'exponent10', 'std_error', 'ci_low', 'ci_high',
                'hit_fraction', 'samples', 'seed', 'method', 'kind', 'tilt'):
        assert key in doc
    assert doc['method'] == 'is'
    assert doc['samples'] == 500
    assert doc['seed'] == 7
    assert set(doc['tilt']) >= {'lambda_star', 'thetas', 'rate'}

    # Round-trip through the result type
    result = IsResult.from_dict(doc)
    assert result.to_dict() == doc

    status, out, _ = run_main(capsys, 'simulate', spec_file(EXAMPLE_1), '--samples', '500', '--plain')
    doc = json.loads(out)
    assert doc['method'] == 'mc'
    assert doc['log_estimate'] is None
    assert IsResult.from_dict(doc).log_estimate == -math.inf


def test_sweep(spec_file, capsys):
    status, out, _ = run_main(capsys, 'sweep', spec_file(PLATEAU), '--steps', '5')
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == 'mu,rao_rate,gv_rate'
    assert len(lines) == 6

    rows = [tuple(float(v) for v in line.split(',')) for line in lines[1:]]
    assert [r[0] for r in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert rows[-1][2] == pytest.approx(0.25*math.log(1024), abs=1e-10)

    status, out, _ = run_main(capsys, 'sweep', spec_file(PLATEAU), '--steps', '3', '--output', 'json')
    doc = json.loads(out)
    assert [row['mu'] for row in doc] == [0.0, 0.5, 1.0]


def test_levelcurves(spec_file, capsys):
    status, out, _ = run_main(capsys, 'levelcurves', spec_file(EXAMPLE_1), '--grid', '5')
    assert status == 0
    limit, prelimit = out.split('\n\n')
    limit, prelimit = limit.splitlines(), prelimit.splitlines()
    assert limit[0] == prelimit[0] == 'x,tau,value'
    assert len(limit) == 1 + 5*5
    assert len(prelimit) == 1 + 3*81

    status, out, _ = run_main(capsys, 'levelcurves', spec_file(EXAMPLE_1), '--grid', '3', '--output', 'json')
    doc = json.loads(out)
    assert len(doc['limit']) == 9
    assert doc['prelimit'][0]['value'] == pytest.approx(math.log(190051)/80)


def test_opcount(spec_file, capsys):
    status, out, _ = run_main(capsys, 'opcount', spec_file(EXAMPLE_2))
    assert status == 0
    assert json.loads(out)['value'] == '410891126800'


def test_errors(spec_file, capsys, tmp_path):
    # Missing file
    status, out, err = run_main(capsys, 'exact', str(tmp_path / 'missing.json'))
    assert status == 1
    assert out == ''
    assert error_of(err)['error'] == 'FileNotFoundError'

    # Strength larger than the row length
    path = spec_file({"alphabet_sizes": [2], "block_lengths": [3], "strength": 6}, 'bad.json')
    status, _, err = run_main(capsys, 'exact', path)
    assert status == 1
    assert error_of(err)['error'] == 'ValueError'

    # Unknown key
    path = spec_file({**EXAMPLE_1, 'name': 'x'}, 'extra.json')
    status, _, err = run_main(capsys, 'rate', path)
    assert error_of(err)['error'] == 'KeyError'

    # Oracle size guard
    status, _, err = run_main(capsys, 'exact', spec_file(EXAMPLE_1), '--method', 'oracle')
    assert status == 1
    assert error_of(err)['error'] == 'EnumerationSizeError'

    # The GV sum is not an expectation
    status, _, err = run_main(capsys, 'simulate', spec_file(EXAMPLE_1), '--bound', 'gv')
    assert status == 1

    path = tmp_path / 'broken.json'
    path.write_text('{"alphabet_sizes": [2')
    status, _, err = run_main(capsys, 'rate', str(path))
    assert error_of(err)['error'] == 'JSONDecodeError'


def test_main_usage_errors(spec_file, capsys):
    path = spec_file(EXAMPLE_1)
    for argv in (
        ['exact', path, '--method', 'guess'],
        ['exact', path, '--bound', 'hamming'],
        ['simulate', path, '--samples', 'x'],
        ['sweep', path, '--steps', '1.5'],
        ['exact'],
        ['bounds', path],
        [],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
        doc = error_of(capsys.readouterr().err)
        assert doc['error'] == 'UsageError'
        assert doc['message'].startswith('oabounds')

    with pytest.raises(SystemExit) as exc:
        main(['--version'])
    assert exc.value.code == 0


def test_run_request(spec_file):
    path = spec_file(EXAMPLE_1)
    args = build_parser().parse_args(['sweep', path, '--mu-to', '0.5'])
    request = RunRequest.from_namespace(args)
    assert request.output == 'csv'
    assert request.options == {'mu_from': 0.0, 'mu_to': 0.5, 'steps': 101}

    out = io.StringIO()
    assert run(RunRequest('opcount', path), out) == 0
    assert json.loads(out.getvalue())['value'] == '60'

    with pytest.raises(ValueError):
        RunRequest('plot', path)
    with pytest.raises(ValueError):
        RunRequest('exact', path, output='xml', options={'method': 'dp', 'variant': 'full'})
    with pytest.raises(KeyError):
        RunRequest('rate', path, options={'samples': 10})
    with pytest.raises(ValueError):
        RunRequest('exact', path, options={'method': 'guess', 'variant': 'full'})
    with pytest.raises(ValueError):
        RunRequest('sweep', path, options={'mu_from': 0.0, 'mu_to': 2.0, 'steps': 3})
