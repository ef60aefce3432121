import json

import pytest

from condsym.scripts.script_condsym import (EXIT_FAILURES, EXIT_NUMERIC,
                                            EXIT_OK, EXIT_USAGE, main)


def test_verify_lie_operators():
    assert main(['--probes', '16', 'verify-operators', 'lie.A1.*']) == EXIT_OK


def test_unknown_operator_key():
    assert main(['verify-operators', 'thm1.case9*']) == EXIT_USAGE


def test_bad_option():
    assert main(['--bogus', 'catalog', 'operators']) == EXIT_USAGE


def test_verify_solution_with_parameter():
    assert main(['--probes', '16', 'verify-solutions', 'lie.4', '--eps', '1']) == EXIT_OK


def test_derive_reference_system(capsys):
    assert main(['derive', '1/vx']) == EXIT_OK
    assert 'matches reference system: yes' in capsys.readouterr().out


def test_derive_non_rational():
    assert main(['derive', 'exp(vx)']) == EXIT_USAGE


def test_derive_syntax_error():
    assert main(['derive', '1/(vx']) == EXIT_USAGE


def test_reduce(capsys):
    assert main(['reduce', 'thm1.case1.eps=0.f=inv']) == EXIT_OK
    assert 'phi_ww' in capsys.readouterr().out


def test_reduce_without_invariants():
    assert main(['reduce', 'potential.cot']) == EXIT_USAGE


def test_simulate_negative_oracle():
    args = ['simulate', '--oracle', 'lie.5', '--t0', '-1', '--t1', '1', '--n', '21']
    assert main(args) == EXIT_NUMERIC


def test_simulate_table(capsys, tmp_path):
    path = tmp_path / 'errors.csv'
    args = ['simulate', '--oracle', 'lie.4.eps=1', '--t0', '1', '--t1', '1.1',
            '--n', '11', '--csv', str(path)]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('level,h,dt,max_err,l2_err,order')
    assert path.read_text() == out


def test_catalog_listing(capsys):
    assert main(['catalog', 'arrows', 'arrow.lie.*']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'arrow.lie.8' in out and 'arrow.nonlie.1' not in out


def test_json_report_is_reproducible(tmp_path):
    paths = [tmp_path / 'first.json', tmp_path / 'second.json']
    for path in paths:
        args = ['--probes', '16', '--no-timestamps', '--json', str(path),
                'verify-operators', 'lie.A2.*']
        assert main(args) == EXIT_OK
    first, second = (p.read_text() for p in paths)
    assert first == second
    report = json.loads(first)
    assert report['schema_version'] == 1
    assert report['summary'] == {'total': 5, 'passed': 5, 'failed': 0}
    assert 'timestamp' not in report
    assert [r['key'] for r in report['records']] == sorted(r['key'] for r in report['records'])


@pytest.mark.slow
def test_all_arrows():
    assert main(['--jobs', '4', 'arrows', '--all']) == EXIT_OK


def test_failures_exit_code(monkeypatch):
    from condsym.catalog import operator_lib as module
    from condsym.jets import ReductionOperator

    entry = module.OperatorEntry('potential', lambda: ReductionOperator('v', 1, 0, 'x^2'))
    monkeypatch.setitem(module.operator_lib, 'broken', entry)
    assert main(['verify-operators', 'broken']) == EXIT_FAILURES
