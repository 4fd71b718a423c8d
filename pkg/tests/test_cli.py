"""
Command line: output formats, exit codes and determinism
"""

import json

import numpy as np
import pytest

from app import app
from lib.validators import UsageError
from schemas.reports import RunConfig
from utils.output import CommandResult, format_cell, header, render_csv, render_json

QUIET = ['--log-level', 'ERROR']


def invoke(runner, *args):
    return runner.invoke(app, [*QUIET, *args])


class TestExitCodes:
    def test_ops_passes(self, runner):
        result = invoke(runner, 'ops', '--n', '3', '--gens', 'P12,P23')
        assert result.exit_code == 0
        payload = json.loads(result.stdout)['payload']
        assert payload['order'] == 3
        assert payload['basis_cycles'] == '(2 4 3)(5 7 6)'
        assert payload['fixture_distance'] == 0.0
        assert payload['report']['pass'] is True

    def test_bad_generator_is_usage_error(self, runner):
        result = invoke(runner, 'ops', '--gens', 'P1x')
        assert result.exit_code == 2
        assert 'P1x' in result.output

    def test_failed_check_exits_one(self, runner):
        assert invoke(runner, 'spectrum', '--convention', 'literal').exit_code == 1
        assert invoke(runner, 'bch', '--convention', 'literal').exit_code == 1

    def test_unknown_format_is_usage_error(self, runner):
        assert invoke(runner, '--format', 'xml', 'bch').exit_code == 2

    def test_hard_epsilon_limit(self, runner, monkeypatch, fresh_settings):
        monkeypatch.setenv('COGWHEEL_TEST_MODE', 'false')
        result = invoke(runner, 'perturb', '--scheme', 'operator', '--eps', '1.5', '--in', 'uud')
        assert result.exit_code == 2
        allowed = invoke(runner, 'perturb', '--scheme', 'operator', '--eps', '1.5', '--in', 'uud', '--test-mode')
        assert allowed.exit_code == 0

    def test_diagonal_coefficients_are_checked(self, runner):
        assert invoke(runner, 'perturb', '--scheme', 'diagonal', '--in', 'uud').exit_code == 2
        assert invoke(runner, 'perturb', '--scheme', 'diagonal', '--c', '0.1,0.2', '--in', 'uud').exit_code == 2
        assert invoke(runner, 'perturb', '--scheme', 'operator', '--c', ','.join(['0'] * 8),
                      '--in', 'uud').exit_code == 2

    def test_bad_configuration(self, runner):
        result = invoke(runner, 'perturb', '--scheme', 'exact-hamiltonian', '--in', 'uxd')
        assert result.exit_code == 2
        assert 'position 2' in result.output


class TestCommands:
    def test_spectrum_chain(self, runner):
        result = invoke(runner, 'spectrum', '--T', '2')
        assert result.exit_code == 0
        payload = json.loads(result.stdout)['payload']
        assert [level['degeneracy'] for level in payload['levels']] == [4, 2, 2]
        assert payload['block_basis'] == ['uud', 'duu', 'udu']

    def test_spectrum_cogwheel_csv(self, runner):
        result = invoke(runner, '--format', 'csv', '--no-timestamp', 'spectrum', '--target', 'cogwheel', '-N', '5')
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'index,eigenvalue_re,eigenvalue_im,phase,energy'
        assert len(lines) == 6
        assert lines[1] == '1,1,0,0,0'

    def test_bch_reports_swapped_kappa(self, runner):
        result = invoke(runner, 'bch', '--tol', '1e-10')
        assert result.exit_code == 0
        report = json.loads(result.stdout)['payload']['report']
        assert report['pass'] is True
        assert report['flags']['kappa_swapped'] is True
        assert report['notes']

    def test_perturb_report(self, runner):
        result = invoke(runner, 'perturb', '--scheme', 'exact-hamiltonian', '--eps', '0.1', '--in', 'uud')
        assert result.exit_code == 0
        report = json.loads(result.stdout)['payload']['report']
        assert report['dominant'] == 'duu'
        assert report['classical'] is False
        assert abs(report['norm_squared'] - 1) <= 1e-12
        assert [a['config'] for a in report['amplitudes']][:2] == ['uuu', 'uud']

    def test_diagonal_scheme(self, runner):
        result = invoke(runner, 'perturb', '--scheme', 'diagonal',
                        '--c', '0.3,0.1,0.1,0.1,0.2,0.2,0.2,0.4', '--in', 'ddu')
        assert result.exit_code == 0
        report = json.loads(result.stdout)['payload']['report']
        assert abs(report['max_prob'] - 1) <= 1e-12
        assert report['epsilon'] is None
        assert len(report['c']) == 8

    def test_sweep_long_format(self, runner):
        result = invoke(runner, '--format', 'csv', '--no-timestamp', 'sweep',
                        '--scheme', 'exact-hamiltonian', '--eps', '0.01,0.05,0.1', '--in', 'uud')
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'epsilon,config_in,config_out,re,im,prob'
        assert len(lines) == 25
        assert {line.split(',')[0] for line in lines[1:]} == {'0.01', '0.050000000000000003', '0.10000000000000001'}

    def test_unperturbed_sweep_keeps_polarized_state(self, runner):
        result = invoke(runner, '--format', 'csv', '--no-timestamp', 'sweep',
                        '--scheme', 'exact-hamiltonian', '--eps', '0', '--in', 'uuu')
        rows = [line.split(',') for line in result.stdout.splitlines()[1:]]
        assert len(rows) == 8
        probs = {row[2]: row[5] for row in rows}
        assert probs['uuu'] == '1'
        assert all(p == '0' for config, p in probs.items() if config != 'uuu')

    def test_sweep_needs_epsilons(self, runner):
        assert invoke(runner, 'sweep', '--scheme', 'operator', '--in', 'uud').exit_code == 2

    def test_sweep_with_workers(self, runner):
        args = ['--no-timestamp', 'sweep', '--scheme', 'exact-operator', '--eps', '0.01,0.02', '--in', 'uud,ddu']
        serial = invoke(runner, *args, '--workers', '1')
        threaded = invoke(runner, *args, '--workers', '4')
        assert json.loads(serial.stdout)['payload'] == json.loads(threaded.stdout)['payload']

    def test_sample_rows(self, runner):
        result = invoke(runner, '--format', 'csv', '--no-timestamp', 'sample', '--n-min=-2', '--n-max=2')
        lines = result.stdout.splitlines()
        assert lines[0] == 'n,t_n,re,im'
        assert lines[3] == '0,0,1,0'
        assert len(lines) == 6

    def test_sample_reconstruction(self, runner):
        result = invoke(runner, 'sample', '--omega-max', '2', '--points', '100')
        assert result.exit_code == 0
        payload = json.loads(result.stdout)['payload']
        assert payload['window'] == [-200, 200]
        assert len(payload['reconstruction']['points']) == 100
        assert payload['reconstruction']['max_abs_error'] <= 1e-3

    def test_sample_window_from_settings(self, runner, monkeypatch, tmp_path, fresh_settings):
        (tmp_path / 'config.test.json').write_text(json.dumps({'sampling': {'default_window': 5}}))
        monkeypatch.chdir(tmp_path)
        payload = json.loads(invoke(runner, 'sample').stdout)['payload']
        assert payload['window'] == [-5, 5]
        assert payload['sample_count'] == 11
        explicit = json.loads(invoke(runner, 'sample', '--n-min=-2').stdout)['payload']
        assert explicit['window'] == [-2, 5]

    def test_format_after_command(self, runner):
        result = invoke(runner, 'bch', '--tol', '1e-6', '--format', 'csv')
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0].startswith('# generated_at=')
        assert lines[1] == 'identity,pass,tolerance,max_residual,kappa_swapped'
        assert len(lines) == 3

    def test_command_options_override_global_ones(self, runner, tmp_path):
        result = invoke(runner, '--format', 'csv', 'bch', '--format', 'json')
        assert json.loads(result.stdout)['header']['params'] == {'tol': 1e-10}
        target = tmp_path / 'spectrum.json'
        result = invoke(runner, 'spectrum', '--output', str(target))
        assert result.exit_code == 0
        assert result.stdout == ''
        assert json.loads(target.read_text())['header']['command'] == 'spectrum'
        assert invoke(runner, 'ops', '--format', 'xml').exit_code == 2

    def test_text_format(self, runner):
        result = invoke(runner, '--format', 'text', 'ops')
        assert result.exit_code == 0
        assert 'order 3' in result.stdout
        assert 'uuu uud udu duu ddu dud udd ddd' in result.stdout

    def test_output_file(self, runner, tmp_path):
        target = tmp_path / 'out' / 'bch.json'
        result = invoke(runner, '--output', str(target), 'bch')
        assert result.exit_code == 0
        assert result.stdout == ''
        assert json.loads(target.read_text())['payload']['report']['pass'] is True

    def test_output_directory_from_settings(self, runner, tmp_path, monkeypatch, fresh_settings):
        monkeypatch.setenv('COGWHEEL_OUTPUT_DIR', str(tmp_path))
        result = invoke(runner, '--format', 'csv', 'bch')
        assert result.exit_code == 0
        assert (tmp_path / 'bch.csv').read_text().startswith('# generated_at=')

    @pytest.mark.slow
    def test_verify_all(self, runner):
        result = invoke(runner, 'verify-all')
        assert result.exit_code == 0
        payload = json.loads(result.stdout)['payload']
        assert payload['passed'] is True
        assert len(payload['checks']) == 12
        failed = [c['name'] for c in payload['checks'] if not c['passed']]
        assert failed == []


class TestDeterminism:
    @pytest.mark.parametrize('args', [
        ['sweep', '--scheme', 'exact-hamiltonian', '--eps', '0.01,0.05', '--in', 'uud,ddu'],
        ['spectrum', '--target', 'cogwheel', '-N', '7'],
        ['bch'],
    ])
    def test_repeated_runs_are_identical(self, runner, args):
        first = invoke(runner, '--no-timestamp', *args)
        second = invoke(runner, '--no-timestamp', *args)
        assert first.exit_code == 0
        assert first.stdout == second.stdout
        assert 'generated_at' not in json.loads(first.stdout)['header']

    def test_header_carries_raw_parameters(self, runner):
        result = invoke(runner, 'bch', '--tol', '1e-9')
        document = json.loads(result.stdout)
        assert document['header']['tool'] == 'cogwheel'
        assert document['header']['command'] == 'bch'
        assert document['header']['schema_version'] == '1'
        assert document['header']['params'] == {'tol': 1e-9}
        assert 'generated_at' in document['header']


class TestRendering:
    def test_cells(self):
        assert format_cell(True) == 'true'
        assert format_cell(None) == ''
        assert format_cell(0.1) == '0.10000000000000001'
        assert format_cell(np.float64(2.0)) == '2'
        assert format_cell('uud') == 'uud'

    def test_json_normalizes_complex_and_nan(self):
        run_config = RunConfig(command='ops', include_timestamp=False)
        result = CommandResult(command='ops', payload={'z': 1 + 2j, 'x': float('nan'), 'v': np.arange(2)})
        document = json.loads(render_json(result, run_config))
        assert document['payload'] == {'z': [1.0, 2.0], 'x': None, 'v': [0, 1]}
        assert header(run_config)['params'] == {}

    def test_csv_needs_columns(self):
        with pytest.raises(UsageError):
            render_csv(CommandResult(command='bch', payload={}), RunConfig(command='bch'))

    def test_exit_code_follows_passed(self):
        assert CommandResult(command='bch', payload={}, passed=False).exit_code == 1
        assert CommandResult(command='bch', payload={}, passed=None).exit_code == 0
