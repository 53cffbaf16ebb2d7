import json

import pytest
from click.testing import CliRunner

from oracle.realisable import trop_linear_ideal
from utils.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def run_json(runner, args):
    res = runner.invoke(cli, ['--json'] + args)
    return res, json.loads(res.output) if res.exit_code in (0, 1) else None


class TestMatroidCommands:
    def test_check_registered(self, runner):
        res, data = run_json(runner, ['matroid', 'check', 'vamos'])
        assert res.exit_code == 0
        assert data['result']['bases'] == 65
        assert data['result']['rank'] == 4

    def test_local_json_flag(self, runner):
        res = runner.invoke(cli, ['matroid', 'check', 'u23', '--json'])
        assert res.exit_code == 0
        assert json.loads(res.output)['command'] == 'matroid check'

    def test_bad_file(self, runner, tmp_path):
        path = write_json(tmp_path / 'bad.json', {'format': 'matroid/v1', 'n': 4, 'bases': [[0, 1], [2, 3]]})
        res = runner.invoke(cli, ['matroid', 'check', path])
        assert res.exit_code == 2

    def test_unknown_name(self, runner):
        assert runner.invoke(cli, ['matroid', 'info', 'fano7']).exit_code == 2

    def test_circuits_file(self, runner, tmp_path):
        path = write_json(tmp_path / 'm.json', {'format': 'matroid/v1', 'n': 3, 'circuits': [[0, 1, 2]]})
        res, data = run_json(runner, ['matroid', 'circuits', path])
        assert res.exit_code == 0
        assert data['result']['circuits'] == [[0, 1, 2]]
        assert data['inputs']['source'].startswith('sha256:')


class TestTlsCommands:
    def test_check_space(self, runner, tmp_path):
        path = write_json(tmp_path / 'l.json', {'format': 'tls/v1', 'n': 3, 'circuits': [{'coords': ['0', '1/2', 'inf']}]})
        res, data = run_json(runner, ['tls', 'check', path])
        assert res.exit_code == 0
        assert data['result']['elimination'] is True
        assert (data['result']['rank'], data['result']['dim']) == (2, 1)

    def test_not_an_antichain(self, runner, tmp_path):
        path = write_json(tmp_path / 'l.json', {'format': 'tls/v1', 'n': 3, 'circuits': [
            {'coords': ['0', '0', 'inf']}, {'coords': ['0', '0', '0']}]})
        assert runner.invoke(cli, ['tls', 'check', path]).exit_code == 2


class TestBergmanCommands:
    def test_member(self, runner):
        res, data = run_json(runner, ['bergman', 'member', '--matroid', 'u23', '--w', '0,0,5'])
        assert res.exit_code == 0
        assert data['result']['member'] is True

    def test_non_member(self, runner):
        res = runner.invoke(cli, ['bergman', 'member', '--matroid', 'u23', '--w', '0,1,2'])
        assert res.exit_code == 1

    def test_weight_length(self, runner):
        res = runner.invoke(cli, ['bergman', 'member', '--matroid', 'u23', '--w', '0,1'])
        assert res.exit_code == 2


class TestPolyAndIdealCommands:
    def test_poly_eval(self, runner, tmp_path):
        path = write_json(tmp_path / 'f.json', {'format': 'poly/v1', 'n': 2, 'terms': [
            {'exp': [1, 0], 'coef': 1}, {'exp': [0, 1], 'coef': 1}, {'exp': [0, 0], 'coef': 3}]})
        res, data = run_json(runner, ['poly', 'eval', path, '--w', '0,0'])
        assert res.exit_code == 0
        assert data['result']['value'] == '1/1'

    def test_poly_index_table(self, runner):
        res, data = run_json(runner, ['poly', 'index', '2', '2'])
        assert res.exit_code == 0
        rows = data['result']['monomials']
        assert [row['exp'] for row in rows] == [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0]]
        assert [row['index'] for row in rows] == list(range(6))
        assert rows[3]['degree'] == 2

    def test_poly_index_single_monomial(self, runner):
        res, data = run_json(runner, ['poly', 'index', '3', '2', '--exp', '0,0,1'])
        assert data['result']['index'] == 1
        assert runner.invoke(cli, ['poly', 'index', '3', '2', '--exp', '1,0']).exit_code == 2
        assert runner.invoke(cli, ['poly', 'index', '3', '40']).exit_code == 2

    def test_ideal_hilbert(self, runner, tmp_path):
        path = write_json(tmp_path / 'i.json', trop_linear_ideal(2, [[1, 1, 1]], 3, 2).to_json())
        res, data = run_json(runner, ['ideal', 'hilbert', path])
        assert res.exit_code == 0
        assert [row['H'] for row in data['result']['hilbert']] == [1, 3, 6]
        assert runner.invoke(cli, ['ideal', 'hilbert', path, '--D', '3']).exit_code == 2
        res, data = run_json(runner, ['ideal', 'hilbert', path, '--D', '1'])
        assert [row['H'] for row in data['result']['hilbert']] == [1, 3]

    def test_ideal_degree_option(self, runner, tmp_path):
        path = write_json(tmp_path / 'i.json', trop_linear_ideal(2, [[1, 1, 1]], 3, 2).to_json())
        res, data = run_json(runner, ['ideal', 'initial', path, '--D', '1'])
        assert res.exit_code == 0
        assert data['result']['hilbert'] == [1, 3]
        assert len(data['result']['w']) == 3
        res, data = run_json(runner, ['ideal', 'saturate', path, '--D', '1'])
        assert data['result']['hilbert_after'] == [1, 3]
        res, data = run_json(runner, ['ideal', 'indep', path, '--D', '1'])
        assert res.exit_code == 0
        assert runner.invoke(cli, ['ideal', 'indep', path, '--D', '5']).exit_code == 2

    def test_ideal_variety(self, runner, tmp_path):
        path = write_json(tmp_path / 'i.json', trop_linear_ideal(2, [[1, 1, 1]], 3, 2).to_json())
        res, data = run_json(runner, ['ideal', 'variety', path, '--w', '0,1,1'])
        assert res.exit_code == 1
        assert data['result']['monomial'] == {'degree': 1, 'exp': [1, 0, 0]}

    def test_oracle_trop_ideal(self, runner, tmp_path):
        path = write_json(tmp_path / 'forms.json', {'format': 'forms/v1', 'q': 2, 'n': 3, 'D': 2, 'forms': [[1, 1, 1]]})
        res, data = run_json(runner, ['oracle', 'trop-ideal', path])
        assert res.exit_code == 0
        assert data['result']['hilbert'] == [1, 3, 6]


class TestVerifyCommands:
    def test_kronecker(self, runner):
        res, data = run_json(runner, ['oracle', 'kronecker', 'u23', 'u23'])
        assert res.exit_code == 0
        assert data['result']['rank'] == 4

    def test_theorem(self, runner):
        res, data = run_json(runner, ['verify', 'vamos-theorem'])
        assert res.exit_code == 0
        assert data['verdict'] == 'CONTRADICTION_ESTABLISHED'
        assert len(data['citations']) == 1

    def test_theorem_without_bound(self, runner):
        assert runner.invoke(cli, ['verify', 'vamos-theorem', '--no-lv-bound']).exit_code == 1

    def test_unknown_command(self, runner):
        assert runner.invoke(cli, ['frobnicate']).exit_code == 2

    def test_output_is_deterministic(self, runner):
        a = runner.invoke(cli, ['--json', 'bergman', 'indep', '--matroid', 'u23'])
        b = runner.invoke(cli, ['--json', 'bergman', 'indep', '--matroid', 'u23'])
        assert a.exit_code == 0
        assert a.output == b.output
