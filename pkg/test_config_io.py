import json
from fractions import Fraction

import pytest

from utils.config import Config
from utils.exceptions import DimensionError
from utils.io import load_matroid, matroid_to_json, parse_weights
from utils.report import Report, frame_rows, hilbert_frame


class TestConfig:
    def test_defaults(self):
        config = Config(current_date='static')
        assert config.truncation_degree == 3
        assert config.lv_bound == 7
        assert config.max_degree_for(11) == 2
        assert config.max_degree_for(3) == config.max_truncation_degree

    def test_truncation_checks(self):
        config = Config(current_date='static')
        config.check_truncation(3, 2)
        with pytest.raises(ValueError):
            config.check_truncation(3, 40)
        with pytest.raises(ValueError):
            config.check_truncation(11, 3)

    def test_environment_cap(self, monkeypatch):
        monkeypatch.setenv('TROPMAT_MAX_D', '2')
        config = Config(current_date='static')
        assert config.max_truncation_degree == 2
        assert config.truncation_degree == 2
        monkeypatch.setenv('TROPMAT_MAX_D', 'two')
        with pytest.raises(ValueError):
            Config()

    def test_threads(self):
        with pytest.raises(ValueError):
            Config(threads=0)


class TestInputs:
    def test_parse_weights(self):
        assert parse_weights('1/2, -1,0') == [Fraction(1, 2), Fraction(-1), Fraction(0)]
        with pytest.raises(DimensionError):
            parse_weights('0,1', 3)
        with pytest.raises(DimensionError):
            parse_weights('0,inf')

    def test_matroid_file(self, tmp_path):
        M, _ = load_matroid('u23')
        path = tmp_path / 'u23.json'
        path.write_text(json.dumps(matroid_to_json(M)))
        again, digest = load_matroid(str(path))
        assert again.bases == M.bases
        assert digest.startswith('sha256:')


class TestReport:
    def test_json_is_canonical(self):
        a = Report('x', 0, result={'b': Fraction(1, 2), 'a': {frozenset({2, 1})}})
        b = Report('x', 0, result={'a': {frozenset({1, 2})}, 'b': Fraction(1, 2)})
        assert a.to_json() == b.to_json()
        assert json.loads(a.to_json())['result']['b'] == '1/2'

    def test_hilbert_table(self):
        rows = frame_rows(hilbert_frame([1, 3, 6], [1, 3, 6]))
        assert rows[2] == {'d': 2, 'H': 6, 'lower': 6}
        text = Report('ideal hilbert', 0, result={'hilbert': rows}, verdict='ok').to_human()
        assert text.startswith('tropmat ideal hilbert')
        assert 'verdict: ok' in text
