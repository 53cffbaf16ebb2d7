import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from semiring.trop_core import INF


def _plain(obj):
    """JSON-safe copy: Fractions become strings, sets become sorted lists."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is INF:
        return 'inf'
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class Report:
    """Command result; identical inputs and seed give byte-identical output."""
    command: str
    seed: int
    inputs: Dict[str, str] = field(default_factory=dict)
    result: Dict[str, object] = field(default_factory=dict)
    verdict: Optional[str] = None
    citations: List[str] = field(default_factory=list)

    def payload(self) -> dict:
        out = {'command': self.command, 'seed': self.seed, 'inputs': self.inputs, 'result': self.result}
        if self.verdict is not None:
            out['verdict'] = self.verdict
        if self.citations:
            out['citations'] = self.citations
        return _plain(out)

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_human(self) -> str:
        data = self.payload()
        lines = ['tropmat {}'.format(self.command), '=' * 30]
        for name, digest in sorted(data['inputs'].items()):
            lines.append('input {}: {}'.format(name, digest))
        lines.append('seed: {}'.format(self.seed))
        for key in sorted(data['result']):
            lines.extend(_render(key, data['result'][key]))
        if self.verdict is not None:
            lines.append('verdict: {}'.format(self.verdict))
        for c in self.citations:
            lines.append('citation: {}'.format(c))
        return '\n'.join(lines)


def _is_table(value) -> bool:
    return isinstance(value, list) and value and all(isinstance(v, dict) for v in value)


def _render(key: str, value) -> List[str]:
    if _is_table(value):
        frame = pd.DataFrame(value)
        frame = frame[sorted(frame.columns)]
        for col in frame.columns:
            frame[col] = frame[col].map(lambda v: json.dumps(v, sort_keys=True, ensure_ascii=False) if isinstance(v, (dict, list)) else v)
        return ['{}:'.format(key), frame.to_string(index=False)]
    if isinstance(value, dict):
        return ['{}: {}'.format(key, json.dumps(value, sort_keys=True, ensure_ascii=False))]
    return ['{}: {}'.format(key, value)]


def hilbert_frame(values: List[int], lower: Optional[List[int]] = None, upper: Optional[List[int]] = None) -> pd.DataFrame:
    frame = pd.DataFrame({'d': list(range(len(values))), 'H': values})
    if lower is not None:
        frame['lower'] = lower
    if upper is not None:
        frame['upper'] = upper
    return frame


def frame_rows(frame: pd.DataFrame) -> List[dict]:
    return [{k: _plain(v) for k, v in row.items()} for row in frame.to_dict(orient='records')]


def monomial_frame(monomials: List[tuple]) -> pd.DataFrame:
    """Canonical index table: one row per monomial in index order."""
    return pd.DataFrame({'index': list(range(len(monomials))), 'degree': [sum(u) for u in monomials],
                         'exp': [list(u) for u in monomials]})
