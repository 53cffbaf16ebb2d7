"""
JSON input formats and their loaders.

  matroid/v1   {"n", "bases"} or {"n", "circuits"}, optional "name"
  tls/v1       {"n", "circuits": [{"coords": [...]}]}
  vm/v1        {"matroid": {"n", "bases"}, "valuation": {"0,1": value}}
  tideal/v1    {"n", "D", "homogeneous", "slices": [{"d", "circuits"}]}
  poly/v1      {"n", "terms": [{"exp", "coef"}]}
  forms/v1     {"q", "n", "D", "forms"} or {"q", "n", "D", "generators": [[{"exp", "coef"}]]}
  fmatrix/v1   {"q", "rows"}
"""

import hashlib
import json
import os
from fractions import Fraction
from typing import List, Optional, Tuple

from ideal.tropideal import TruncatedTropicalIdeal
from matroids.matroid import CircuitMatroid, Matroid
from matroids.matroid_pool import matroid_select, representation_select
from matroids.valuated import TropicalLinearSpace, ValuatedMatroid
from oracle.galois import FieldMatrix
from oracle.realisable import trop_linear_ideal, trop_polynomial_ideal
from semiring.trop_core import INF, mask_of, to_fraction
from semiring.troppoly import TropPolynomial
from utils.exceptions import DimensionError, MatroidError


def digest_bytes(data: bytes) -> str:
    return 'sha256:' + hashlib.sha256(data).hexdigest()


def read_json(path: str) -> Tuple[dict, str]:
    with open(path, 'rb') as f:
        raw = f.read()
    return json.loads(raw.decode('utf-8')), digest_bytes(raw)


def _check_format(data: dict, expected: str):
    if data.get('format', expected) != expected:
        raise ValueError("Expected format [{}], got [{}].".format(expected, data.get('format')))


def parse_weights(text: str, n: Optional[int] = None) -> List[Fraction]:
    """'0,0,5' or '1/2,-1,0' into exact rationals."""
    parts = [p for p in text.replace(' ', '').split(',') if p != '']
    out = [to_fraction(p) for p in parts]
    if any(x is INF for x in out):
        raise DimensionError("Weights must be finite, got [{}].".format(text))
    if n is not None and len(out) != n:
        raise DimensionError("Weight [{}] has {} entries, expected {}.".format(text, len(out), n))
    return out


def parse_exponents(text: str) -> Tuple[int, ...]:
    return tuple(int(p) for p in text.replace(' ', '').split(',') if p != '')


def matroid_from_json(data: dict) -> Matroid:
    _check_format(data, 'matroid/v1')
    n = int(data['n'])
    name = data.get('name')
    if 'bases' in data:
        return Matroid(n, [list(B) for B in data['bases']], name=name)
    if 'circuits' in data:
        return CircuitMatroid(n, [mask_of(C) for C in data['circuits']], name=name)
    raise MatroidError("A matroid/v1 object needs 'bases' or 'circuits'.")


def matroid_to_json(M: Matroid) -> dict:
    return {'format': 'matroid/v1', 'n': M.n, 'name': M.name, 'bases': [sorted(B) for B in sorted(M.bases, key=sorted)]}


def load_matroid(source: str) -> Tuple[Matroid, str]:
    """A matroid/v1 or vm/v1 file, or else a registered name such as 'u23', 'vamos' or 'U2,4'.

    A vm/v1 file is checked for valuated exchange and yields its underlying matroid.
    """
    if os.path.isfile(source):
        data, digest = read_json(source)
        if data.get('format') == 'vm/v1':
            VM = valuated_from_json(data)
            VM.validate()
            return VM.matroid, digest
        return matroid_from_json(data), digest
    return matroid_select(source), digest_bytes('name:{}'.format(source.strip().lower()).encode('utf-8'))


def load_field_matrix(source: str, q: Optional[int] = None) -> Tuple[FieldMatrix, str]:
    if os.path.isfile(source):
        data, digest = read_json(source)
        return FieldMatrix.from_json(data), digest
    fm = representation_select(source, q)
    if fm is None:
        raise ValueError("Cannot find a representation of [{}]{} in the registration list, please add it to matroids/matroid_pool.py".format(
            source, '' if q is None else ' over GF({})'.format(q)))
    return fm, digest_bytes('name:{}'.format(source.strip().lower()).encode('utf-8'))


def load_tls(path: str) -> Tuple[TropicalLinearSpace, str]:
    data, digest = read_json(path)
    return TropicalLinearSpace.from_json(data), digest


def valuated_from_json(data: dict) -> ValuatedMatroid:
    _check_format(data, 'vm/v1')
    n = int(data['matroid']['n'])
    valuation = {frozenset(int(i) for i in key.split(',') if i != ''): x for key, x in data['valuation'].items()}
    M = Matroid(n, [sorted(B) for B in valuation], validate=True)
    return ValuatedMatroid(M, valuation)


def load_ideal(path: str, config=None) -> Tuple[TruncatedTropicalIdeal, str]:
    data, digest = read_json(path)
    return TruncatedTropicalIdeal.from_json(data, config), digest


def load_polynomial(path: str) -> Tuple[TropPolynomial, str]:
    data, digest = read_json(path)
    _check_format(data, 'poly/v1')
    return TropPolynomial.from_json(int(data['n']), data['terms']), digest


def ideal_from_forms(data: dict, D: Optional[int] = None, config=None) -> TruncatedTropicalIdeal:
    _check_format(data, 'forms/v1')
    q, n = int(data['q']), int(data['n'])
    D = int(data.get('D', config.truncation_degree if config else 2)) if D is None else D
    if 'generators' in data:
        gens = [{tuple(t['exp']): int(t['coef']) for t in g} for g in data['generators']]
        return trop_polynomial_ideal(q, gens, n, D, config)
    return trop_linear_ideal(q, [list(f) for f in data['forms']], n, D, config)


def load_forms(path: str, D: Optional[int] = None, config=None) -> Tuple[TruncatedTropicalIdeal, str]:
    data, digest = read_json(path)
    return ideal_from_forms(data, D, config), digest
