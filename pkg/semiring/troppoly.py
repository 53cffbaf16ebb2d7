"""
Tropical polynomials over the min-plus semifield.

Monomials are exponent tuples. The canonical index on Mon_{<=d} orders monomials
by total degree and then in ascending lexicographic order of exponent
tuples, so Mon_{<=d} is a prefix of Mon_{<=d+1} and slice vectors of lower
degree embed by padding. In degree 1 this puts x_{n-1} first and x0 last.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

from semiring.trop_core import INF, TropValue, TropVector, format_value, to_fraction
from utils.exceptions import DimensionError, TruncationError

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def monomial_count(n: int, d: int) -> int:
    """|Mon_{<=d}| for n variables."""
    return int(comb(n + d, d, exact=True))


@lru_cache(maxsize=None)
def _compositions(n: int, d: int) -> Tuple[Monomial, ...]:
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d + 1):
        for rest in _compositions(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> Tuple[Monomial, ...]:
    return tuple(sorted(_compositions(n, d)))


@lru_cache(maxsize=None)
def monomials_upto(n: int, d: int) -> Tuple[Monomial, ...]:
    out = []
    for e in range(d + 1):
        out.extend(monomials_of_degree(n, e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index_table(n: int, d: int) -> Dict[Monomial, int]:
    return {u: k for k, u in enumerate(monomials_upto(n, d))}


def monomial_index(u: Monomial, d: Optional[int] = None) -> int:
    """Position of u in the canonical order; independent of d as long as deg u <= d."""
    if d is None:
        d = sum(u)
    if sum(u) > d:
        raise TruncationError("Monomial {} has degree above {}.".format(u, d))
    return monomial_index_table(len(u), d)[tuple(u)]


def _order_key(u: Monomial) -> Tuple[int, Tuple[int, ...]]:
    return sum(u), tuple(u)


def degree_offset(n: int, d: int) -> int:
    """Index of the first degree-d monomial."""
    return 0 if d == 0 else monomial_count(n, d - 1)


def _check_weight(n: int, w: Sequence) -> List[Fraction]:
    if len(w) != n:
        raise DimensionError("Weight of length {} given for {} variables.".format(len(w), n))
    out = []
    for x in w:
        x = to_fraction(x)
        if x is INF:
            raise DimensionError("Weights must be finite.")
        out.append(x)
    return out


def _dot(u: Monomial, w: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, w) if a), Fraction(0))


class TropPolynomial(object):
    """Finitely supported map from monomials to finite coefficients.

    The empty polynomial is the additive zero; ``+`` is ⊕ and ``*`` is ⊙.
    """

    def __init__(self, n: int, terms: Optional[Dict[Monomial, object]] = None):
        self.n = n
        self.terms: Dict[Monomial, Fraction] = {}
        for u, c in (terms or {}).items():
            u = tuple(int(a) for a in u)
            if len(u) != n:
                raise DimensionError("Monomial {} does not have {} exponents.".format(u, n))
            if any(a < 0 for a in u):
                raise DimensionError("Negative exponents are not supported: {}.".format(u))
            c = to_fraction(c)
            if c is INF:
                continue
            if u not in self.terms or c < self.terms[u]:
                self.terms[u] = c

    @classmethod
    def monomial(cls, u: Monomial, coef=0) -> 'TropPolynomial':
        return cls(len(u), {tuple(u): coef})

    @classmethod
    def variable(cls, n: int, i: int, coef=0) -> 'TropPolynomial':
        u = [0] * n
        u[i] = 1
        return cls(n, {tuple(u): coef})

    @classmethod
    def constant(cls, n: int, coef=0) -> 'TropPolynomial':
        return cls(n, {(0,) * n: coef})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(u) for u in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(u) for u in self.terms}) <= 1

    @property
    def support(self) -> List[Monomial]:
        return sorted(self.terms, key=_order_key)

    def variables(self) -> List[int]:
        """Indices of variables that occur in some term."""
        used = set()
        for u in self.terms:
            used.update(i for i, a in enumerate(u) if a)
        return sorted(used)

    def __eq__(self, other):
        if not isinstance(other, TropPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: 'TropPolynomial') -> 'TropPolynomial':
        self._check_ring(other)
        merged = dict(self.terms)
        for u, c in other.terms.items():
            if u not in merged or c < merged[u]:
                merged[u] = c
        return TropPolynomial(self.n, merged)

    def __mul__(self, other: 'TropPolynomial') -> 'TropPolynomial':
        self._check_ring(other)
        out: Dict[Monomial, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                m = tuple(x + y for x, y in zip(u, v))
                if m not in out or a + b < out[m]:
                    out[m] = a + b
        return TropPolynomial(self.n, out)

    def shift(self, c) -> 'TropPolynomial':
        """c ⊙ f."""
        c = to_fraction(c)
        if c is INF:
            return TropPolynomial(self.n)
        return TropPolynomial(self.n, {u: a + c for u, a in self.terms.items()})

    def _check_ring(self, other):
        if self.n != other.n:
            raise DimensionError("Polynomials in {} and {} variables cannot be combined.".format(self.n, other.n))

    def evaluate(self, w: Sequence) -> TropValue:
        w = _check_weight(self.n, w)
        if self.is_zero:
            return TropValue.zero
        return TropValue(min(c + _dot(u, w) for u, c in self.terms.items()))

    def minimizers(self, w: Sequence) -> List[Monomial]:
        w = _check_weight(self.n, w)
        if self.is_zero:
            return []
        values = {u: c + _dot(u, w) for u, c in self.terms.items()}
        low = min(values.values())
        return sorted((u for u, x in values.items() if x == low), key=_order_key)

    def initial_form(self, w: Sequence) -> 'TropPolynomial':
        return TropPolynomial(self.n, {u: 0 for u in self.minimizers(w)})

    def monomial_multiply(self, u: Monomial) -> 'TropPolynomial':
        if len(u) != self.n:
            raise DimensionError("Monomial {} does not have {} exponents.".format(u, self.n))
        return TropPolynomial(self.n, {tuple(a + b for a, b in zip(v, u)): c for v, c in self.terms.items()})

    def homogenise(self, degree: Optional[int] = None) -> 'TropPolynomial':
        """Pad every term with a power of a new leading variable x0 up to ``degree``."""
        top = self.degree if degree is None else degree
        if not self.is_zero and top < self.degree:
            raise TruncationError("Cannot homogenise a degree-{} polynomial to degree {}.".format(self.degree, top))
        return TropPolynomial(self.n + 1, {(top - sum(u),) + u: c for u, c in self.terms.items()})

    def dehomogenise(self) -> 'TropPolynomial':
        """Set the leading variable to the tropical one."""
        out: Dict[Monomial, Fraction] = {}
        for u, c in self.terms.items():
            v = u[1:]
            if v not in out or c < out[v]:
                out[v] = c
        return TropPolynomial(self.n - 1, out)

    def substitute(self, assignment: Dict[int, object]) -> 'TropPolynomial':
        """Min-plus specialization x_a := w_a for a in the assignment.

        The result lives in the remaining variables, in their original order.
        """
        fixed = {a: to_fraction(x) for a, x in assignment.items()}
        if any(x is INF for x in fixed.values()):
            raise DimensionError("Specialization values must be finite.")
        keep = [i for i in range(self.n) if i not in fixed]
        out: Dict[Monomial, Fraction] = {}
        for u, c in self.terms.items():
            v = tuple(u[i] for i in keep)
            val = c + sum((u[a] * x for a, x in fixed.items()), Fraction(0))
            if v not in out or val < out[v]:
                out[v] = val
        return TropPolynomial(len(keep), out)

    def coefficient_vector(self, d: int) -> TropVector:
        if self.degree > d:
            raise TruncationError("Polynomial of degree {} does not fit in Mon_<={}.".format(self.degree, d))
        table = monomial_index_table(self.n, d)
        coords = [INF] * len(table)
        for u, c in self.terms.items():
            coords[table[u]] = c
        return TropVector(tuple(coords))

    @classmethod
    def from_vector(cls, n: int, v: TropVector, d: int) -> 'TropPolynomial':
        mons = monomials_upto(n, d)
        if len(v) != len(mons):
            raise DimensionError("Vector of length {} is not indexed by Mon_<={} in {} variables.".format(len(v), d, n))
        return cls(n, {mons[k]: c for k, c in v.finite.items()})

    def to_json(self) -> List[dict]:
        return [{'exp': list(u), 'coef': format_value(self.terms[u])} for u in self.support]

    @classmethod
    def from_json(cls, n: int, data: Iterable[dict]) -> 'TropPolynomial':
        return cls(n, {tuple(t['exp']): t['coef'] for t in data})

    def __repr__(self):
        if self.is_zero:
            return 'TropPolynomial(inf)'
        parts = []
        for u in self.support:
            mon = '*'.join('x{}{}'.format(i, '^{}'.format(a) if a > 1 else '') for i, a in enumerate(u) if a) or '1'
            parts.append('{}*{}'.format(format_value(self.terms[u]), mon))
        return 'TropPolynomial({})'.format(' + '.join(parts))


def evaluate(f: TropPolynomial, w: Sequence) -> TropValue:
    return f.evaluate(w)


def initial_form(f: TropPolynomial, w: Sequence) -> TropPolynomial:
    return f.initial_form(w)


def monomial_multiply(f: TropPolynomial, u: Monomial) -> TropPolynomial:
    return f.monomial_multiply(u)


def homogenise(f: TropPolynomial, degree: Optional[int] = None) -> TropPolynomial:
    return f.homogenise(degree)


def coefficient_vector(f: TropPolynomial, d: int) -> TropVector:
    return f.coefficient_vector(d)


def monomial_weights(n: int, d: int, w: Sequence) -> List[Fraction]:
    """u·w for every u in Mon_{<=d}, in canonical order."""
    w = _check_weight(n, w)
    return [_dot(u, w) for u in monomials_upto(n, d)]


def shift_map(n: int, d: int, u: Monomial, target: int) -> np.ndarray:
    """Index image of Mon_{<=d} under multiplication by x^u, inside Mon_{<=target}."""
    if d + sum(u) > target:
        raise TruncationError("x^{} maps Mon_<={} beyond degree {}.".format(u, d, target))
    table = monomial_index_table(n, target)
    return np.array([table[tuple(a + b for a, b in zip(v, u))] for v in monomials_upto(n, d)], dtype=np.int64)
