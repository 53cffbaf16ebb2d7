"""
Exact min-plus semifield arithmetic and finite min-plus linear algebra over R̄^N.

Values are exact rationals or the distinguished element INF. Vectors are
immutable; spans are finite generator lists (intended: valuated circuits).
Membership and elimination are decided by residuation against the generator
list, so completeness of that list is the caller's contract.
"""

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from utils.exceptions import DimensionError, PreconditionError

logger = logging.getLogger(__name__)


class Infinity(enum.Enum):
    INF = 'inf'

    def __repr__(self):
        return 'INF'


INF = Infinity.INF

NumberLike = Union[int, Fraction, str, Infinity, None]


def to_fraction(value: NumberLike) -> Union[Fraction, Infinity]:
    """Coerce ints, Fractions, 'p/q' strings, None and 'inf' into Fraction or INF."""
    if value is None or value is INF:
        return INF
    if isinstance(value, TropValue):
        return value.value
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ('inf', '∞', 'infinity'):
            return INF
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError("Floating point values are not accepted, got [{}].".format(value))
    return Fraction(value)


class TropValue(object):
    """Element of the tropical semifield (R ∪ {∞}, min, +).

    ``a + b`` is tropical addition (min), ``a * b`` tropical multiplication (+).
    """
    __slots__ = ('value',)

    zero = None
    one = None

    def __init__(self, value: NumberLike = 0):
        object.__setattr__(self, 'value', to_fraction(value))

    def __setattr__(self, key, value):
        raise AttributeError('TropValue is immutable')

    @property
    def is_inf(self) -> bool:
        return self.value is INF

    def __add__(self, other: 'TropValue') -> 'TropValue':
        other = _lift(other)
        if self.is_inf:
            return other
        if other.is_inf:
            return self
        return self if self.value <= other.value else other

    def __mul__(self, other: 'TropValue') -> 'TropValue':
        other = _lift(other)
        if self.is_inf or other.is_inf:
            return TropValue.zero
        return TropValue(self.value + other.value)

    __radd__ = __add__
    __rmul__ = __mul__

    def __lt__(self, other):
        other = _lift(other)
        if self.is_inf:
            return False
        if other.is_inf:
            return True
        return self.value < other.value

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return _lift(other) < self

    def __ge__(self, other):
        return _lift(other) <= self

    def __eq__(self, other):
        if not isinstance(other, TropValue):
            try:
                other = TropValue(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(('TropValue', self.value))

    def __repr__(self):
        return 'TropValue({})'.format(self.to_str())

    def to_str(self) -> str:
        if self.is_inf:
            return 'inf'
        return '{}/{}'.format(self.value.numerator, self.value.denominator)

    @classmethod
    def parse(cls, text: str) -> 'TropValue':
        return cls(text)

    @classmethod
    def sum(cls, values: Iterable['TropValue']) -> 'TropValue':
        y = cls.zero
        for x in values:
            y = y + x
        return y

    @classmethod
    def product(cls, values: Iterable['TropValue']) -> 'TropValue':
        y = cls.one
        for x in values:
            y = y * x
        return y


TropValue.zero = TropValue(INF)
TropValue.one = TropValue(0)


def _lift(value) -> TropValue:
    return value if isinstance(value, TropValue) else TropValue(value)


def format_value(value: Union[Fraction, Infinity]) -> str:
    if value is INF:
        return 'inf'
    return '{}/{}'.format(value.numerator, value.denominator)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class TropVector:
    """Fixed-length vector in R̄^N. The all-INF vector is the zero of the module."""
    coords: Tuple[Union[Fraction, Infinity], ...]
    finite: Dict[int, Fraction] = field(init=False, repr=False, compare=False, hash=False)
    mask: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        coords = tuple(to_fraction(c) for c in self.coords)
        object.__setattr__(self, 'coords', coords)
        finite = {i: c for i, c in enumerate(coords) if c is not INF}
        object.__setattr__(self, 'finite', finite)
        object.__setattr__(self, 'mask', mask_of(finite))

    @classmethod
    def of(cls, values: Iterable[NumberLike]) -> 'TropVector':
        return cls(tuple(values))

    @classmethod
    def zero(cls, n: int) -> 'TropVector':
        return cls((INF,) * n)

    @classmethod
    def indicator(cls, n: int, support: Iterable[int], value: NumberLike = 0) -> 'TropVector':
        support = set(support)
        return cls(tuple(value if i in support else INF for i in range(n)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> 'TropVector':
        return cls(tuple(Fraction(0) if (mask >> i) & 1 else INF for i in range(n)))

    @classmethod
    def from_finite(cls, n: int, finite: Dict[int, Fraction]) -> 'TropVector':
        return cls(tuple(finite.get(i, INF) for i in range(n)))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i) -> TropValue:
        return TropValue(self.coords[i])

    def __iter__(self):
        return (TropValue(c) for c in self.coords)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(self.finite)

    @property
    def is_zero(self) -> bool:
        return self.mask == 0

    @property
    def is_boolean(self) -> bool:
        """True when every finite entry is 0, i.e. the vector lies in B^N."""
        return all(c == 0 for c in self.finite.values())

    def __add__(self, other: 'TropVector') -> 'TropVector':
        """Pointwise ⊕ (min)."""
        _check_length(self, len(other))
        out = dict(self.finite)
        for j, c in other.finite.items():
            if j not in out or c < out[j]:
                out[j] = c
        return TropVector.from_finite(len(self), out)

    def shift(self, c: NumberLike) -> 'TropVector':
        """Tropical scalar multiple c ⊙ v."""
        c = to_fraction(c)
        if c is INF:
            return TropVector.zero(len(self))
        return TropVector.from_finite(len(self), {j: x + c for j, x in self.finite.items()})

    def normalized(self) -> 'TropVector':
        """Shift so that the smallest finite entry is 0."""
        if self.is_zero:
            return self
        return self.shift(-min(self.finite.values()))

    def dominates(self, other: 'TropVector') -> bool:
        """Numerically >= other on every coordinate (INF largest)."""
        _check_length(self, len(other))
        if self.mask & ~other.mask:
            return False
        return all(j not in self.finite or self.finite[j] >= c for j, c in other.finite.items())

    def to_json(self) -> List[str]:
        return [format_value(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> 'TropVector':
        return cls(tuple(to_fraction(x) for x in data))

    def __repr__(self):
        return 'TropVector({})'.format(', '.join(format_value(c) for c in self.coords))


def _check_length(v: TropVector, n: int):
    if len(v) != n:
        raise DimensionError("Vector of length {} does not match ground set of size {}.".format(len(v), n))


class MinPlusSpan:
    """Min-plus span of a finite generator list over R̄^N."""

    def __init__(self, ground_size: int, generators: Iterable[TropVector]):
        self.ground_size = ground_size
        gens = []
        seen = set()
        for g in generators:
            _check_length(g, ground_size)
            if g.is_zero:
                raise DimensionError("The all-INF vector cannot be a generator.")
            key = g.normalized()
            if key in seen:
                continue
            seen.add(key)
            gens.append(g)
        self.generators: Tuple[TropVector, ...] = tuple(gens)
        self.masks: Tuple[int, ...] = tuple(g.mask for g in gens)
        self.is_boolean = all(g.is_boolean for g in gens)
        if ground_size <= 63 and gens:
            self._mask_array = np.array(self.masks, dtype=np.uint64)
        else:
            self._mask_array = None

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return 'MinPlusSpan(n={}, generators={})'.format(self.ground_size, len(self.generators))

    def union_within(self, allowed: int) -> int:
        """Union of generator supports contained in ``allowed`` (Boolean fast path)."""
        if self._mask_array is not None:
            full = (1 << self.ground_size) - 1
            outside = np.uint64(~allowed & full)
            selected = self._mask_array[(self._mask_array & outside) == 0]
            if len(selected) == 0:
                return 0
            return int(np.bitwise_or.reduce(selected))
        union = 0
        for m in self.masks:
            if m & ~allowed == 0:
                union |= m
        return union

    def supports_antichain(self) -> bool:
        """Generator supports are pairwise incomparable (and distinct)."""
        masks = sorted(set(self.masks), key=lambda m: bin(m).count('1'))
        if len(masks) != len(self.masks):
            return False
        for a_idx, a in enumerate(masks):
            for b in masks[a_idx + 1:]:
                if a & b == a:
                    return False
        return True


def principal_cover(v: TropVector, S: MinPlusSpan, excluded: Iterable[int] = ()) -> TropVector:
    """Pointwise-minimal element of the sub-span vanishing on ``excluded`` lying above v."""
    _check_length(v, S.ground_size)
    excl = mask_of(excluded)
    n = S.ground_size
    if S.is_boolean and v.is_boolean:
        return TropVector.from_mask(n, S.union_within(v.mask & ~excl))
    h: Dict[int, Fraction] = {}
    for gen, gmask in zip(S.generators, S.masks):
        if gmask & excl or gmask & ~v.mask:
            continue
        lam = max(v.finite[j] - c for j, c in gen.finite.items())
        for j, c in gen.finite.items():
            val = lam + c
            if j not in h or val < h[j]:
                h[j] = val
    return TropVector.from_finite(n, h)


def span_membership(v: TropVector, S: MinPlusSpan) -> bool:
    """Decide v ∈ span(S) by residuation."""
    return principal_cover(v, S) == v


def elimination_witness(f: TropVector, g: TropVector, i: int, S: MinPlusSpan) -> Optional[TropVector]:
    """Return h in span(S) eliminating coordinate i from f and g, or None if none exists.

    h_i = INF, h >= f ⊕ g, with equality wherever f_j != g_j.
    """
    _check_length(f, S.ground_size)
    _check_length(g, S.ground_size)
    fi, gi = f.coords[i], g.coords[i]
    if fi is INF or gi is INF or fi != gi:
        raise PreconditionError("Elimination needs f_i = g_i finite at i = {}, got {} and {}.".format(i, format_value(fi), format_value(gi)))
    v = f + g
    h = principal_cover(v, S, (i,))
    for j in range(S.ground_size):
        if f.coords[j] != g.coords[j] and h.coords[j] != v.coords[j]:
            return None
    return h


@dataclass
class EliminationReport:
    passed: bool
    family_size: int
    checked: int
    counterexample: Optional[Tuple[TropVector, TropVector, int]] = None

    def summary(self) -> str:
        if self.passed:
            return 'axiom verified on test family of size {}'.format(self.family_size)
        f, g, i = self.counterexample
        return 'elimination fails at coordinate {} for f = {} and g = {}'.format(i, f.to_json(), g.to_json())


def elimination_family(S: MinPlusSpan, include_sums: bool = True, max_family: int = 12) -> List[TropVector]:
    family = list(S.generators)
    if include_sums and len(S.generators) <= max_family:
        seen = {g.normalized() for g in family}
        gens = S.generators
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                s = gens[a] + gens[b]
                if s.normalized() not in seen:
                    seen.add(s.normalized())
                    family.append(s)
    return family


def is_tropical_linear_space(S: MinPlusSpan, include_sums: bool = True, max_family: int = 12) -> EliminationReport:
    """Check the elimination axiom on a finite test family drawn from S.

    A pass certifies the axiom on the test family only.
    """
    family = elimination_family(S, include_sums=include_sums, max_family=max_family)
    checked = 0
    boolean = S.is_boolean and all(f.is_boolean for f in family)
    for a in range(len(family)):
        f = family[a]
        for b in range(a + 1, len(family)):
            g = family[b]
            common = f.mask & g.mask
            if not common:
                continue
            for i in members(common):
                checked += 1
                if boolean:
                    allowed = (f.mask | g.mask) & ~(1 << i)
                    sym = f.mask ^ g.mask
                    if S.union_within(allowed) & sym != sym:
                        logger.debug('Elimination fails at {} on Boolean pair.'.format(i))
                        return EliminationReport(False, len(family), checked, (f, g, i))
                    continue
                gs = g.shift(f.finite[i] - g.finite[i])
                if elimination_witness(f, gs, i, S) is None:
                    return EliminationReport(False, len(family), checked, (f, gs, i))
    return EliminationReport(True, len(family), checked)
