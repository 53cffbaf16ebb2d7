"""
Valuated matroids and tropical linear spaces given by their valuated circuits.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from semiring.trop_core import (INF, MinPlusSpan, TropVector, elimination_witness, format_value,
                                is_tropical_linear_space, mask_of, members, span_membership, to_fraction)
from utils.config import default_config
from utils.exceptions import CircuitSetError, CompletionError, DimensionError, MatroidError, PreconditionError
from .matroid import CircuitMatroid, Matroid, popcount

logger = logging.getLogger(__name__)


class TropicalLinearSpace(object):
    """Min-plus span of valuated circuits, with its underlying matroid."""

    def __init__(self, ground_size: int, circuits: Iterable[TropVector] = (), check: bool = True):
        self.ground_size = ground_size
        normalized = []
        seen = set()
        for c in circuits:
            if len(c) != ground_size:
                raise DimensionError("Circuit of length {} in a space on {} coordinates.".format(len(c), ground_size))
            if c.is_zero:
                raise CircuitSetError("The all-INF vector is not a circuit.")
            c = c.normalized()
            if c not in seen:
                seen.add(c)
                normalized.append(c)
        normalized.sort(key=lambda v: (popcount(v.mask), v.mask, v.to_json()))
        self.span = MinPlusSpan(ground_size, normalized)
        if check:
            self._check_antichain()
        self.underlying = CircuitMatroid(ground_size, self.span.masks)
        self.rank = self.underlying.rank()
        self.dim = ground_size - self.rank

    def _check_antichain(self):
        masks = self.span.masks
        if len(set(masks)) != len(masks):
            raise CircuitSetError("Two different circuit vectors share a support; the generator list is not circuit-complete.")
        if not self.span.supports_antichain():
            raise CircuitSetError("Circuit supports are not an antichain.")

    @property
    def circuits(self) -> Tuple[TropVector, ...]:
        return self.span.generators

    @property
    def is_boolean(self) -> bool:
        return self.span.is_boolean

    @property
    def is_zero(self) -> bool:
        return not self.span.generators

    def __len__(self):
        return len(self.span)

    def __repr__(self):
        return 'TropicalLinearSpace(n={}, circuits={}, dim={})'.format(self.ground_size, len(self.span), self.dim)

    def contains(self, v: TropVector) -> bool:
        return span_membership(v, self.span)

    def check_elimination(self, config=None):
        config = config or default_config()
        return is_tropical_linear_space(self.span, include_sums=config.elimination_include_sums,
                                        max_family=config.elimination_max_family)

    def same_circuits(self, other: 'TropicalLinearSpace') -> bool:
        return self.ground_size == other.ground_size and set(self.circuits) == set(other.circuits)

    def to_json(self) -> dict:
        return {'format': 'tls/v1', 'n': self.ground_size, 'circuits': [{'coords': c.to_json()} for c in self.circuits]}

    @classmethod
    def from_json(cls, data: dict) -> 'TropicalLinearSpace':
        if data.get('format') != 'tls/v1':
            raise CircuitSetError("Expected format tls/v1, got [{}].".format(data.get('format')))
        return cls(int(data['n']), [TropVector.from_json(c['coords']) for c in data['circuits']])

    @classmethod
    def from_matroid(cls, M: Matroid) -> 'TropicalLinearSpace':
        """Boolean (trivially valuated) space whose circuits are the circuits of M."""
        return cls(M.n, [TropVector.from_mask(M.n, c) for c in M.circuit_masks()])


def underlying_matroid(L: TropicalLinearSpace) -> Matroid:
    return L.underlying


class ValuatedMatroid(object):
    """Basis valuation on a matroid; non-bases are implicitly INF."""

    def __init__(self, matroid: Matroid, valuation: Dict[FrozenSet[int], object]):
        self.matroid = matroid
        bases = matroid.bases
        self.valuation: Dict[FrozenSet[int], Fraction] = {}
        for B, x in valuation.items():
            B = frozenset(B)
            if B not in bases:
                raise MatroidError("{} is not a basis of the underlying matroid.".format(sorted(B)))
            x = to_fraction(x)
            if x is INF:
                raise MatroidError("Bases must carry finite values.")
            self.valuation[B] = x
        missing = bases - set(self.valuation)
        if missing:
            raise MatroidError("Bases without a value: {}.".format(sorted(sorted(B) for B in missing)[:5]))

    @property
    def n(self) -> int:
        return self.matroid.n

    @classmethod
    def trivial(cls, matroid: Matroid) -> 'ValuatedMatroid':
        return cls(matroid, {B: 0 for B in matroid.bases})

    @classmethod
    def from_matrix_padic(cls, rows: Sequence[Sequence[object]], p: int) -> 'ValuatedMatroid':
        """Bases are column sets with nonzero maximal minor, valued by the p-adic valuation of that minor."""
        mat = sp.Matrix([[_rational(x) for x in row] for row in rows])
        r, n = mat.shape
        valuation = {}
        for cols in itertools.combinations(range(n), r):
            det = mat.extract(list(range(r)), list(cols)).det(method='berkowitz')
            if det != 0:
                valuation[frozenset(cols)] = _padic_valuation(det, p)
        if not valuation:
            raise MatroidError("The matrix does not have full row rank.")
        matroid = Matroid(n, valuation.keys())
        return cls(matroid, valuation)

    def value(self, B: Iterable[int]):
        return self.valuation.get(frozenset(B), INF)

    def validate(self) -> bool:
        """Valuated exchange, checked exhaustively."""
        bases = list(self.valuation)
        for B1 in bases:
            for B2 in bases:
                if B1 == B2:
                    continue
                total = self.valuation[B1] + self.valuation[B2]
                for x in B1 - B2:
                    ok = False
                    for y in B2 - B1:
                        a = self.value((B1 - {x}) | {y})
                        b = self.value((B2 - {y}) | {x})
                        if a is not INF and b is not INF and total >= a + b:
                            ok = True
                            break
                    if not ok:
                        raise MatroidError("Valuated exchange fails for {} and {} at {}.".format(sorted(B1), sorted(B2), x))
        return True

    def valuated_circuits(self) -> List[TropVector]:
        """Fundamental circuits C(B, e)_j = v(B - j + e), normalized and deduplicated."""
        n = self.n
        seen = set()
        out = []
        for B in sorted(self.valuation, key=sorted):
            for e in range(n):
                if e in B:
                    continue
                coords = {}
                for j in list(B) + [e]:
                    val = self.value((B - {j}) | {e}) if j != e else self.valuation[B]
                    if val is not INF:
                        coords[j] = val
                vec = TropVector.from_finite(n, coords).normalized()
                if vec not in seen:
                    seen.add(vec)
                    out.append(vec)
        return out

    def tropical_linear_space(self) -> TropicalLinearSpace:
        return TropicalLinearSpace(self.n, self.valuated_circuits())

    def to_json(self) -> dict:
        return {
            'format': 'vm/v1',
            'matroid': {'format': 'matroid/v1', 'n': self.n, 'rank': self.matroid.rank(),
                        'bases': sorted(sorted(B) for B in self.valuation)},
            'valuation': {','.join(str(i) for i in sorted(B)): format_value(x)
                          for B, x in sorted(self.valuation.items(), key=lambda kv: sorted(kv[0]))},
        }


def _rational(x) -> sp.Rational:
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


def _padic_valuation(x: sp.Rational, p: int) -> int:
    return sp.multiplicity(p, abs(x.p)) - sp.multiplicity(p, x.q)


def initial_matroid(VM: ValuatedMatroid, w: Sequence[object]) -> Matroid:
    """Bases minimizing v(B) - Σ_{i∈B} w_i."""
    if len(w) != VM.n:
        raise DimensionError("Weight of length {} for a matroid on {} elements.".format(len(w), VM.n))
    w = [to_fraction(x) for x in w]
    scores = {B: x - sum((w[i] for i in B), Fraction(0)) for B, x in VM.valuation.items()}
    low = min(scores.values())
    return Matroid(VM.n, [B for B, s in scores.items() if s == low], validate=False)


def selection(c: TropVector, w: Sequence[Fraction]) -> int:
    """Mask of coordinates minimizing c_i + w_i."""
    values = {j: x + w[j] for j, x in c.finite.items()}
    low = min(values.values())
    return mask_of(j for j, x in values.items() if x == low)


def minimal_masks(masks: Iterable[int]) -> List[int]:
    ordered = sorted(set(masks), key=lambda m: (popcount(m), m))
    kept: List[int] = []
    for m in ordered:
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    return kept


def initial_circuit_masks(span: MinPlusSpan, w: Sequence[object]) -> List[int]:
    if len(w) != span.ground_size:
        raise DimensionError("Weight of length {} for {} coordinates.".format(len(w), span.ground_size))
    w = [to_fraction(x) for x in w]
    return minimal_masks(selection(c, w) for c in span.generators)


def initial_matroid_from_circuits(L, w: Sequence[object]) -> Matroid:
    """Vector-level initial matroid: minimal supports of in_w of the valuated circuits."""
    span = L.span if isinstance(L, TropicalLinearSpace) else L
    return CircuitMatroid(span.ground_size, initial_circuit_masks(span, w))


def initial_space(L: TropicalLinearSpace, w: Sequence[object]) -> TropicalLinearSpace:
    """Boolean space of the initial matroid."""
    masks = initial_circuit_masks(L.span, w)
    return TropicalLinearSpace(L.ground_size, [TropVector.from_mask(L.ground_size, m) for m in masks], check=False)


def union_closure(masks: Iterable[int]) -> set:
    """All nonempty unions of the given supports."""
    out = set()
    for m in masks:
        out |= {m | u for u in out}
        out.add(m)
    return out


def boolean_intersection(L: TropicalLinearSpace, L2: TropicalLinearSpace, config=None) -> Optional[TropVector]:
    """A nonzero Boolean vector lying in both spaces, or None when there is none."""
    config = config or default_config()
    if L.ground_size != L2.ground_size:
        raise DimensionError("Spaces on {} and {} coordinates.".format(L.ground_size, L2.ground_size))
    if not (L.is_boolean and L2.is_boolean):
        raise PreconditionError("Boolean intersection needs Boolean-valued spaces.")
    if L.ground_size > config.intersection_max_n:
        raise PreconditionError("Boolean intersection is limited to {} coordinates, got [{}].".format(config.intersection_max_n, L.ground_size))
    common = union_closure(L.span.masks) & union_closure(L2.span.masks)
    if not common:
        return None
    best = max(common, key=lambda m: (popcount(m), -m))
    return TropVector.from_mask(L.ground_size, best)


def _eliminated(f: TropVector, g: TropVector, i: int) -> TropVector:
    v = f + g
    out = dict(v.finite)
    out.pop(i, None)
    return TropVector.from_finite(len(f), out)


def _prune(gens: List[TropVector], n: int) -> List[TropVector]:
    kept = list(gens)
    # largest supports first: they are the ones likely to be spanned by the rest
    for g in sorted(gens, key=lambda v: -popcount(v.mask)):
        rest = [h for h in kept if h is not g]
        if rest and span_membership(g, MinPlusSpan(n, rest)):
            kept = rest
    return kept


def circuit_complete(gens: Iterable[TropVector], ground_size: Optional[int] = None, config=None) -> MinPlusSpan:
    """Close a generator list under elimination until it is a circuit set.

    When no vector of the current span witnesses elimination of f and g at i, the added
    candidate is f ⊕ g with coordinate i dropped. That candidate has the largest support
    allowed, so the fixed point tends towards a uniform-like completion and is not
    the minimal tropical linear space containing the generators. Spanned generators
    are pruned after every round.
    """
    config = config or default_config()
    gens = list(gens)
    if ground_size is None:
        if not gens:
            raise DimensionError("Cannot infer the ground set of an empty generator list.")
        ground_size = len(gens[0])
    n = ground_size
    if n > config.circuit_completion_max_n:
        raise PreconditionError("Circuit completion is limited to {} coordinates, got [{}].".format(config.circuit_completion_max_n, n))
    current: List[TropVector] = []
    seen = set()
    for g in gens:
        if g.is_zero:
            continue
        g = g.normalized()
        if g not in seen:
            seen.add(g)
            current.append(g)
    for round_idx in range(config.circuit_completion_max_rounds):
        span = MinPlusSpan(n, current)
        fresh: List[TropVector] = []
        for a in range(len(current)):
            for b in range(a + 1, len(current)):
                f, g = current[a], current[b]
                for i in members(f.mask & g.mask):
                    gs = g.shift(f.finite[i] - g.finite[i])
                    if elimination_witness(f, gs, i, span) is not None:
                        continue
                    cand = _eliminated(f, gs, i)
                    if cand.is_zero:
                        continue
                    cand = cand.normalized()
                    if cand not in seen:
                        seen.add(cand)
                        fresh.append(cand)
        if not fresh:
            logger.debug('Circuit completion stable after {} rounds with {} generators.'.format(round_idx, len(current)))
            return MinPlusSpan(n, _prune(current, n))
        current = _prune(current + fresh, n)
    raise CompletionError("Circuit completion did not stabilise within {} rounds.".format(config.circuit_completion_max_rounds))
