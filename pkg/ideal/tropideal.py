"""
Degree-truncated tropical ideals.

Slice d is a tropical linear space on the coordinates Mon_{<=d}. Since
Mon_{<=d} is a prefix of Mon_{<=d+1}, a vector of slice d embeds into slice
d+1 by padding with INF. Every semi-decision made here holds "at level D".
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

from matroids.matroid import Matroid
from matroids.valuated import (TropicalLinearSpace, circuit_complete, initial_circuit_masks, minimal_masks)
from semiring.trop_core import INF, MinPlusSpan, TropVector, mask_of, members, span_membership, to_fraction
from semiring.troppoly import (Monomial, TropPolynomial, degree_offset, monomial_count, monomial_weights,
                               monomials_of_degree, monomials_upto, shift_map)
from utils.config import default_config
from utils.exceptions import (CertificateError, DimensionError, FanError, HilbertMismatchError, PreconditionError,
                              SpecializationError, TruncationError)

logger = logging.getLogger(__name__)


def _per_degree(fn: Callable[[int], object], degrees: Sequence[int], config) -> List[object]:
    """Run fn on every degree, concurrently when more than one thread is allowed; results in degree order."""
    if config.threads > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(fn, degrees))
    return [fn(d) for d in degrees]


class TruncatedTropicalIdeal(object):
    """Slices I_{<=d} for d = 0..D of a tropical ideal in n variables."""

    def __init__(self, n: int, D: int, slices: Sequence[TropicalLinearSpace], homogeneous: bool = False, config=None):
        self.config = config or default_config()
        try:
            self.config.check_truncation(n, D)
        except ValueError as err:
            raise TruncationError(str(err))
        if len(slices) != D + 1:
            raise TruncationError("Expected {} slices for D = {}, got {}.".format(D + 1, D, len(slices)))
        for d, L in enumerate(slices):
            if L.ground_size != monomial_count(n, d):
                raise DimensionError("Slice {} has {} coordinates, expected |Mon_<={}| = {}.".format(d, L.ground_size, d, monomial_count(n, d)))
        self.n = n
        self.D = D
        self.slices = list(slices)
        self.homogeneous = homogeneous

    def __repr__(self):
        return 'TruncatedTropicalIdeal(n={}, D={}, homogeneous={}, hilbert={})'.format(self.n, self.D, self.homogeneous, self.hilbert_table())

    @classmethod
    def zero(cls, n: int, D: int, homogeneous: bool = True, config=None) -> 'TruncatedTropicalIdeal':
        return cls(n, D, [TropicalLinearSpace(monomial_count(n, d)) for d in range(D + 1)], homogeneous, config)

    @classmethod
    def from_top_circuits(cls, n: int, D: int, circuits: Iterable[TropPolynomial], homogeneous: bool = False,
                          config=None) -> 'TruncatedTropicalIdeal':
        """Slice d is spanned by the given circuits of degree at most d."""
        polys = [f for f in circuits if not f.is_zero]
        for f in polys:
            if f.n != n:
                raise DimensionError("Circuit in {} variables for an ideal in {}.".format(f.n, n))
            if f.degree > D:
                raise TruncationError("Circuit of degree {} above D = {}.".format(f.degree, D))
        slices = []
        for d in range(D + 1):
            slices.append(TropicalLinearSpace(monomial_count(n, d), [f.coefficient_vector(d) for f in polys if f.degree <= d]))
        return cls(n, D, slices, homogeneous, config)

    def slice(self, d: int) -> TropicalLinearSpace:
        if not 0 <= d <= self.D:
            raise TruncationError("Degree {} is outside 0..{}.".format(d, self.D))
        return self.slices[d]

    def hilbert(self, d: int) -> int:
        return int(comb(self.n + d, d, exact=True)) - self.slice(d).dim

    def hilbert_table(self) -> List[int]:
        return [self.hilbert(d) for d in range(self.D + 1)]

    def polynomials(self, d: int) -> List[TropPolynomial]:
        return [TropPolynomial.from_vector(self.n, c, d) for c in self.slice(d).circuits]

    @property
    def is_boolean(self) -> bool:
        return all(L.is_boolean for L in self.slices)

    @property
    def is_zero(self) -> bool:
        return all(L.is_zero for L in self.slices)

    def homogeneous_part(self, d: int) -> TropicalLinearSpace:
        """Circuits of slice d supported on degree-d monomials, on Mon_d coordinates."""
        if not self.homogeneous:
            raise PreconditionError("Homogeneous parts are defined for homogeneous ideals only.")
        offset = degree_offset(self.n, d)
        size = len(monomials_of_degree(self.n, d))
        vecs = []
        for c in self.slice(d).circuits:
            if min(c.finite) >= offset:
                vecs.append(TropVector.from_finite(size, {j - offset: x for j, x in c.finite.items()}))
        return TropicalLinearSpace(size, vecs, check=False)

    def truncate(self, D: int) -> 'TruncatedTropicalIdeal':
        """The same ideal truncated at a lower degree D."""
        if not 0 <= D <= self.D:
            raise TruncationError("Cannot truncate an ideal of degree {} at {}.".format(self.D, D))
        if D == self.D:
            return self
        return TruncatedTropicalIdeal(self.n, D, self.slices[:D + 1], self.homogeneous, self.config)

    def same_slices(self, other: 'TruncatedTropicalIdeal', upto: Optional[int] = None) -> bool:
        top = min(self.D, other.D) if upto is None else upto
        return self.n == other.n and all(self.slices[d].same_circuits(other.slices[d]) for d in range(top + 1))

    def to_json(self) -> dict:
        return {
            'format': 'tideal/v1',
            'n': self.n,
            'D': self.D,
            'homogeneous': self.homogeneous,
            'slices': [{'d': d, 'circuits': [c.to_json() for c in L.circuits]} for d, L in enumerate(self.slices)],
        }

    @classmethod
    def from_json(cls, data: dict, config=None) -> 'TruncatedTropicalIdeal':
        if data.get('format') != 'tideal/v1':
            raise DimensionError("Expected format tideal/v1, got [{}].".format(data.get('format')))
        n, D = int(data['n']), int(data['D'])
        by_degree = {int(s['d']): s['circuits'] for s in data['slices']}
        slices = []
        for d in range(D + 1):
            vecs = [TropVector.from_json(c) for c in by_degree.get(d, [])]
            slices.append(TropicalLinearSpace(monomial_count(n, d), vecs))
        return cls(n, D, slices, bool(data.get('homogeneous', False)), config)


def hilbert(I: TruncatedTropicalIdeal, d: int) -> int:
    if d > I.D:
        raise TruncationError("Hilbert value at d = {} requested beyond D = {}.".format(d, I.D))
    return I.hilbert(d)


# axioms

@dataclass
class Violation:
    kind: str
    degree: int
    circuit: List[str]
    detail: str = ''


@dataclass
class AxiomReport:
    passed: bool
    violations: List[Violation] = field(default_factory=list)
    family_sizes: Dict[int, int] = field(default_factory=dict)

    def summary(self) -> str:
        if self.passed:
            return 'all axioms hold at level D (elimination verified on test families of sizes {})'.format(
                [self.family_sizes[d] for d in sorted(self.family_sizes)])
        return '{} violation(s), first: {} at degree {}'.format(len(self.violations), self.violations[0].kind, self.violations[0].degree)


def _shift_vector(c: TropVector, index_map: np.ndarray, size: int) -> TropVector:
    return TropVector.from_finite(size, {int(index_map[j]): x for j, x in c.finite.items()})


def _unit(n: int, i: int) -> Monomial:
    u = [0] * n
    u[i] = 1
    return tuple(u)


def check_ideal_axioms(I: TruncatedTropicalIdeal, config=None) -> AxiomReport:
    """Compatibility under variable shifts, elimination on every slice, and slice inclusion."""
    config = config or I.config

    def check_degree(d: int) -> Tuple[List[Violation], int]:
        found = []
        L = I.slices[d]
        elim = L.check_elimination(config)
        if not elim.passed:
            f, g, i = elim.counterexample
            found.append(Violation('elimination', d, f.to_json(), 'fails at coordinate {} against {}'.format(i, g.to_json())))
        if d < I.D:
            upper = I.slices[d + 1]
            size = upper.ground_size
            for c in L.circuits:
                padded = TropVector.from_finite(size, c.finite)
                if not upper.contains(padded):
                    found.append(Violation('inclusion', d, c.to_json(), 'missing from slice {}'.format(d + 1)))
            for i in range(I.n):
                index_map = shift_map(I.n, d, _unit(I.n, i), d + 1)
                for c in L.circuits:
                    if not upper.contains(_shift_vector(c, index_map, size)):
                        found.append(Violation('compatibility', d, c.to_json(), 'x{} times the circuit is missing from slice {}'.format(i, d + 1)))
        return found, elim.family_size

    results = _per_degree(check_degree, list(range(I.D + 1)), config)
    violations = []
    sizes = {}
    for d, (found, size) in enumerate(results):
        violations.extend(found)
        sizes[d] = size
    return AxiomReport(passed=not violations, violations=violations, family_sizes=sizes)


# homogenisation and initial ideals

def homogenise(I: TruncatedTropicalIdeal) -> TruncatedTropicalIdeal:
    """I^h in variables x0, x1..xn: its degree-e part homogenises I_{<=e} to degree e."""
    n1 = I.n + 1
    slices = []
    for d in range(I.D + 1):
        vecs = []
        for e in range(d + 1):
            for f in I.polynomials(e):
                vecs.append(f.homogenise(e).coefficient_vector(d))
        slices.append(TropicalLinearSpace(monomial_count(n1, d), vecs, check=False))
    return TruncatedTropicalIdeal(n1, I.D, slices, homogeneous=True, config=I.config)


def _homogeneous_setting(I: TruncatedTropicalIdeal, w: Sequence) -> Tuple[TruncatedTropicalIdeal, List[Fraction]]:
    if len(w) != I.n:
        raise DimensionError("Weight of length {} for {} variables.".format(len(w), I.n))
    w = [to_fraction(x) for x in w]
    if any(x is INF for x in w):
        raise DimensionError("Weights must be finite.")
    if I.homogeneous:
        return I, w
    return homogenise(I), [Fraction(0)] + w


def generic_weight(n: int, config=None, D: Optional[int] = None) -> List[Fraction]:
    """Seeded weight whose entries are distinct powers of the configured base.

    Monomials of degree below the base get pairwise distinct weights, so every Boolean
    circuit has a single-monomial initial form.
    """
    config = config or default_config()
    base = max(config.generic_weight_base, (D or 0) + 1)
    rng = np.random.default_rng(config.seed_num)
    return [Fraction(base ** (int(k) + 1)) for k in rng.permutation(n)]


def initial_ideal(I: TruncatedTropicalIdeal, w: Optional[Sequence] = None, config=None) -> TruncatedTropicalIdeal:
    """Boolean ideal of initial matroids slice by slice, homogenising first when needed.

    Without a weight a seeded generic one is used.
    """
    config = config or I.config
    if w is None:
        w = generic_weight(I.n, config, I.D)
        logger.debug('Generic weight {} for the initial ideal'.format([str(x) for x in w]))
    H, wh = _homogeneous_setting(I, w)

    def initial_slice(d: int) -> TropicalLinearSpace:
        weights = monomial_weights(H.n, d, wh)
        L = H.slices[d]
        masks = initial_circuit_masks(L.span, weights)
        return TropicalLinearSpace(L.ground_size, [TropVector.from_mask(L.ground_size, m) for m in masks], check=False)

    slices = _per_degree(initial_slice, list(range(H.D + 1)), config)
    out = TruncatedTropicalIdeal(H.n, H.D, slices, homogeneous=True, config=H.config)
    for d in range(H.D + 1):
        if out.hilbert(d) != H.hilbert(d):
            raise HilbertMismatchError("Initial ideal has H({}) = {} but the ideal has {}.".format(d, out.hilbert(d), H.hilbert(d)))
    return out


def hilbert_invariance(I: TruncatedTropicalIdeal, samples: int = 5, config=None) -> List[List[Fraction]]:
    """Weights tried: the generic one, then seeded integer weights in [-3, 3]^n.

    Raises HilbertMismatchError at the first weight whose initial ideal changes the Hilbert table.
    """
    config = config or I.config
    rng = np.random.default_rng(config.seed_num)
    weights = [generic_weight(I.n, config, I.D)]
    weights.extend([Fraction(int(x)) for x in rng.integers(-3, 4, size=I.n)] for _ in range(max(samples - 1, 0)))
    for w in weights:
        initial_ideal(I, w, config)
    return weights


def monomial_witness(I: TruncatedTropicalIdeal, w: Sequence, config=None) -> Optional[Tuple[int, Monomial]]:
    """A monomial of in_w(I) up to level D, as (degree, exponents), or None."""
    J = initial_ideal(I, w, config)
    for d in range(J.D + 1):
        mons = monomials_upto(J.n, d)
        for c in J.slices[d].circuits:
            if len(c.finite) == 1:
                return d, mons[next(iter(c.finite))]
    return None


def variety_member(I: TruncatedTropicalIdeal, w: Sequence, config=None) -> bool:
    """No initial slice contains a monomial; necessary for w ∈ V(I), decided up to level D."""
    return monomial_witness(I, w, config) is None


# saturation and specialization

def _pullbacks(I: TruncatedTropicalIdeal, d: int) -> List[TropVector]:
    """Vectors g on Mon_{<=d} with x^u g in slice d+|u| for some u with |u| >= 1."""
    size = monomial_count(I.n, d)
    out = []
    for k in range(1, I.D - d + 1):
        for u in monomials_of_degree(I.n, k):
            image = shift_map(I.n, d, u, d + k)
            inverse = {int(t): s for s, t in enumerate(image)}
            for c in I.slices[d + k].circuits:
                if all(j in inverse for j in c.finite):
                    out.append(TropVector.from_finite(size, {inverse[j]: x for j, x in c.finite.items()}))
    return out


def saturate(I: TruncatedTropicalIdeal, config=None) -> TruncatedTropicalIdeal:
    """Inner approximation at level D of the saturation by the product of the variables."""
    config = config or I.config
    slices = []
    for d in range(I.D + 1):
        size = monomial_count(I.n, d)
        gens = list(I.slices[d].circuits) + _pullbacks(I, d)
        if gens:
            span = circuit_complete(gens, size, config)
            slices.append(TropicalLinearSpace(size, span.generators))
        else:
            slices.append(TropicalLinearSpace(size))
    out = TruncatedTropicalIdeal(I.n, I.D, slices, I.homogeneous, config)
    logger.debug('Saturation: Hilbert {} -> {}.'.format(I.hilbert_table(), out.hilbert_table()))
    return out


def is_saturated(I: TruncatedTropicalIdeal) -> bool:
    """Every pulled-back vector already lies in its slice."""
    for d in range(I.D):
        L = I.slices[d]
        for g in _pullbacks(I, d):
            if not L.contains(g):
                return False
    return True


def specialize(I: TruncatedTropicalIdeal, A: Sequence[int], w_A: Sequence, config=None) -> TruncatedTropicalIdeal:
    """Substitute x_a := w_a for a in A; the result lives in the remaining variables."""
    config = config or I.config
    A = list(A)
    if len(A) != len(w_A):
        raise DimensionError("{} variables but {} values.".format(len(A), len(w_A)))
    if len(set(A)) != len(A) or any(not 0 <= a < I.n for a in A):
        raise DimensionError("Specialized variables {} are not distinct indices below {}.".format(A, I.n))
    if not A:
        return I
    if len(A) >= I.n:
        raise PreconditionError("At least one variable must remain after specialization.")
    m = I.n - len(A)
    assignment = dict(zip(A, w_A))
    images = []
    for f in I.polynomials(I.D):
        g = f.substitute(assignment)
        if not g.is_zero:
            images.append(g)
    slices = []
    for d in range(I.D + 1):
        size = monomial_count(m, d)
        gens = [g.coefficient_vector(d) for g in images if g.degree <= d]
        if not gens:
            slices.append(TropicalLinearSpace(size))
            continue
        span = circuit_complete(gens, size, config)
        L = TropicalLinearSpace(size, span.generators, check=False)
        report = L.check_elimination(config)
        if not report.passed or not L.span.supports_antichain():
            raise SpecializationError("Specialized slice {} is not a tropical linear space: {}.".format(d, report.summary()))
        slices.append(L)
    return TruncatedTropicalIdeal(m, I.D, slices, homogeneous=False, config=config)


# independence and multiplicity

def _variable_mask(u: Monomial) -> int:
    return mask_of(i for i, a in enumerate(u) if a)


def independence_complex(I: TruncatedTropicalIdeal) -> List[FrozenSet[int]]:
    """Variable sets A with I ∩ R[x_i : i ∈ A] = {∞} up to level D."""
    mons = monomials_upto(I.n, I.D)
    supports = set()
    for c in I.slices[I.D].circuits:
        var_mask = 0
        for j in c.finite:
            var_mask |= _variable_mask(mons[j])
        supports.add(var_mask)
    supports = minimal_masks(supports)
    faces = []
    for size in range(I.n + 1):
        for A in itertools.combinations(range(I.n), size):
            a = mask_of(A)
            if not any(s & ~a == 0 for s in supports):
                faces.append(frozenset(A))
    return faces


def degree_of_zero_dimensional(I: TruncatedTropicalIdeal) -> Optional[int]:
    """Constant Hilbert value at D-1 and D, reported as the degree; None if not yet constant."""
    if I.D < 1:
        raise TruncationError("Need D >= 1 to read off a degree.")
    a, b = I.hilbert(I.D - 1), I.hilbert(I.D)
    return b if a == b else None


def slice_matroid(I: TruncatedTropicalIdeal, d: int) -> Matroid:
    """Matroid M(I_d) on the degree-d monomials of a homogeneous ideal; rank H(d) - H(d-1)."""
    return I.homogeneous_part(d).underlying


@dataclass
class StarReport:
    passed: bool
    epsilon: Fraction
    samples: int
    disagreements: List[Tuple[List[str], bool, bool]] = field(default_factory=list)


def tie_gap(I: TruncatedTropicalIdeal, w: Sequence) -> Tuple[Fraction, List[Fraction]]:
    """Smallest positive gap between weighted values inside any circuit of the homogenised slices."""
    H, wh = _homogeneous_setting(I, w)
    gap = None
    for d in range(H.D + 1):
        weights = monomial_weights(H.n, d, wh)
        for c in H.slices[d].circuits:
            vals = sorted({x + weights[j] for j, x in c.finite.items()})
            for a, b in zip(vals, vals[1:]):
                if gap is None or b - a < gap:
                    gap = b - a
    return (gap if gap is not None else Fraction(1)), wh


def star_property_check(I: TruncatedTropicalIdeal, w: Sequence, us: Iterable[Sequence], config=None) -> StarReport:
    """Compare V(in_w I) with V(I) near w along sampled directions u, using an exact ε."""
    config = config or I.config
    if not variety_member(I, w, config):
        raise FanError("w = {} is not in the variety at level D.".format([str(x) for x in w]))
    J = initial_ideal(I, w, config)
    gap, _ = tie_gap(I, w)
    us = [[to_fraction(x) for x in u] for u in us]
    spread = max((max(max(u), 0) - min(min(u), 0) for u in us if u), default=Fraction(0))
    # monomial weights scale the direction by at most D
    eps = gap / (2 * (spread * max(I.D, 1) + 1))
    bad = []
    w = [to_fraction(x) for x in w]
    for u in us:
        lifted = u if I.homogeneous else [Fraction(0)] + u
        local = variety_member(J, lifted, config)
        moved = variety_member(I, [a + eps * b for a, b in zip(w, u)], config)
        if local != moved:
            bad.append(([str(x) for x in u], local, moved))
    return StarReport(passed=not bad, epsilon=eps, samples=len(us), disagreements=bad)


@dataclass
class BinomialCheck:
    block: int
    i: int
    j: int
    binomial: bool
    lift_support: Optional[List[int]]


@dataclass
class CertificateReport:
    passed: bool
    basis: List[int]
    flag: List[List[int]]
    points: List[List[int]]
    checks: List[BinomialCheck]
    matroid_match: bool

    def missing(self) -> List[BinomialCheck]:
        return [c for c in self.checks if not c.binomial or c.lift_support is None]


def _interior_coefficients(k: int, samples: int, seed: int) -> List[List[int]]:
    rng = np.random.default_rng(seed)
    out = [[1] * k, list(range(1, k + 1))]
    while len(out) < max(samples, 1):
        out.append([int(x) for x in rng.integers(1, 6, size=k)])
    unique = []
    for a in out:
        if a not in unique:
            unique.append(a)
    return unique[:max(samples, 1)]


def degree_one_space(I: TruncatedTropicalIdeal) -> TropicalLinearSpace:
    """Degree-1 part of I with coordinate i standing for the variable x_i."""
    if I.D < 1:
        return TropicalLinearSpace(I.n)
    J = I.homogeneous_part(1)
    variable = [u.index(1) for u in monomials_of_degree(I.n, 1)]
    circuits = [TropVector.from_finite(I.n, {variable[j]: x for j, x in c.finite.items()}) for c in J.circuits]
    return TropicalLinearSpace(I.n, circuits, check=False)


def flag_binomial_certificate(I: TruncatedTropicalIdeal, M: Matroid, B: Sequence[int], config=None) -> CertificateReport:
    """Binomials x_i ⊕ x_j in the degree-1 part of in_v(I) along the flag of B, plus M(J_1) = M."""
    config = config or I.config
    if not I.homogeneous or not I.is_boolean:
        raise PreconditionError("Flag certificates need a Boolean homogeneous ideal.")
    if M.n != I.n:
        raise DimensionError("Matroid on {} elements for an ideal in {} variables.".format(M.n, I.n))
    J1 = degree_one_space(I)
    if J1.is_zero:
        raise CertificateError("The degree-1 slice is empty.")
    flag = M.maximal_flags(B)
    levels = flag.with_ends(M.n)
    coefficient_sets = _interior_coefficients(len(flag), config.interior_samples, config.seed_num)
    points = [flag.indicator_sum(M.n, a) for a in coefficient_sets]
    checks: List[BinomialCheck] = []
    for v in points:
        initial = initial_circuit_masks(J1.span, v)
        in_span = MinPlusSpan(M.n, [TropVector.from_mask(M.n, m) for m in initial]) if initial else None
        for k in range(1, len(levels)):
            below = mask_of(levels[k - 1])
            block = sorted(levels[k] - levels[k - 1])
            for i, j in itertools.combinations(block, 2):
                pair = (1 << i) | (1 << j)
                binomial = in_span is not None and span_membership(TropVector.from_mask(M.n, pair), in_span)
                lift = None
                for c in J1.circuits:
                    if c.mask & pair == pair and c.mask & ~(pair | below) == 0:
                        lift = members(c.mask)
                        break
                checks.append(BinomialCheck(k, i, j, binomial, lift))
    matroid_match = set(J1.span.masks) == set(M.circuit_masks())
    passed = matroid_match and all(c.binomial and c.lift_support is not None for c in checks)
    return CertificateReport(passed=passed, basis=list(B), flag=flag.to_json(), points=points, checks=checks,
                             matroid_match=matroid_match)
