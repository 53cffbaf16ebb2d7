"""
Executable re-derivation of the non-realisability of U(2,3) ⊕ V8 as a tropical variety.

Every arithmetic step is recomputed, the degree-2 accounting is replayed on a
realisable ideal, and the single external input (the Las Vergnas bound on the
rank of quasi-products of U(2,3) and V8) is carried as an explicit assumption.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

from ideal.tropideal import (TruncatedTropicalIdeal, degree_one_space, flag_binomial_certificate, is_saturated,
                             slice_matroid)
from matroids.bergman import fan_independence_complex
from matroids.matroid import Matroid, MinorMatroid, are_isomorphic, direct_sum
from matroids.matroid_pool import matroid_select, representation_over
from matroids.valuated import TropicalLinearSpace
from oracle.galois import FieldMatrix
from oracle.realisable import bergman_ideal, kronecker_quasiproduct, quasiproduct_check
from semiring.trop_core import TropVector, members
from semiring.troppoly import degree_offset, monomial_count, monomial_index_table
from utils.config import default_config
from utils.exceptions import CertificateError, DimensionError, PreconditionError, TropmatError

logger = logging.getLogger(__name__)

CONTRADICTION = 'CONTRADICTION_ESTABLISHED'
NO_CONTRADICTION = 'NO_CONTRADICTION'


def pascal_binomial(n: int, k: int) -> int:
    """C(n, k) from the Pascal recurrence, with Python integers."""
    if k < 0 or k > n:
        return 0
    row = [1]
    for _ in range(n):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
    return row[k]


def binomial(n: int, k: int) -> int:
    """C(n, k) computed twice; the two code paths must agree."""
    a = pascal_binomial(n, k)
    b = int(comb(n, k, exact=True))
    if a != b:
        raise CertificateError("Binomial C({}, {}) disagrees: Pascal {} vs factorial {}.".format(n, k, a, b))
    return a


@dataclass
class Step:
    index: int
    claim: str
    status: str
    evidence: Dict[str, object] = field(default_factory=dict)
    citation: str = ''


@dataclass
class TheoremReport:
    pair: Tuple[str, str]
    steps: List[Step]
    external_assumptions: List[Dict[str, object]]
    verdict: str
    deficit: Optional[int] = None
    bound: Optional[int] = None

    @property
    def exit_code(self) -> int:
        if self.verdict == CONTRADICTION:
            return 0
        if self.verdict == NO_CONTRADICTION:
            return 1
        return 3

    def to_json(self) -> dict:
        return {
            'pair': list(self.pair),
            'steps': [asdict(s) for s in self.steps],
            'external_assumptions': self.external_assumptions,
            'verdict': self.verdict,
            'deficit': self.deficit,
            'bound': self.bound,
        }


# degree-2 monomial blocks

def _quadratic_monomials(labels: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    """Degree-2 monomials in the given variables, ordered by variable pairs (a, b) with a <= b."""
    out = []
    for a in labels:
        for b in labels:
            if a <= b:
                u = [0] * n
                u[a] += 1
                u[b] += 1
                out.append(tuple(u))
    return out


def degree_two_blocks(nx: int, ny: int) -> Dict[str, List[Tuple[int, ...]]]:
    """S1 (only X variables), S2 (only Y variables) and S3 (mixed, ordered by (x, y))."""
    n = nx + ny
    X, Y = list(range(nx)), list(range(nx, n))
    mixed = []
    for x in X:
        for y in Y:
            u = [0] * n
            u[x] = 1
            u[y] = 1
            mixed.append(tuple(u))
    return {'S1': _quadratic_monomials(X, n), 'S2': _quadratic_monomials(Y, n), 'S3': mixed}


def _local_indices(n: int, monomials: Sequence[Tuple[int, ...]]) -> List[int]:
    table = monomial_index_table(n, 2)
    offset = degree_offset(n, 2)
    return [table[u] - offset for u in monomials]


def _products(basis: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    return _quadratic_monomials(list(basis), n)


def degree_two_replay(config=None) -> Dict[str, object]:
    """Degree-2 accounting on the realisable Bergman ideal of U(2,3) ⊕ U(2,3) over GF(2)."""
    config = config or default_config()
    block = representation_over('u23', 2).entries
    A = np.zeros((4, 6), dtype=np.int64)
    A[:2, :3] = block
    A[2:, 3:] = block
    I = bergman_ideal(FieldMatrix(2, A), 2, config)
    M = direct_sum(matroid_select('u23'), matroid_select('u23'))
    n = 6
    Q = slice_matroid(I, 2)
    blocks = degree_two_blocks(3, 3)
    idx = {name: _local_indices(n, mons) for name, mons in blocks.items()}
    ranks = {name: Q.rank(idx[name]) for name in idx}
    spanned = {}
    for name, basis in (('S1', (0, 1)), ('S2', (3, 4))):
        closure = Q.closure(_local_indices(n, _products(basis, n)))
        spanned[name] = set(idx[name]) <= set(closure)
    X, Y = M.restriction(range(3)), M.restriction(range(3, 6))
    # S3 coordinates in (x, y) order, so row x of the grid is one X element
    quasi = quasiproduct_check(MinorMatroid(Q, idx['S3']), X, Y)
    rank_q = Q.rank()
    bound_1, bound_2 = binomial(X.rank() + 1, 2), binomial(Y.rank() + 1, 2)
    return {
        'hilbert': I.hilbert_table(),
        'rank_Q': rank_q,
        'rank_Q_matches_hilbert': rank_q == I.hilbert(2) - I.hilbert(1),
        'rank_S1': ranks['S1'],
        'rank_S2': ranks['S2'],
        'rank_S3': ranks['S3'],
        'bound_S1': bound_1,
        'bound_S2': bound_2,
        'deficit': rank_q - bound_1 - bound_2,
        'spanned_by_products': spanned,
        'quasiproduct': quasi.to_json(),
    }


class TheoremPipeline(object):
    """Ordered checks; the first failing step fixes the verdict."""

    def __init__(self, left: str, right: str, config=None, lv_bound: Optional[int] = None, use_lv_bound: bool = True):
        self.config = config or default_config()
        self.pair = (left, right)
        self.X = matroid_select(left)
        self.Y = matroid_select(right)
        self.lv_bound = self.config.lv_bound if lv_bound is None else int(lv_bound)
        self.use_lv_bound = use_lv_bound
        self.M: Optional[Matroid] = None
        self.rank = None
        self.hilbert: List[int] = []
        self.deficit: Optional[int] = None
        self.bound: Optional[int] = None
        self.realized_rank: Optional[int] = None
        self.assumptions: List[Dict[str, object]] = []

    def step_matroid(self) -> Step:
        self.M = direct_sum(self.X, self.Y)
        self.rank = self.M.rank()
        ok = self.M.is_loopless() and self.rank == self.X.rank() + self.Y.rank()
        return Step(1, 'M = {} ⊕ {} is loopless of rank {} on {} elements'.format(self.X.name, self.Y.name, self.rank, self.M.n),
                    'pass' if ok else 'fail', {'rank': self.rank, 'n': self.M.n, 'loopless': self.M.is_loopless()},
                    'computed: rank oracle of the direct sum')

    def step_hilbert(self) -> Step:
        D = max(2, self.config.truncation_degree)
        h1 = 1 + self.rank
        upper = [binomial(h1 - 1 + d, d) for d in range(D + 1)]
        complex_report = fan_independence_complex(self.M, self.config)
        facet = complex_report.dimension
        lower = [binomial(facet + d, d) for d in range(D + 1)]
        replay = bergman_ideal(representation_over('u23', 2), 3, self.config).hilbert_table()
        replay_expected = [binomial(2 + d, d) for d in range(4)]
        self.hilbert = lower
        ok = upper == lower and replay == replay_expected
        evidence = {'H1': h1, 'upper': upper, 'lower': lower, 'facet_size': facet,
                    'replay_u23': replay, 'replay_expected': replay_expected}
        return Step(2, 'H_J(d) = C({}+d, d) for d <= {}, squeezed by the degree-one and independence bounds'.format(self.rank, D),
                    'pass' if ok else 'fail', evidence,
                    'derived: degree-one upper bound and independence-complex lower bound')

    def step_degree_two(self) -> Step:
        nx, ny = self.X.n, self.Y.n
        rank_q = self.hilbert[2] - self.hilbert[1]
        sizes = {'S1': binomial(nx + 1, 2), 'S2': binomial(ny + 1, 2), 'S3': nx * ny}
        bound_1 = binomial(self.X.rank() + 1, 2)
        bound_2 = binomial(self.Y.rank() + 1, 2)
        self.deficit = rank_q - bound_1 - bound_2
        replay = degree_two_replay(self.config)
        blocks = degree_two_blocks(nx, ny)
        counted = {name: len(mons) for name, mons in blocks.items()}
        ok = (counted == sizes and sum(sizes.values()) == binomial(nx + ny + 1, 2)
              and replay['rank_Q_matches_hilbert'] and all(replay['spanned_by_products'].values())
              and replay['rank_S1'] <= replay['bound_S1'] and replay['rank_S2'] <= replay['bound_S2']
              and replay['rank_S3'] >= replay['deficit'])
        evidence = {'rank_Q': rank_q, 'sizes': sizes, 'bound_S1': bound_1, 'bound_S2': bound_2,
                    'rank_S3_at_least': self.deficit, 'replay_u23_u23': replay}
        return Step(3, 'rank(Q|S3) >= {} - {} - {} = {}'.format(rank_q, bound_1, bound_2, self.deficit),
                    'pass' if ok else 'fail', evidence,
                    'derived: degree-2 rank accounting; products of a basis span each pure block')

    def step_quasiproduct(self) -> Step:
        X_part = self.M.restriction(range(self.X.n))
        Y_part = self.M.restriction(range(self.X.n, self.M.n))
        iso_x = are_isomorphic(X_part, self.X)
        iso_y = are_isomorphic(Y_part, self.Y)
        u23 = representation_over('u23', 2)
        _, control = kronecker_quasiproduct(u23, u23)
        ok = bool(iso_x) and bool(iso_y) and control.passed and control.rank == 4
        evidence = {'restriction_X': iso_x.reason, 'restriction_Y': iso_y.reason, 'kronecker_u23_u23': control.to_json()}
        return Step(4, 'Q|S3 is a quasi-product of {} and {}'.format(self.X.name, self.Y.name),
                    'pass' if ok else 'fail', evidence,
                    'derived: rows restrict to M|Y and columns to M|X')

    def _common_representation(self) -> Optional[Tuple[FieldMatrix, FieldMatrix]]:
        for q in self.config.field_orders:
            A = representation_over(self.pair[0], q)
            B = representation_over(self.pair[1], q)
            if A is not None and B is not None:
                return A, B
        return None

    def step_bound(self) -> Step:
        pair = self._common_representation()
        if pair is not None:
            A, B = pair
            _, report = kronecker_quasiproduct(A, B)
            self.realized_rank = report.rank
            ok = report.passed
            return Step(5, 'a quasi-product of rank {} exists over GF({}); no upper bound applies'.format(report.rank, A.q),
                        'pass' if ok else 'fail', {'q': A.q, 'kronecker': report.to_json()},
                        'computed: Kronecker product of representations')
        if not self.use_lv_bound:
            return Step(5, 'no bound on the rank of quasi-products is assumed', 'skipped', {})
        self.bound = self.lv_bound
        self.assumptions.append({'claim': 'quasi-products of {} and {} have rank at most {}'.format(self.X.name, self.Y.name, self.bound),
                                 'bound': self.bound, 'citation': self.config.lv_citation})
        return Step(5, 'quasi-products of {} and {} have rank at most {}'.format(self.X.name, self.Y.name, self.bound),
                    'assumed', {'bound': self.bound}, self.config.lv_citation)

    def step_verdict(self) -> Step:
        contradiction = self.bound is not None and self.deficit > self.bound
        claim = '{} > {}'.format(self.deficit, self.bound) if contradiction else 'no bound below {}'.format(self.deficit)
        return Step(6, claim, 'pass', {'deficit': self.deficit, 'bound': self.bound, 'realized_rank': self.realized_rank,
                                       'contradiction': contradiction})

    def run(self) -> TheoremReport:
        steps = []
        for build in (self.step_matroid, self.step_hilbert, self.step_degree_two, self.step_quasiproduct,
                      self.step_bound, self.step_verdict):
            index = len(steps) + 1
            try:
                step = build()
            except TropmatError as err:
                step = Step(index, build.__name__, 'fail', {'error': '{}: {}'.format(type(err).__name__, err)})
            steps.append(step)
            logger.info('Step {} [{}]: {}'.format(step.index, step.status, step.claim))
            if step.status == 'fail':
                return TheoremReport(self.pair, steps, self.assumptions, 'FAILED(step {})'.format(step.index),
                                     self.deficit, self.bound)
        verdict = CONTRADICTION if steps[-1].evidence['contradiction'] else NO_CONTRADICTION
        return TheoremReport(self.pair, steps, self.assumptions, verdict, self.deficit, self.bound)


def run_theorem_pipeline(config=None, lv_bound: Optional[int] = None, use_lv_bound: bool = True,
                         pair: Tuple[str, str] = ('U23', 'vamos')) -> TheoremReport:
    return TheoremPipeline(pair[0], pair[1], config, lv_bound, use_lv_bound).run()


# degree-one certificates on candidate ideals

@dataclass
class CandidateReport:
    certified: bool
    saturated: bool
    degree_one_match: bool
    bases_checked: int
    certificates_passed: int
    hilbert: List[int]
    lower_bounds: List[int]
    upper_bounds: List[int]
    violations: List[str]
    conclusion: str

    def to_json(self) -> dict:
        return asdict(self)


def certify_candidate(I: TruncatedTropicalIdeal, M: Matroid, config=None) -> CandidateReport:
    """Check a Boolean homogeneous candidate whose variety should contain B(M)."""
    config = config or I.config
    if not I.homogeneous or not I.is_boolean:
        raise PreconditionError("The candidate must be a Boolean homogeneous ideal.")
    if M.n != I.n:
        raise DimensionError("Matroid on {} elements for an ideal in {} variables.".format(M.n, I.n))
    if not is_saturated(I):
        raise CertificateError("The candidate is not saturated at level D; run saturate first.")
    violations = []
    J1 = degree_one_space(I)
    match = set(J1.span.masks) == set(M.circuit_masks())
    checked = passed = 0
    if not match:
        violations.append('M(J_1) has circuits {} but M has {}'.format(
            sorted(members(m) for m in J1.span.masks), sorted(members(m) for m in M.circuit_masks())))
    else:
        for B in sorted(M.bases, key=sorted):
            report = flag_binomial_certificate(I, M, sorted(B), config)
            checked += 1
            if report.passed:
                passed += 1
            else:
                violations.append('flag certificate fails for basis {}'.format(sorted(B)))
    hilbert = I.hilbert_table()
    r = fan_independence_complex(M, config, oracle=False).dimension
    lower = [binomial(r + d, d) for d in range(I.D + 1)]
    upper = [binomial(hilbert[1] - 1 + d, d) if I.D >= 1 else hilbert[0] for d in range(I.D + 1)]
    for d in range(I.D + 1):
        if hilbert[d] < lower[d]:
            violations.append('H({}) = {} is below the independence lower bound C({}+{}, {}) = {}'.format(d, hilbert[d], r, d, d, lower[d]))
        if hilbert[d] > upper[d]:
            violations.append('H({}) = {} is above the degree-one upper bound {}'.format(d, hilbert[d], upper[d]))
    certified = match and checked == passed and not violations
    if certified:
        conclusion = 'M(J_1) = M certified; a tropical ideal with variety B(M) has H(d) = C({}+d, d)'.format(r)
    else:
        conclusion = 'candidate rejected: {}'.format(violations[0])
    logger.info('Candidate check: {}'.format(conclusion))
    return CandidateReport(certified=certified, saturated=True, degree_one_match=match, bases_checked=checked,
                           certificates_passed=passed, hilbert=hilbert, lower_bounds=lower, upper_bounds=upper,
                           violations=violations, conclusion=conclusion)


def binomial_candidate(M: Matroid, split_classes: int, config=None) -> TruncatedTropicalIdeal:
    """Degree-2 Boolean candidate: degree-1 circuits of M plus binomials inside colour classes of K_n.

    Colour c holds the pairs {i, j} with i + j = c mod n and the square of v with 2v = c mod n;
    the first ``split_classes`` colours are cut in two halves, so M(J_2) has rank n + split_classes.
    """
    config = config or default_config()
    n = M.n
    if n % 2 == 0 or not 0 <= split_classes <= n:
        raise PreconditionError("Round-robin colour classes need an odd n and at most n split classes.")
    table = monomial_index_table(n, 2)
    size = monomial_count(n, 2)

    def mon(i, j):
        u = [0] * n
        u[i] += 1
        u[j] += 1
        return table[tuple(u)]

    classes = []
    for c in range(n):
        cls = [mon(i, j) for i in range(n) for j in range(i, n) if (i + j) % n == c]
        classes.append(cls)
    parts = []
    for c, cls in enumerate(classes):
        if c < split_classes:
            half = len(cls) // 2
            parts.extend([cls[:half], cls[half:]])
        else:
            parts.append(cls)
    variable = [table[tuple(1 if k == i else 0 for k in range(n))] for i in range(n)]
    linear = [TropVector.from_finite(monomial_count(n, 1), {variable[i]: 0 for i in members(m)}) for m in M.circuit_masks()]
    quadratic = [TropVector.from_mask(size, (1 << a) | (1 << b)) for part in parts for a in part for b in part if a < b]
    slices = [
        TropicalLinearSpace(1),
        TropicalLinearSpace(monomial_count(n, 1), linear, check=False),
        TropicalLinearSpace(size, [TropVector.from_finite(size, v.finite) for v in linear] + quadratic, check=False),
    ]
    return TruncatedTropicalIdeal(n, 2, slices, homogeneous=True, config=config)
