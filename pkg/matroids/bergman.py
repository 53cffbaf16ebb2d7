"""
Bergman fans of loopless matroids, represented by membership predicates and
flag enumeration.

A weight w lies in B(M) when every proper superlevel set {i : w_i >= s} is a
flat; the cone of a chain F_1 ⊂ ... ⊂ F_k is spanned by the indicator vectors
e_{F_j} plus the lineality R·1.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from semiring.trop_core import INF, mask_of, members, to_fraction
from utils.config import default_config
from utils.exceptions import DimensionError, FanError, MatroidError, PreconditionError
from .matroid import FlagMinorSum, FlagOfFlats, Matroid

logger = logging.getLogger(__name__)


def _weights(M: Matroid, w: Sequence) -> List[Fraction]:
    if len(w) != M.n:
        raise DimensionError("Weight of length {} for a matroid on {} elements.".format(len(w), M.n))
    out = [to_fraction(x) for x in w]
    if any(x is INF for x in out):
        raise DimensionError("Fan weights must be finite.")
    return out


def _require_loopless(M: Matroid):
    loops = M.loops()
    if loops:
        raise MatroidError("Bergman fans need a loopless matroid; loops {}.".format(sorted(loops)))


@dataclass
class MembershipResult:
    member: bool
    flag: Optional[FlagOfFlats] = None

    def __bool__(self):
        return self.member


def superlevel_masks(w: Sequence[Fraction]) -> List[int]:
    """Proper superlevel sets of w, from the largest value down."""
    levels = sorted(set(w), reverse=True)
    out = []
    for s in levels[:-1]:
        out.append(mask_of(i for i, x in enumerate(w) if x >= s))
    return out


def flag_criterion(M: Matroid, w: Sequence[Fraction]) -> Tuple[bool, List[int]]:
    chain = superlevel_masks(w)
    return all(M.closure_mask(S) == S for S in chain), chain


def circuit_criterion(M: Matroid, w: Sequence[Fraction]) -> bool:
    """Every circuit attains its minimum weight at least twice."""
    for c in M.circuit_masks():
        vals = [w[i] for i in members(c)]
        low = min(vals)
        if vals.count(low) < 2:
            return False
    return True


def membership(M: Matroid, w: Sequence) -> MembershipResult:
    _require_loopless(M)
    w = _weights(M, w)
    by_flags, chain = flag_criterion(M, w)
    by_circuits = circuit_criterion(M, w)
    if by_flags != by_circuits:
        raise FanError("Flag and circuit criteria disagree at w = {}.".format([str(x) for x in w]))
    if not by_flags:
        return MembershipResult(False)
    return MembershipResult(True, FlagOfFlats(tuple(frozenset(members(S)) for S in chain)))


def star(M: Matroid, w: Sequence) -> Matroid:
    """Matroid of the star fan at w: direct sum of (M|F_j)/F_{j-1} along the flag of w."""
    result = membership(M, w)
    if not result:
        raise FanError("w = {} is not in the Bergman fan.".format(list(w)))
    return FlagMinorSum(M, [sorted(F) for F in result.flag])


def star_epsilon(w: Sequence[Fraction], u: Sequence[Fraction]) -> Fraction:
    """Step small enough that w + εu keeps every strict order between coordinates of w."""
    values = sorted(set(w))
    gaps = [b - a for a, b in zip(values, values[1:])]
    gap = min(gaps) if gaps else Fraction(1)
    spread = max(u) - min(u) if u else Fraction(0)
    return gap / (2 * (spread + 1))


def check_star_property(M: Matroid, w: Sequence, us: Iterable[Sequence]) -> List[Tuple[List[Fraction], bool, bool]]:
    """Compare membership in the star matroid's fan with membership of w + εu; returns disagreements."""
    w = _weights(M, w)
    S = star(M, w)
    bad = []
    for u in us:
        u = _weights(M, u)
        eps = star_epsilon(w, u)
        local = bool(membership(S, u))
        moved = bool(membership(M, [a + eps * b for a, b in zip(w, u)]))
        if local != moved:
            bad.append((u, local, moved))
    return bad


def cone_dimension(M: Matroid, flag: FlagOfFlats) -> int:
    """Dimension of the cone of a flag including the lineality."""
    return len(flag) + 1


def interior_point(flag: FlagOfFlats, n: int, coefficients: Optional[Sequence[int]] = None) -> List[int]:
    coefficients = coefficients or [1] * len(flag)
    return flag.indicator_sum(n, coefficients)


@dataclass
class IndependenceComplexReport:
    faces: List[FrozenSet[int]]
    facets: List[FrozenSet[int]]
    oracle_faces: Optional[List[FrozenSet[int]]] = None
    agree: Optional[bool] = None

    @property
    def dimension(self) -> int:
        return max((len(F) for F in self.faces), default=0)


def _extend_along_chain(blocks: List[int], target: Dict[int, Fraction], n: int) -> Optional[List[Fraction]]:
    """Full weight constant on blocks, weakly decreasing along them, agreeing with the target."""
    block_values: List[Optional[Fraction]] = []
    for B in blocks:
        vals = {target[i] for i in members(B) if i in target}
        if len(vals) > 1:
            return None
        block_values.append(vals.pop() if vals else None)
    known = [v for v in block_values if v is not None]
    if any(a < b for a, b in zip(known, known[1:])):
        return None
    top = known[0] if known else Fraction(0)
    filled = []
    current = top
    for v in block_values:
        if v is not None:
            current = v
        filled.append(current)
    w = [Fraction(0)] * n
    for B, v in zip(blocks, filled):
        for i in members(B):
            w[i] = v
    return w


def projection_oracle(M: Matroid, A: FrozenSet[int], targets: Sequence[Sequence[Fraction]],
                      chains: Sequence[List[int]]) -> bool:
    """True when every target on A extends to a point of B(M)."""
    A_sorted = sorted(A)
    for t in targets:
        target = dict(zip(A_sorted, t))
        found = False
        for blocks in chains:
            w = _extend_along_chain(blocks, target, M.n)
            if w is None:
                continue
            if not membership(M, w):
                raise FanError("Extension {} built along a flag is not in the fan.".format([str(x) for x in w]))
            found = True
            break
        if not found:
            return False
    return True


def _chain_blocks(M: Matroid) -> List[List[int]]:
    out = []
    for flag in M.maximal_chains():
        out.append([mask_of(B) for B in flag.blocks(M.n)])
    return out


def fan_independence_complex(M: Matroid, config=None, oracle: Optional[bool] = None) -> IndependenceComplexReport:
    """Coordinate sets onto which B(M) projects surjectively; these are the independent sets of M."""
    config = config or default_config()
    _require_loopless(M)
    if M.n > config.max_isomorphism_size:
        raise PreconditionError("Fan independence complexes are limited to {} elements.".format(config.max_isomorphism_size))
    faces = sorted(M.independent_sets(), key=lambda F: (len(F), sorted(F)))
    top = max((len(F) for F in faces), default=0)
    facets = [F for F in faces if len(F) == top]
    report = IndependenceComplexReport(faces=faces, facets=facets)
    if oracle is None:
        oracle = M.n <= config.fan_oracle_max_n
    if not oracle:
        return report
    if M.n > config.fan_oracle_max_n:
        raise PreconditionError("The projection oracle is limited to {} elements.".format(config.fan_oracle_max_n))
    rng = np.random.default_rng(config.seed_num)
    chains = _chain_blocks(M)
    oracle_faces = []
    for size in range(M.n + 1):
        for A in itertools.combinations(range(M.n), size):
            targets = [[Fraction(int(x)) for x in rng.permutation(size) * 3 + rng.integers(0, 2)] for _ in range(config.interior_samples)]
            targets.append([Fraction(0)] * size)
            if projection_oracle(M, frozenset(A), targets, chains):
                oracle_faces.append(frozenset(A))
    oracle_faces.sort(key=lambda F: (len(F), sorted(F)))
    report.oracle_faces = oracle_faces
    report.agree = oracle_faces == faces
    if not report.agree:
        logger.warning('Projection oracle disagrees with the independent sets of {}.'.format(M))
    return report


@dataclass
class FanComparison:
    passed: bool
    samples: int
    disagreements: List[Tuple[List[str], bool, bool]]
    weight_mismatches: List[List[str]] = field(default_factory=list)


def sample_points(n: int, config=None, reference: Optional[Matroid] = None) -> List[List[Fraction]]:
    """Deterministic sample: box lattice points (or seeded random ones) plus flag-cone interior points."""
    config = config or default_config()
    b = config.fan_samples_box
    pts: List[List[Fraction]] = []
    if (2 * b + 1) ** n <= 4096:
        for p in itertools.product(range(-b, b + 1), repeat=n):
            pts.append([Fraction(x) for x in p])
    else:
        rng = np.random.default_rng(config.seed_num)
        for _ in range(config.fan_samples_random):
            pts.append([Fraction(int(x)) for x in rng.integers(-b, b + 1, size=n)])
    if reference is not None:
        for flag in reference.maximal_chains():
            pts.append([Fraction(x) for x in interior_point(flag, n, list(range(1, len(flag) + 1)))])
    return pts


def fans_equal_sampled(F1: Callable[[Sequence[Fraction]], bool], F2: Callable[[Sequence[Fraction]], bool], n: int,
                       samples: Optional[Sequence[Sequence[Fraction]]] = None, config=None,
                       reference: Optional[Matroid] = None,
                       weights: Optional[Tuple[Callable, Callable]] = None) -> FanComparison:
    """Compare two fans through their membership predicates on a deterministic sample."""
    pts = list(samples) if samples is not None else sample_points(n, config, reference)
    bad = []
    weight_bad = []
    for p in pts:
        if len(p) != n:
            raise DimensionError("Sample point of length {} for n = {}.".format(len(p), n))
        a, b = bool(F1(p)), bool(F2(p))
        if a != b:
            bad.append(([str(x) for x in p], a, b))
        elif a and weights is not None and weights[0](p) != weights[1](p):
            weight_bad.append([str(x) for x in p])
    return FanComparison(passed=not bad and not weight_bad, samples=len(pts), disagreements=bad, weight_mismatches=weight_bad)


def bergman_predicate(M: Matroid) -> Callable[[Sequence[Fraction]], bool]:
    return lambda w: bool(membership(M, w))


def maximal_cone_weight(M: Matroid) -> Callable[[Sequence[Fraction]], int]:
    """Weight 1 on points whose flag is maximal, 0 elsewhere."""
    r = M.rank()

    def weight(w):
        res = membership(M, w)
        return 1 if res and len(res.flag) == r - 1 else 0
    return weight
