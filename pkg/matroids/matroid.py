"""
Finite matroids on the ground set 0..n-1.

Subsets are handled internally as int bitmasks and exposed as frozensets.
``Matroid`` stores an explicit basis family; the subclasses answer rank
queries from an oracle (uniform, column, circuit-defined, minors, duals,
direct sums) and only enumerate bases on demand.
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from oracle.galois import FieldMatrix
from semiring.trop_core import mask_of, members
from utils.config import default_config
from utils.exceptions import FieldError, MatroidError

logger = logging.getLogger(__name__)


def popcount(mask: int) -> int:
    return bin(mask).count('1')


def _as_set(mask: int) -> FrozenSet[int]:
    return frozenset(members(mask))


class Matroid(object):
    """Matroid given by an explicit family of bases."""

    def __init__(self, n: int, bases: Iterable[Iterable[int]] = (), name: Optional[str] = None, validate: bool = True):
        self.n = n
        self.name = name
        self._lock = threading.RLock()
        self._rank_cache: Dict[int, int] = {}
        self._circuits: Optional[Tuple[int, ...]] = None
        self._flats: Optional[Dict[int, Tuple[int, ...]]] = None
        self._bases: Optional[Tuple[int, ...]] = None
        self._check_size()
        if type(self) is Matroid:
            masks = sorted({self._mask(B) for B in bases})
            if not masks:
                raise MatroidError("A matroid needs at least one basis.")
            sizes = {popcount(m) for m in masks}
            if len(sizes) != 1:
                raise MatroidError("Bases of different sizes {} were given.".format(sorted(sizes)))
            self._bases = tuple(masks)
            self._full_rank = sizes.pop()
            if validate:
                self.validate()

    def _check_size(self):
        cap = default_config().max_ground_set
        if self.n < 0:
            raise MatroidError("Ground set size should be non-negative, got [{}].".format(self.n))
        if self.n > cap and type(self) is Matroid:
            raise MatroidError("Explicit basis families are limited to {} elements, got [{}].".format(cap, self.n))

    def _mask(self, A: Iterable[int]) -> int:
        if isinstance(A, int):
            return A
        mask = 0
        for i in A:
            if not 0 <= i < self.n:
                raise MatroidError("Element [{}] is outside the ground set 0..{}.".format(i, self.n - 1))
            mask |= 1 << i
        return mask

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def ground_set(self) -> FrozenSet[int]:
        return frozenset(range(self.n))

    def __repr__(self):
        label = self.name or type(self).__name__
        return '{}(n={}, rank={})'.format(label, self.n, self.rank())

    # rank oracle

    def _compute_rank(self, mask: int) -> int:
        best = 0
        for b in self._bases:
            r = popcount(b & mask)
            if r > best:
                best = r
                if best == self._full_rank:
                    break
        return best

    def rank_of(self, mask: int) -> int:
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        value = self._compute_rank(mask)
        with self._lock:
            self._rank_cache[mask] = value
        return value

    def rank(self, A: Optional[Iterable[int]] = None) -> int:
        if A is None:
            return self.rank_of(self.full_mask)
        return self.rank_of(self._mask(A))

    def is_independent(self, A: Iterable[int]) -> bool:
        mask = self._mask(A)
        return self.rank_of(mask) == popcount(mask)

    def is_basis(self, A: Iterable[int]) -> bool:
        mask = self._mask(A)
        return popcount(mask) == self.rank() and self.rank_of(mask) == popcount(mask)

    def closure_mask(self, mask: int) -> int:
        r = self.rank_of(mask)
        out = mask
        for e in range(self.n):
            bit = 1 << e
            if not mask & bit and self.rank_of(mask | bit) == r:
                out |= bit
        return out

    def closure(self, A: Iterable[int]) -> FrozenSet[int]:
        return _as_set(self.closure_mask(self._mask(A)))

    def is_flat(self, A: Iterable[int]) -> bool:
        mask = self._mask(A)
        return self.closure_mask(mask) == mask

    # derived families

    @property
    def bases(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(_as_set(b) for b in self.basis_masks())

    def basis_masks(self) -> Tuple[int, ...]:
        if self._bases is None:
            with self._lock:
                if self._bases is None:
                    self._bases = tuple(self._enumerate_bases())
        return self._bases

    def _enumerate_bases(self) -> Iterator[int]:
        cap = default_config().max_basis_enumeration
        r = self.rank()
        count = 0
        for combo in itertools.combinations(range(self.n), r):
            mask = mask_of(combo)
            if self.rank_of(mask) == r:
                count += 1
                if count > cap:
                    raise MatroidError("More than {} bases; enumeration refused.".format(cap))
                yield mask

    def circuit_masks(self) -> Tuple[int, ...]:
        if self._circuits is None:
            with self._lock:
                if self._circuits is None:
                    self._circuits = tuple(self._enumerate_circuits())
        return self._circuits

    def _enumerate_circuits(self) -> List[int]:
        out = []
        r = self.rank()
        for size in range(1, min(r + 1, self.n) + 1):
            for combo in itertools.combinations(range(self.n), size):
                mask = mask_of(combo)
                if self.rank_of(mask) != size - 1:
                    continue
                if all(self.rank_of(mask & ~(1 << e)) == size - 1 for e in combo):
                    out.append(mask)
        return out

    def circuits(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(_as_set(c) for c in self.circuit_masks())

    def flats_by_rank(self) -> Dict[int, Tuple[int, ...]]:
        if self._flats is None:
            with self._lock:
                if self._flats is None:
                    self._flats = self._enumerate_flats()
        return self._flats

    def _enumerate_flats(self) -> Dict[int, Tuple[int, ...]]:
        level = {self.closure_mask(0)}
        out = {}
        while level:
            rk = self.rank_of(next(iter(level)))
            out[rk] = tuple(sorted(level))
            nxt = set()
            for F in level:
                for e in range(self.n):
                    if not F & (1 << e):
                        nxt.add(self.closure_mask(F | (1 << e)))
            level = nxt
        return out

    def flats(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(_as_set(F) for level in self.flats_by_rank().values() for F in level)

    def hyperplanes(self) -> FrozenSet[FrozenSet[int]]:
        r = self.rank()
        return frozenset(_as_set(F) for F in self.flats_by_rank().get(r - 1, ()))

    def loops(self) -> FrozenSet[int]:
        return frozenset(e for e in range(self.n) if self.rank_of(1 << e) == 0)

    def is_loopless(self) -> bool:
        return not self.loops()

    def independent_sets(self) -> List[FrozenSet[int]]:
        """All independent sets, grown element by element in increasing order."""
        out = []

        def grow(mask: int, start: int):
            out.append(_as_set(mask))
            for e in range(start, self.n):
                nxt = mask | (1 << e)
                if self.rank_of(nxt) == popcount(nxt):
                    grow(nxt, e + 1)

        grow(0, 0)
        return out

    # constructions

    def restriction(self, A: Iterable[int]) -> 'Matroid':
        return MinorMatroid(self, sorted(self._as_list(A)), ())

    def contraction(self, C: Iterable[int]) -> 'Matroid':
        C = self._as_list(C)
        keep = [e for e in range(self.n) if e not in set(C)]
        return MinorMatroid(self, keep, C)

    def dual(self) -> 'Matroid':
        return DualMatroid(self)

    def _as_list(self, A: Iterable[int]) -> List[int]:
        return members(self._mask(A))

    def to_explicit(self) -> 'Matroid':
        return Matroid(self.n, [members(b) for b in self.basis_masks()], name=self.name, validate=False)

    # checks

    def validate(self):
        """Brute-force basis-exchange check; raises MatroidError on the first violation."""
        bases = self.basis_masks()
        basis_set = set(bases)
        if not bases:
            raise MatroidError("A matroid needs at least one basis.")
        for B1 in bases:
            for B2 in bases:
                if B1 == B2:
                    continue
                for x in members(B1 & ~B2):
                    drop = B1 & ~(1 << x)
                    if not any((drop | (1 << y)) in basis_set for y in members(B2 & ~B1)):
                        raise MatroidError("Basis exchange fails for {} and {} at element {}.".format(members(B1), members(B2), x))
        return True

    def maximal_flags(self, B: Sequence[int]) -> 'FlagOfFlats':
        """Flag F_i = closure(b_1..b_i) for an ordered basis, trivial ends dropped."""
        B = list(B)
        if not self.is_basis(B) or len(set(B)) != len(B):
            raise MatroidError("{} is not a basis.".format(B))
        if not self.is_loopless():
            raise MatroidError("Maximal flags need a loopless matroid; loops {}.".format(sorted(self.loops())))
        chain = []
        for i in range(1, len(B)):
            chain.append(self.closure(B[:i]))
        return FlagOfFlats(tuple(chain))

    def maximal_chains(self) -> Iterator['FlagOfFlats']:
        """Stream every maximal chain of proper nonempty flats."""
        r = self.rank()
        bottom = self.closure_mask(0)

        def covers(F: int) -> List[int]:
            seen = set()
            for e in range(self.n):
                if not F & (1 << e):
                    seen.add(self.closure_mask(F | (1 << e)))
            return sorted(seen)

        def walk(F: int, chain: List[int]):
            if self.rank_of(F) == r - 1:
                yield FlagOfFlats(tuple(_as_set(G) for G in chain))
                return
            for G in covers(F):
                yield from walk(G, chain + [G])

        if r <= 0:
            return
        if r == 1:
            yield FlagOfFlats(())
            return
        yield from walk(bottom, [])

    def summary(self) -> dict:
        return {
            'n': self.n,
            'rank': self.rank(),
            'loops': sorted(self.loops()),
            'circuits': len(self.circuit_masks()),
        }


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int, name: Optional[str] = None):
        if not 0 <= r <= n:
            raise MatroidError("Uniform matroid needs 0 <= r <= n, got r = {}, n = {}.".format(r, n))
        self.r = r
        super().__init__(n, name=name or 'U{},{}'.format(r, n))

    def _compute_rank(self, mask: int) -> int:
        return min(popcount(mask), self.r)

    def _enumerate_circuits(self) -> List[int]:
        if self.r == self.n:
            return []
        return [mask_of(c) for c in itertools.combinations(range(self.n), self.r + 1)]


class ColumnMatroid(Matroid):
    """Column matroid of a matrix over a small finite field."""

    def __init__(self, matrix, name: Optional[str] = None):
        self.matrix = matrix
        super().__init__(matrix.n_columns, name=name)

    def _compute_rank(self, mask: int) -> int:
        return self.matrix.rank(members(mask))


class CircuitMatroid(Matroid):
    """Matroid given by its complete circuit set; rank by greedy independence."""

    def __init__(self, n: int, circuits: Iterable[int], name: Optional[str] = None):
        super().__init__(n, name=name)
        masks = sorted(set(int(c) for c in circuits))
        if any(c == 0 or c >> n for c in masks):
            raise MatroidError("Circuits must be nonempty subsets of 0..{}.".format(n - 1))
        self._circuits = tuple(masks)
        self._circuit_array = np.array(masks, dtype=np.uint64) if n <= 63 and masks else None

    def _contains_circuit(self, mask: int) -> bool:
        if self._circuit_array is not None:
            return bool(np.any((self._circuit_array & np.uint64(~mask & ((1 << self.n) - 1))) == 0))
        return any(c & ~mask == 0 for c in self._circuits)

    def _compute_rank(self, mask: int) -> int:
        indep = 0
        for e in members(mask):
            if not self._contains_circuit(indep | (1 << e)):
                indep |= 1 << e
        return popcount(indep)


class MinorMatroid(Matroid):
    """(M | keep ∪ contract) / contract, relabelled to 0..|keep|-1 in the order of ``keep``."""

    def __init__(self, parent: Matroid, keep: Sequence[int], contract: Sequence[int] = ()):
        keep = list(keep)
        contract = list(contract)
        if set(keep) & set(contract):
            raise MatroidError("Kept and contracted sets overlap.")
        self.parent = parent
        self.labels = keep
        self._contract_mask = parent._mask(contract)
        self._offset = parent.rank_of(self._contract_mask)
        parent._mask(keep)
        super().__init__(len(keep))

    def _lift(self, mask: int) -> int:
        out = 0
        for i in members(mask):
            out |= 1 << self.labels[i]
        return out

    def _compute_rank(self, mask: int) -> int:
        return self.parent.rank_of(self._lift(mask) | self._contract_mask) - self._offset


class DualMatroid(Matroid):
    def __init__(self, parent: Matroid):
        self.parent = parent
        super().__init__(parent.n)

    def _compute_rank(self, mask: int) -> int:
        complement = self.full_mask & ~mask
        return popcount(mask) + self.parent.rank_of(complement) - self.parent.rank()


class DirectSumMatroid(Matroid):
    """Direct sum; the elements of later summands are numbered after earlier ones."""

    def __init__(self, parts: Sequence[Matroid], name: Optional[str] = None):
        self.parts = list(parts)
        self.offsets = []
        total = 0
        for part in self.parts:
            self.offsets.append(total)
            total += part.n
        super().__init__(total, name=name or '+'.join(p.name or type(p).__name__ for p in self.parts))

    def _compute_rank(self, mask: int) -> int:
        total = 0
        for part, off in zip(self.parts, self.offsets):
            total += part.rank_of((mask >> off) & part.full_mask)
        return total

    def _enumerate_circuits(self) -> List[int]:
        out = []
        for part, off in zip(self.parts, self.offsets):
            out.extend(c << off for c in part.circuit_masks())
        return sorted(out)


class FlagMinorSum(Matroid):
    """Direct sum of (M|F_j)/F_{j-1} along a chain of flats, on the original labels."""

    def __init__(self, parent: Matroid, chain: Sequence[Iterable[int]]):
        self.parent = parent
        blocks = [parent._mask(F) for F in chain] + [parent.full_mask]
        self._levels = blocks
        super().__init__(parent.n)

    def _compute_rank(self, mask: int) -> int:
        total = 0
        prev = 0
        for F in self._levels:
            total += self.parent.rank_of((mask & F) | prev) - self.parent.rank_of(prev)
            prev = F
        return total


@dataclass(frozen=True)
class FlagOfFlats:
    """Strictly increasing chain of proper nonempty flats."""
    chain: Tuple[FrozenSet[int], ...]

    def __len__(self):
        return len(self.chain)

    def __iter__(self):
        return iter(self.chain)

    def is_valid(self, M: Matroid) -> bool:
        prev = frozenset()
        for F in self.chain:
            if not F or len(F) >= M.n or not M.is_flat(F) or not prev < F:
                return False
            prev = F
        return True

    def with_ends(self, n: int) -> List[FrozenSet[int]]:
        return [frozenset()] + list(self.chain) + [frozenset(range(n))]

    def blocks(self, n: int) -> List[FrozenSet[int]]:
        """F_k minus F_{k-1} for k = 1..k+1, the last block being the complement of the top flat."""
        full = self.with_ends(n)
        return [full[k] - full[k - 1] for k in range(1, len(full))]

    def indicator_sum(self, n: int, coefficients: Sequence[int]) -> List[int]:
        """Σ a_k e_{F_k}, a point in the relative interior of the cone when every a_k > 0."""
        if len(coefficients) != len(self.chain):
            raise MatroidError("Need {} coefficients, got {}.".format(len(self.chain), len(coefficients)))
        w = [0] * n
        for F, a in zip(self.chain, coefficients):
            for i in F:
                w[i] += a
        return w

    def to_json(self) -> List[List[int]]:
        return [sorted(F) for F in self.chain]


# constructors

def uniform(r: int, n: int) -> Matroid:
    return UniformMatroid(r, n)


VAMOS_NON_BASES = ((0, 1, 2, 3), (0, 1, 4, 5), (0, 1, 6, 7), (2, 3, 4, 5), (2, 3, 6, 7))


def vamos() -> Matroid:
    """Vámos matroid on 0..7 with pairs (0,1), (2,3), (4,5), (6,7)."""
    excluded = {mask_of(s) for s in VAMOS_NON_BASES}
    bases = [c for c in itertools.combinations(range(8), 4) if mask_of(c) not in excluded]
    return Matroid(8, bases, name='vamos')


def direct_sum(M: Matroid, N: Matroid) -> Matroid:
    return DirectSumMatroid([M, N])


def restriction(M: Matroid, A: Iterable[int]) -> Matroid:
    return M.restriction(A)


def from_matrix(q: int, matrix) -> Matroid:
    if not isinstance(matrix, FieldMatrix):
        matrix = FieldMatrix(q, np.array(matrix, dtype=np.int64))
    elif matrix.q != q:
        raise FieldError("Matrix over GF({}) passed for GF({}).".format(matrix.q, q))
    return ColumnMatroid(matrix)


def graphic(n_vertices: int, edges: Sequence[Tuple[int, int]], name: Optional[str] = None) -> Matroid:
    """Cycle matroid of a graph via its GF(2) incidence matrix."""
    mat = np.zeros((n_vertices, len(edges)), dtype=np.int64)
    for k, (a, b) in enumerate(edges):
        mat[a, k] = 1
        mat[b, k] = 1
    return ColumnMatroid(FieldMatrix(2, mat), name=name)


# isomorphism

@dataclass
class IsomorphismResult:
    isomorphic: bool
    reason: str
    mapping: Optional[Tuple[int, ...]] = None

    def __bool__(self):
        return self.isomorphic


def _fingerprints(M: Matroid) -> List[tuple]:
    circuits = M.circuit_masks()
    prints = []
    for e in range(M.n):
        sizes = sorted(popcount(c) for c in circuits if c >> e & 1)
        parallel = sum(1 for f in range(M.n) if f != e and M.rank_of((1 << e) | (1 << f)) == 1)
        prints.append((M.rank_of(1 << e), parallel, tuple(sizes)))
    return prints


def are_isomorphic(M: Matroid, N: Matroid) -> IsomorphismResult:
    """Exact isomorphism test by backtracking with circuit-image pruning."""
    cap = default_config().max_isomorphism_size
    if M.n != N.n:
        return IsomorphismResult(False, 'ground sets of size {} and {}'.format(M.n, N.n))
    if M.n > cap:
        raise MatroidError("Isomorphism search is limited to {} elements, got [{}].".format(cap, M.n))
    if M.rank() != N.rank():
        return IsomorphismResult(False, 'ranks {} and {}'.format(M.rank(), N.rank()))
    nb_m, nb_n = len(M.basis_masks()), len(N.basis_masks())
    if nb_m != nb_n:
        return IsomorphismResult(False, 'basis counts {} and {}'.format(nb_m, nb_n))
    cm, cn = M.circuit_masks(), N.circuit_masks()
    if sorted(popcount(c) for c in cm) != sorted(popcount(c) for c in cn):
        return IsomorphismResult(False, 'circuit size profiles differ')
    fm, fn = _fingerprints(M), _fingerprints(N)
    if sorted(fm) != sorted(fn):
        return IsomorphismResult(False, 'element fingerprints differ')

    n = M.n
    circuits_n = set(cn)
    by_last: Dict[int, List[int]] = {e: [] for e in range(n)}
    for c in cm:
        by_last[max(members(c))].append(c)
    circuits_m = set(cm)

    def extend(e: int, used: int, phi: List[int]) -> bool:
        if e == n:
            return True
        for t in range(n):
            if used >> t & 1 or fm[e] != fn[t]:
                continue
            phi.append(t)
            ok = True
            for c in by_last[e]:
                img = 0
                for x in members(c):
                    img |= 1 << phi[x]
                if img not in circuits_n:
                    ok = False
                    break
            if ok:
                # circuits of N living inside the current image must pull back
                inverse = {v: k for k, v in enumerate(phi)}
                img_mask = used | (1 << t)
                for c in cn:
                    if c >> t & 1 and c & ~img_mask == 0:
                        pre = 0
                        for y in members(c):
                            pre |= 1 << inverse[y]
                        if pre not in circuits_m:
                            ok = False
                            break
            if ok and extend(e + 1, used | (1 << t), phi):
                return True
            phi.pop()
        return False

    phi: List[int] = []
    if extend(0, 0, phi):
        return IsomorphismResult(True, 'isomorphism found', tuple(phi))
    return IsomorphismResult(False, 'no bijection maps circuits onto circuits')
