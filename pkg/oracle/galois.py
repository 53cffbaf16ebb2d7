"""
Small finite fields GF(2), GF(3), GF(4), GF(5) with numpy arithmetic tables.

GF(4) elements are encoded as integers b0 + 2*b1 meaning b0 + b1*x modulo
x^2 + x + 1; prime fields use residues.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from utils.exceptions import FieldError

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (2, 3, 4, 5)


def _gf4_mul(a: int, b: int) -> int:
    # carry-less product reduced by x^2 = x + 1
    prod = 0
    for k in range(2):
        if (b >> k) & 1:
            prod ^= a << k
    if prod & 0b100:
        prod ^= 0b111
    return prod


class GaloisField(object):
    """Finite field of order q in {2, 3, 4, 5}."""

    _cache = {}

    def __new__(cls, q: int):
        if q not in SUPPORTED_ORDERS:
            raise FieldError("Field order [{}] is not supported, choose one of {}.".format(q, SUPPORTED_ORDERS))
        if q not in cls._cache:
            obj = super().__new__(cls)
            obj._build(q)
            cls._cache[q] = obj
        return cls._cache[q]

    def _build(self, q: int):
        self.q = q
        elems = np.arange(q)
        if q == 4:
            self.add_table = np.bitwise_xor.outer(elems, elems)
            self.mul_table = np.array([[_gf4_mul(a, b) for b in range(q)] for a in range(q)])
        else:
            self.add_table = np.add.outer(elems, elems) % q
            self.mul_table = np.multiply.outer(elems, elems) % q
        self.neg_table = np.array([int(np.where(self.add_table[a] == 0)[0][0]) for a in range(q)])
        inv = np.zeros(q, dtype=int)
        for a in range(1, q):
            inv[a] = int(np.where(self.mul_table[a] == 1)[0][0])
        self.inv_table = inv

    def __repr__(self):
        return 'GF({})'.format(self.q)

    def __reduce__(self):
        return (GaloisField, (self.q,))

    def element(self, value: int) -> int:
        """Map an integer label into the field (residue for prime fields)."""
        if self.q == 4:
            if not 0 <= value < 4:
                raise FieldError("GF(4) elements are encoded as 0..3, got [{}].".format(value))
            return int(value)
        return int(value) % self.q

    def array(self, rows) -> np.ndarray:
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if self.q == 4:
            if arr.size and (arr.min() < 0 or arr.max() > 3):
                raise FieldError("GF(4) entries must lie in 0..3.")
            return arr
        return arr % self.q

    def rref(self, mat: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        """Reduced row echelon form and pivot columns."""
        A = self.array(mat).copy()
        m, n = A.shape
        pivots = []
        row = 0
        for col in range(n):
            if row == m:
                break
            nz = np.nonzero(A[row:, col])[0]
            if len(nz) == 0:
                continue
            pr = row + int(nz[0])
            if pr != row:
                A[[row, pr]] = A[[pr, row]]
            A[row] = self.mul_table[self.inv_table[A[row, col]], A[row]]
            for r in range(m):
                if r != row and A[r, col]:
                    factor = self.neg_table[A[r, col]]
                    A[r] = self.add_table[A[r], self.mul_table[factor, A[row]]]
            pivots.append(col)
            row += 1
        return A[:row], pivots

    def rank(self, mat) -> int:
        A = self.array(mat)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def kernel(self, mat) -> np.ndarray:
        """Basis (as rows) of {x : A x = 0}."""
        A = self.array(mat)
        n = A.shape[1]
        R, pivots = self.rref(A)
        free = [j for j in range(n) if j not in pivots]
        basis = []
        for f in free:
            v = np.zeros(n, dtype=np.int64)
            v[f] = 1
            for r, p in enumerate(pivots):
                v[p] = self.neg_table[R[r, f]]
            basis.append(v)
        if not basis:
            return np.zeros((0, n), dtype=np.int64)
        return np.array(basis, dtype=np.int64)

    def row_space(self, mat) -> np.ndarray:
        """Row-reduced basis of the row space."""
        return self.rref(mat)[0]

    def combinations(self, basis: np.ndarray, cap: int) -> np.ndarray:
        """All q**k vectors of the span of k basis rows, refusing spans above ``cap``."""
        k, n = basis.shape
        total = self.q ** k
        if total > cap:
            raise FieldError("Span of dimension {} over GF({}) has {} vectors, above the cap [{}].".format(k, self.q, total, cap))
        coeffs = np.array(np.unravel_index(np.arange(total), (self.q,) * k)).T if k else np.zeros((1, 0), dtype=np.int64)
        vectors = np.zeros((total, n), dtype=np.int64)
        for j in range(k):
            vectors = self.add_table[vectors, self.mul_table[coeffs[:, j][:, None], basis[j][None, :]]]
        return vectors

    def kron(self, A, B) -> np.ndarray:
        """Kronecker product with field multiplication; column x*|B cols| + y pairs column x of A with y of B."""
        A = self.array(A)
        B = self.array(B)
        left = np.kron(A, np.ones_like(B))
        right = np.kron(np.ones_like(A), B)
        return self.mul_table[left, right]


@dataclass
class FieldMatrix:
    """Matrix over GF(q); its column matroid is the matroid it represents."""
    q: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.gf = GaloisField(self.q)
        self.entries = self.gf.array(self.entries)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def n_columns(self) -> int:
        return self.entries.shape[1]

    def rank(self, columns: Sequence[int] = None) -> int:
        if columns is None:
            return self.gf.rank(self.entries)
        columns = list(columns)
        if not columns:
            return 0
        return self.gf.rank(self.entries[:, columns])

    def kernel(self) -> np.ndarray:
        return self.gf.kernel(self.entries)

    def kron(self, other: 'FieldMatrix') -> 'FieldMatrix':
        if other.q != self.q:
            raise FieldError("Kronecker product of matrices over GF({}) and GF({}).".format(self.q, other.q))
        return FieldMatrix(self.q, self.gf.kron(self.entries, other.entries))

    def to_json(self) -> dict:
        return {'format': 'fmatrix/v1', 'q': self.q, 'rows': self.entries.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> 'FieldMatrix':
        if data.get('format') != 'fmatrix/v1':
            raise FieldError("Expected format fmatrix/v1, got [{}].".format(data.get('format')))
        return cls(int(data['q']), np.array(data['rows'], dtype=np.int64))
