"""
Classical linear algebra over GF(q) with the trivial valuation, used as ground truth.

The tropicalization of a linear space L ⊆ GF(q)^N under the trivial valuation is
the Boolean space whose circuits are the minimal supports of nonzero vectors of L;
those are found by enumerating L, so every span handled here is capped.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ideal.tropideal import TruncatedTropicalIdeal
from matroids.matroid import ColumnMatroid, Matroid, are_isomorphic
from matroids.valuated import TropicalLinearSpace, minimal_masks
from semiring.trop_core import TropVector, mask_of
from semiring.troppoly import Monomial, degree_offset, monomial_count, monomial_index_table, monomials_of_degree, monomials_upto
from utils.config import default_config
from utils.exceptions import DimensionError, FieldError, MatroidError, TruncationError
from .galois import FieldMatrix, GaloisField

logger = logging.getLogger(__name__)

FieldPolynomial = Dict[Monomial, int]


def support_circuits(gf: GaloisField, rows: np.ndarray, cap: int) -> List[int]:
    """Minimal supports of the nonzero vectors in the row space."""
    if rows.shape[0] == 0:
        return []
    basis = gf.row_space(rows)
    if basis.shape[0] == 0:
        return []
    vectors = gf.combinations(basis, cap)
    supports = set()
    for v in vectors:
        nz = np.flatnonzero(v)
        if len(nz):
            supports.add(mask_of(int(j) for j in nz))
    return minimal_masks(supports)


def _clean(gf: GaloisField, poly: FieldPolynomial, n: int) -> FieldPolynomial:
    out = {}
    for u, c in poly.items():
        if len(u) != n:
            raise DimensionError("Monomial {} does not have {} exponents.".format(u, n))
        c = gf.element(c)
        if c:
            out[tuple(u)] = c
    return out


def _degree(poly: FieldPolynomial) -> int:
    return max((sum(u) for u in poly), default=-1)


def _multiples(polys: Sequence[FieldPolynomial], n: int, target: Dict[Monomial, int], multipliers) -> List[np.ndarray]:
    rows = []
    for g in polys:
        for m in multipliers(g):
            row = np.zeros(len(target), dtype=np.int64)
            for u, c in g.items():
                row[target[tuple(a + b for a, b in zip(u, m))]] = c
            rows.append(row)
    return rows


def trop_polynomial_ideal(q: int, generators: Sequence[FieldPolynomial], n: int, D: int, config=None) -> TruncatedTropicalIdeal:
    """trop of the ideal generated by polynomials over GF(q), slice by slice up to D."""
    config = config or default_config()
    gf = GaloisField(q)
    polys = [g for g in (_clean(gf, g, n) for g in generators) if g]
    homogeneous = all(len({sum(u) for u in g}) == 1 for g in polys)
    try:
        config.check_truncation(n, D)
    except ValueError as err:
        raise TruncationError(str(err))
    slices = []
    if homogeneous:
        # I_{<=d} is the direct sum of its homogeneous components
        components = []
        for e in range(D + 1):
            table = {u: k for k, u in enumerate(monomials_of_degree(n, e))}
            rows = _multiples(polys, n, table, lambda g: monomials_of_degree(n, e - _degree(g)) if _degree(g) <= e else ())
            mat = np.array(rows, dtype=np.int64) if rows else np.zeros((0, len(table)), dtype=np.int64)
            components.append(support_circuits(gf, mat, config.enumeration_cap))
            logger.debug('GF({}) component of degree {}: {} circuits.'.format(q, e, len(components[-1])))
        for d in range(D + 1):
            size = monomial_count(n, d)
            vecs = []
            for e in range(d + 1):
                offset = degree_offset(n, e)
                vecs.extend(TropVector.from_mask(size, m << offset) for m in components[e])
            slices.append(TropicalLinearSpace(size, vecs, check=False))
    else:
        for d in range(D + 1):
            table = monomial_index_table(n, d)
            rows = _multiples(polys, n, table, lambda g: monomials_upto(n, d - _degree(g)) if _degree(g) <= d else ())
            mat = np.array(rows, dtype=np.int64) if rows else np.zeros((0, len(table)), dtype=np.int64)
            masks = support_circuits(gf, mat, config.enumeration_cap)
            slices.append(TropicalLinearSpace(len(table), [TropVector.from_mask(len(table), m) for m in masks], check=False))
    return TruncatedTropicalIdeal(n, D, slices, homogeneous=homogeneous, config=config)


def linear_form(q: int, coefficients: Sequence[int], n: int) -> FieldPolynomial:
    """Coefficients of x_0..x_{n-1}, optionally followed by a constant term."""
    if len(coefficients) not in (n, n + 1):
        raise DimensionError("A linear form in {} variables needs {} or {} coefficients, got {}.".format(n, n, n + 1, len(coefficients)))
    poly = {}
    for i in range(n):
        u = [0] * n
        u[i] = 1
        poly[tuple(u)] = int(coefficients[i])
    if len(coefficients) == n + 1:
        poly[(0,) * n] = int(coefficients[n])
    return poly


def trop_linear_ideal(q: int, forms: Sequence[Sequence[int]], n: int, D: int, config=None) -> TruncatedTropicalIdeal:
    return trop_polynomial_ideal(q, [linear_form(q, f, n) for f in forms], n, D, config)


def bergman_ideal(A: FieldMatrix, D: int, config=None) -> TruncatedTropicalIdeal:
    """trop of the linear ideal of the row space of A; its variety is the Bergman fan of M[A]."""
    kernel = A.kernel()
    n = A.n_columns
    forms = [list(int(x) for x in row) for row in kernel]
    if not forms:
        return TruncatedTropicalIdeal.zero(n, D, homogeneous=True, config=config)
    return trop_linear_ideal(A.q, forms, n, D, config)


@dataclass
class QuasiProductReport:
    passed: bool
    rank: int
    rank_product: int
    rows_ok: List[bool] = field(default_factory=list)
    columns_ok: List[bool] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def exceeds_product(self) -> bool:
        return self.rank > self.rank_product

    def to_json(self) -> dict:
        return {
            'passed': self.passed,
            'rank': self.rank,
            'rank_product': self.rank_product,
            'rows_ok': self.rows_ok,
            'columns_ok': self.columns_ok,
            'failures': self.failures,
        }


def _labeling(Q: Matroid, nx: int, ny: int, labeling: Optional[Sequence[Sequence[int]]]) -> List[List[int]]:
    if Q.n != nx * ny:
        raise DimensionError("Quasi-product on {} elements for factors of sizes {} and {}.".format(Q.n, nx, ny))
    if labeling is None:
        return [[x * ny + y for y in range(ny)] for x in range(nx)]
    grid = [list(row) for row in labeling]
    flat = sorted(e for row in grid for e in row)
    if len(grid) != nx or any(len(row) != ny for row in grid) or flat != list(range(Q.n)):
        raise DimensionError("Labeling is not a bijection between X x Y and the ground set of Q.")
    return grid


def quasiproduct_check(Q: Matroid, M: Matroid, N: Matroid, labeling: Optional[Sequence[Sequence[int]]] = None) -> QuasiProductReport:
    """Rows {x} x Y must restrict to N and columns X x {y} to M; element (x, y) is labeled x*|Y| + y by default."""
    grid = _labeling(Q, M.n, N.n, labeling)
    failures = []
    rows_ok = []
    for x, row in enumerate(grid):
        iso = are_isomorphic(Q.restriction(row), N)
        rows_ok.append(bool(iso))
        if not iso:
            failures.append('row {}: {}'.format(x, iso.reason))
    columns_ok = []
    for y in range(N.n):
        column = [grid[x][y] for x in range(M.n)]
        iso = are_isomorphic(Q.restriction(column), M)
        columns_ok.append(bool(iso))
        if not iso:
            failures.append('column {}: {}'.format(y, iso.reason))
    rank, product = Q.rank(), M.rank() * N.rank()
    return QuasiProductReport(passed=not failures, rank=rank, rank_product=product, rows_ok=rows_ok,
                              columns_ok=columns_ok, failures=failures)


def kronecker_quasiproduct(A: FieldMatrix, B: FieldMatrix) -> Tuple[Matroid, QuasiProductReport]:
    """Column matroid of A ⊗ B together with its quasi-product report against M[A] and M[B]."""
    if A.q != B.q:
        raise FieldError("Kronecker product of matrices over GF({}) and GF({}).".format(A.q, B.q))
    M, N = ColumnMatroid(A), ColumnMatroid(B)
    for name, part in (('left', M), ('right', N)):
        loops = part.loops()
        if loops:
            raise MatroidError("The {} factor has loops {}.".format(name, sorted(loops)))
    Q = ColumnMatroid(A.kron(B), name='kron')
    report = quasiproduct_check(Q, M, N)
    if report.rank != report.rank_product:
        report.passed = False
        report.failures.append('rank {} differs from the product {}'.format(report.rank, report.rank_product))
    logger.info('Kronecker quasi-product over GF({}): rank {} on {} elements.'.format(A.q, report.rank, Q.n))
    return Q, report
