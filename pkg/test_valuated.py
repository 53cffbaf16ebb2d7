import functools
import operator
from fractions import Fraction

import numpy as np
import pytest

from matroids.matroid import Matroid, are_isomorphic, direct_sum, from_matrix, uniform
from matroids.valuated import (TropicalLinearSpace, ValuatedMatroid, boolean_intersection, circuit_complete,
                               initial_matroid, initial_matroid_from_circuits, initial_space, underlying_matroid)
from oracle.galois import GaloisField
from oracle.realisable import support_circuits
from semiring.trop_core import INF, TropVector, members
from utils.exceptions import CircuitSetError, MatroidError


def boolean_space(n, supports):
    return TropicalLinearSpace(n, [TropVector.indicator(n, s) for s in supports])


def union_of_circuits(M, S):
    # S is a union of circuits of M exactly when M|S has no coloop
    r = M.rank_of(S)
    return all(M.rank_of(S & ~(1 << e)) == r for e in members(S))


def small_matroids():
    out = [uniform(r, n) for n in range(2, 6) for r in range(1, n + 1)]
    out += [direct_sum(uniform(1, 2), uniform(1, 3)), direct_sum(uniform(1, 2), uniform(2, 3))]
    rng = np.random.default_rng(23)
    for n in (4, 5):
        for rows in (2, 3):
            for _ in range(3):
                out.append(from_matrix(2, rng.integers(0, 2, size=(rows, n))))
    return out


class TestTropicalLinearSpace:
    def test_u23(self):
        L = boolean_space(3, [[0, 1, 2]])
        assert are_isomorphic(underlying_matroid(L), uniform(2, 3))
        assert L.dim == 1

    def test_u13(self):
        L = boolean_space(3, [[0, 1], [0, 2], [1, 2]])
        assert are_isomorphic(L.underlying, uniform(1, 3))
        assert L.dim == 2

    def test_row_space_supports(self):
        masks = support_circuits(GaloisField(2), GaloisField(2).array([[1, 1, 1]]), 1 << 10)
        L = TropicalLinearSpace(3, [TropVector.from_mask(3, m) for m in masks])
        assert masks == [0b111]
        assert L.dim == 1

    def test_not_an_antichain(self):
        with pytest.raises(CircuitSetError):
            boolean_space(3, [[0, 1], [0, 1, 2]])

    def test_shared_support(self):
        with pytest.raises(CircuitSetError):
            TropicalLinearSpace(2, [TropVector.of([0, 0]), TropVector.of([0, 1])])

    def test_contains(self):
        L = boolean_space(3, [[0, 1], [0, 2], [1, 2]])
        assert L.contains(TropVector.of([0, 0, 0]))
        assert L.contains(TropVector.of([2, 2, INF]))
        assert not L.contains(TropVector.of([0, INF, INF]))

    def test_json(self):
        L = TropicalLinearSpace(3, [TropVector.of([0, '1/2', INF])])
        again = TropicalLinearSpace.from_json(L.to_json())
        assert again.same_circuits(L)


class TestValuatedMatroid:
    def test_trivial_valuation_validates(self):
        assert ValuatedMatroid.trivial(uniform(2, 4)).validate()

    def test_missing_basis(self):
        with pytest.raises(MatroidError):
            ValuatedMatroid(uniform(1, 2), {frozenset({0}): 0})

    def test_exchange_failure(self):
        U = uniform(2, 4)
        values = {B: 0 for B in U.bases}
        values[frozenset({0, 1})] = -5
        values[frozenset({2, 3})] = -5
        VM = ValuatedMatroid(U, values)
        with pytest.raises(MatroidError):
            VM.validate()

    def test_padic_valuation(self):
        VM = ValuatedMatroid.from_matrix_padic([[1, 0, 1], [0, 1, 2]], 2)
        assert VM.value([0, 1]) == 0
        assert VM.value([0, 2]) == 1
        assert VM.value([1, 2]) == 0
        assert VM.validate()

    def test_padic_valuation_of_rational_minors(self):
        # minors 1, -6 and -1/4
        VM = ValuatedMatroid.from_matrix_padic([[1, 0, '1/4'], [0, 1, -6]], 2)
        assert VM.value([0, 1]) == 0
        assert VM.value([0, 2]) == 1
        assert VM.value([1, 2]) == -2
        assert VM.validate()
        assert ValuatedMatroid.from_matrix_padic([[3, 0], [0, 9]], 3).value([0, 1]) == 3

    def test_circuits_of_padic_space(self):
        VM = ValuatedMatroid.from_matrix_padic([[1, 0, 1], [0, 1, 2]], 2)
        L = VM.tropical_linear_space()
        assert len(L.circuits) == 1
        assert L.circuits[0] == TropVector.of([0, 1, 0])
        assert L.check_elimination().passed


class TestInitialMatroid:
    def test_rank_one(self):
        VM = ValuatedMatroid(Matroid(2, [[0], [1]]), {frozenset({0}): 0, frozenset({1}): 0})
        M = initial_matroid(VM, [0, 1])
        assert M.bases == {frozenset({1})}
        assert M.loops() == frozenset({0})
        assert initial_matroid_from_circuits(VM.tropical_linear_space(), [0, 1]).loops() == frozenset({0})

    def test_zero_weight(self):
        VM = ValuatedMatroid.trivial(uniform(2, 4))
        assert initial_matroid(VM, [0, 0, 0, 0]).bases == uniform(2, 4).bases

    def test_circuit_selection(self):
        L = boolean_space(3, [[0, 1, 2]])
        M = initial_matroid_from_circuits(L, [1, 0, 0])
        assert M.circuit_masks() == (0b110,)
        assert initial_space(L, [1, 0, 0]).dim == L.dim

    def test_vector_and_basis_views_agree(self):
        VM = ValuatedMatroid.from_matrix_padic([[1, 0, 1, 1], [0, 1, 1, 3]], 2)
        L = VM.tropical_linear_space()
        for w in ([0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [3, -1, 0, Fraction(1, 2)]):
            assert initial_matroid(VM, w).bases == initial_matroid_from_circuits(L, w).bases


class TestIntersectionAndCompletion:
    def test_common_vector(self):
        L = boolean_space(3, [[0, 1], [0, 2], [1, 2]])
        assert boolean_intersection(L, L) == TropVector.of([0, 0, 0])

    def test_shared_circuit(self):
        L = boolean_space(3, [[0, 1, 2]])
        assert boolean_intersection(L, L) == TropVector.of([0, 0, 0])

    def test_no_common_vector(self):
        L = boolean_space(3, [[0, 1]])
        L2 = boolean_space(3, [[2]])
        assert boolean_intersection(L, L2) is None

    def test_exhaustive_against_unions_of_circuits(self):
        matroids = small_matroids()
        pairs = 0
        for M in matroids:
            for N in matroids:
                if M.n != N.n:
                    continue
                common = [S for S in range(1, 1 << M.n) if union_of_circuits(M, S) and union_of_circuits(N, S)]
                v = boolean_intersection(TropicalLinearSpace.from_matroid(M), TropicalLinearSpace.from_matroid(N))
                assert (v is not None) == bool(common)
                if common:
                    assert v.mask == functools.reduce(operator.or_, common)
                pairs += 1
        assert pairs > 100

    def test_completion_adds_eliminant(self):
        span = circuit_complete([TropVector.of([0, 0, INF]), TropVector.of([INF, 0, 0])])
        assert set(span.generators) == {TropVector.of([0, 0, INF]), TropVector.of([INF, 0, 0]), TropVector.of([0, INF, 0])}

    def test_completion_takes_largest_eliminant(self):
        # two overlapping triples close up to all triples, the circuits of U(2,4)
        span = circuit_complete([TropVector.indicator(4, [0, 1, 2]), TropVector.indicator(4, [1, 2, 3])])
        assert sorted(span.masks) == [0b0111, 0b1011, 0b1101, 0b1110]
        L = TropicalLinearSpace(4, span.generators)
        assert are_isomorphic(L.underlying, uniform(2, 4))
        assert L.check_elimination().passed

    def test_completion_fixed_point(self):
        gens = [TropVector.of([0, 0, INF]), TropVector.of([0, INF, 0]), TropVector.of([INF, 0, 0])]
        assert set(circuit_complete(gens).generators) == set(gens)
        assert circuit_complete(gens[:1]).generators == (gens[0],)
