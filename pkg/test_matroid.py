import itertools

import numpy as np
import pytest

from matroids.matroid import (FlagMinorSum, Matroid, are_isomorphic, direct_sum, from_matrix, graphic, uniform,
                              vamos)
from matroids.matroid_pool import matroid_select, registered_names, representation_over, representation_select
from oracle.galois import FieldMatrix, GaloisField
from utils.exceptions import FieldError, MatroidError


class TestBasics:
    def test_vamos(self):
        V = vamos()
        assert V.rank() == 4
        assert len(V.bases) == 65
        assert V.validate()
        assert frozenset({0, 1, 2, 3}) in V.circuits()
        assert not V.is_basis([0, 1, 4, 5])

    def test_uniform_rank_and_circuits(self):
        U = uniform(2, 4)
        assert U.rank([0, 1, 2]) == 2
        assert len(U.circuit_masks()) == 4
        assert U.closure([0]) == frozenset({0})
        assert U.closure([0, 1]) == frozenset(range(4))

    def test_uniform_range(self):
        with pytest.raises(MatroidError):
            uniform(3, 2)

    def test_exchange_violation(self):
        with pytest.raises(MatroidError):
            Matroid(4, [[0, 1], [2, 3]])

    def test_mixed_sizes(self):
        with pytest.raises(MatroidError):
            Matroid(3, [[0], [1, 2]])

    def test_element_out_of_range(self):
        with pytest.raises(MatroidError):
            uniform(2, 3).rank([5])

    def test_flats_and_hyperplanes(self):
        U = uniform(2, 3)
        assert U.flats() == {frozenset(), frozenset({0}), frozenset({1}), frozenset({2}), frozenset({0, 1, 2})}
        assert U.hyperplanes() == {frozenset({0}), frozenset({1}), frozenset({2})}

    def test_loops(self):
        M = from_matrix(2, [[1, 0, 1], [0, 0, 1]])
        assert M.loops() == frozenset({1})
        assert not M.is_loopless()

    def test_independent_sets(self):
        assert len(uniform(2, 3).independent_sets()) == 7


class TestConstructions:
    def test_direct_sum(self):
        M = direct_sum(uniform(2, 3), vamos())
        assert M.n == 11
        assert M.rank() == 6
        assert M.rank(range(3)) == 2
        assert len(M.basis_masks()) == 3 * 65
        assert (1 << 3) | (1 << 4) | (1 << 5) | (1 << 6) in M.circuit_masks()

    def test_minors(self):
        U = uniform(2, 3)
        assert U.contraction([0]).rank() == 1
        assert U.restriction([1, 2]).rank() == 2
        assert U.dual().rank() == 1
        assert are_isomorphic(U.dual(), uniform(1, 3))

    def test_graphic_k4(self):
        K4 = graphic(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
        assert K4.rank() == 3
        assert len(K4.bases) == 16

    def test_flag_minor_sum(self):
        S = FlagMinorSum(uniform(2, 3), [[0]])
        assert S.rank() == 2
        assert S.circuit_masks() == (0b110,)


class TestFlags:
    def test_uniform_flag(self):
        flag = uniform(2, 3).maximal_flags([0, 1])
        assert flag.chain == (frozenset({0}),)
        assert flag.blocks(3) == [frozenset({0}), frozenset({1, 2})]

    def test_vamos_flag(self):
        V = vamos()
        flag = V.maximal_flags([0, 2, 4, 6])
        assert len(flag) == 3
        assert flag.is_valid(V)

    def test_trivial_flag(self):
        assert len(uniform(1, 1).maximal_flags([0])) == 0

    def test_not_a_basis(self):
        with pytest.raises(MatroidError):
            uniform(2, 3).maximal_flags([0])

    def test_maximal_chains_are_valid(self):
        V = vamos()
        chains = list(itertools.islice(V.maximal_chains(), 40))
        assert chains
        assert all(len(c) == 3 and c.is_valid(V) for c in chains)

    def test_indicator_sum(self):
        flag = vamos().maximal_flags([0, 2, 4, 6])
        w = flag.indicator_sum(8, [1, 1, 1])
        assert w[0] == 3
        assert min(w) == 0


class TestIsomorphism:
    def test_uniform_vs_matrix(self):
        assert are_isomorphic(uniform(2, 3), from_matrix(2, [[1, 0, 1], [0, 1, 1]]))

    def test_vamos_vs_uniform(self):
        res = are_isomorphic(vamos(), uniform(4, 8))
        assert not res
        assert 'basis counts' in res.reason

    def test_identity_and_relabel(self):
        V = vamos()
        perm = [7, 6, 5, 4, 3, 2, 1, 0]
        relabelled = Matroid(8, [[perm[i] for i in B] for B in V.bases])
        res = are_isomorphic(V, relabelled)
        assert res
        assert res.mapping is not None
        assert are_isomorphic(V, V)

    def test_different_sizes(self):
        assert not are_isomorphic(uniform(2, 3), uniform(2, 4))


class TestPool:
    def test_registered(self):
        assert 'vamos' in registered_names()
        assert matroid_select('U2,4').rank() == 2
        assert matroid_select('u23+vamos').n == 11

    def test_unknown_name(self):
        with pytest.raises(ValueError, match='registration list'):
            matroid_select('fano7')

    def test_representations(self):
        fm = representation_select('u24')
        assert fm.q == 5
        assert from_matrix(5, fm).bases == uniform(2, 4).bases
        assert representation_select('vamos') is None
        assert representation_select('u24', 2) is None

    def test_representation_over_larger_field(self):
        fm = representation_over('u23', 5)
        assert fm.q == 5
        assert from_matrix(5, fm).bases == uniform(2, 3).bases


class TestGaloisField:
    def test_unsupported_order(self):
        with pytest.raises(FieldError):
            GaloisField(7)

    def test_gf4_is_a_field(self):
        gf = GaloisField(4)
        for a in range(1, 4):
            assert gf.mul_table[a, gf.inv_table[a]] == 1
        assert (gf.add_table == gf.add_table.T).all()

    def test_rank_and_kernel(self):
        A = FieldMatrix(3, np.array([[1, 1, 0, 0], [0, 0, 1, 2]]))
        assert A.rank() == 2
        K = A.kernel()
        assert K.shape == (2, 4)
        assert not (A.gf.array(A.entries.dot(K.T)) % 3).any()

    def test_span_cap(self):
        gf = GaloisField(2)
        with pytest.raises(FieldError):
            gf.combinations(np.eye(5, dtype=np.int64), 16)

    def test_kron_shape(self):
        A = representation_select('u23')
        assert A.kron(A).shape == (4, 9)
        with pytest.raises(FieldError):
            A.kron(representation_select('u24'))
