from fractions import Fraction

import numpy as np
import pytest

from semiring.trop_core import (INF, MinPlusSpan, TropValue, TropVector, elimination_witness, is_tropical_linear_space,
                                mask_of, members, principal_cover, span_membership, to_fraction)
from utils.exceptions import DimensionError, PreconditionError


def u13_span():
    return MinPlusSpan(3, [TropVector.of([0, 0, INF]), TropVector.of([0, INF, 0]), TropVector.of([INF, 0, 0])])


class TestTropValue:
    def test_add_is_min(self):
        assert TropValue(3) + TropValue('1/2') == TropValue(Fraction(1, 2))

    def test_mul_is_plus(self):
        assert TropValue(3) * TropValue(-1) == TropValue(2)

    def test_zero_and_one(self):
        x = TropValue('7/3')
        assert x + TropValue.zero == x
        assert x * TropValue.one == x
        assert (x * TropValue.zero).is_inf

    def test_order_puts_inf_last(self):
        assert TropValue(10 ** 9) < TropValue.zero
        assert not TropValue.zero < TropValue(0)

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            to_fraction(0.5)

    def test_string_forms(self):
        assert to_fraction('inf') is INF
        assert to_fraction('-3/6') == Fraction(-1, 2)
        assert TropValue('2/4').to_str() == '1/2'

    def test_semiring_laws_on_random_values(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b, c = (TropValue(Fraction(int(x), int(y))) for x, y in zip(rng.integers(-9, 10, 3), rng.integers(1, 5, 3)))
            assert a * (b + c) == a * b + a * c
            assert (a + b) + c == a + (b + c)


class TestVectors:
    def test_support_and_mask(self):
        v = TropVector.of([0, INF, '1/2'])
        assert v.support == frozenset({0, 2})
        assert v.mask == mask_of([0, 2])
        assert members(v.mask) == [0, 2]

    def test_pointwise_sum(self):
        assert TropVector.of([0, 3, INF]) + TropVector.of([1, 2, 5]) == TropVector.of([0, 2, 5])

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            TropVector.of([0, 0]) + TropVector.of([0, 0, 0])

    def test_normalized(self):
        assert TropVector.of([2, 5, INF]).normalized() == TropVector.of([0, 3, INF])

    def test_zero_generator_rejected(self):
        with pytest.raises(DimensionError):
            MinPlusSpan(2, [TropVector.zero(2)])


class TestPrincipalCover:
    def test_excluded_coordinate(self):
        v = TropVector.of([0, 1, INF])
        assert principal_cover(v, u13_span(), [2]) == TropVector.of([1, 1, INF])

    def test_zero_vector(self):
        assert principal_cover(TropVector.zero(3), u13_span()) == TropVector.zero(3)

    def test_full_support(self):
        assert principal_cover(TropVector.of([0, 0, 0]), u13_span()) == TropVector.of([0, 0, 0])


class TestSpanMembership:
    def test_members(self):
        S = u13_span()
        assert span_membership(TropVector.of([0, 0, 0]), S)
        assert span_membership(TropVector.zero(3), S)
        assert span_membership(TropVector.of([4, 4, INF]), S)

    def test_non_member(self):
        assert not span_membership(TropVector.of([0, 1, INF]), u13_span())

    def test_valued_generators(self):
        S = MinPlusSpan(3, [TropVector.of([0, 1, INF]), TropVector.of([INF, 0, 2])])
        v = TropVector.of([0, 1, INF]) + TropVector.of([INF, 0, 2]).shift(1)
        assert span_membership(v, S)
        assert not span_membership(TropVector.of([0, 0, 3]), S)


class TestElimination:
    def test_witness_on_disjoint_blocks(self):
        S = MinPlusSpan(4, [TropVector.of([0, 0, INF, INF]), TropVector.of([INF, INF, 0, 0])])
        h = elimination_witness(TropVector.of([0, 0, 0, 0]), TropVector.of([0, 0, INF, INF]), 0, S)
        assert h == TropVector.of([INF, INF, 0, 0])

    def test_witness_on_u13(self):
        h = elimination_witness(TropVector.of([0, 0, INF]), TropVector.of([0, INF, 0]), 0, u13_span())
        assert h == TropVector.of([INF, 0, 0])

    def test_equal_vectors(self):
        f = TropVector.of([0, 0, INF])
        h = elimination_witness(f, f, 1, u13_span())
        assert h is not None
        assert h.coords[1] is INF

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            elimination_witness(TropVector.of([0, 1, INF]), TropVector.of([1, 0, INF]), 0, u13_span())

    def test_uniform_spaces_pass(self):
        assert is_tropical_linear_space(MinPlusSpan(3, [TropVector.of([0, 0, 0])])).passed
        assert is_tropical_linear_space(u13_span()).passed

    def test_counterexample(self):
        S = MinPlusSpan(3, [TropVector.of([0, INF, 0]), TropVector.of([0, 0, INF]), TropVector.of([INF, 0, 1])])
        report = is_tropical_linear_space(S)
        assert not report.passed
        f, g, i = report.counterexample
        assert f.coords[i] == g.coords[i]
        assert 'elimination fails' in report.summary()
