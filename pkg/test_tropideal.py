from fractions import Fraction

import numpy as np
import pytest

from ideal.tropideal import (TruncatedTropicalIdeal, check_ideal_axioms, degree_of_zero_dimensional, degree_one_space,
                             flag_binomial_certificate, generic_weight, hilbert, hilbert_invariance,
                             independence_complex, initial_ideal, is_saturated, monomial_witness, saturate, specialize,
                             star_property_check, variety_member)
from matroids.matroid import from_matrix, uniform
from matroids.matroid_pool import representation_select
from oracle.realisable import bergman_ideal, trop_linear_ideal, trop_polynomial_ideal
from semiring.trop_core import TropVector
from semiring.troppoly import TropPolynomial, monomial_count
from utils.config import Config
from utils.exceptions import DimensionError, FanError, PreconditionError, TruncationError


def linear_ideal(D=2):
    # trop<x0 + x1 + x2> over GF(2)
    return trop_linear_ideal(2, [[1, 1, 1]], 3, D)


def realisable_homogeneous_ideals():
    ideals = [bergman_ideal(representation_select(name), 2) for name in ('u12', 'u13', 'u23', 'u24', 'u45', 'k4')]
    rng = np.random.default_rng(11)
    for q in (2, 3, 5):
        for n in (3, 4):
            for _ in range(3):
                forms = [[int(x) for x in rng.integers(0, q, size=n)] for _ in range(int(rng.integers(1, 3)))]
                ideals.append(trop_linear_ideal(q, forms, n, 2))
    return ideals


class TestIdealBasics:
    def test_zero_ideal(self):
        I = TruncatedTropicalIdeal.zero(2, 3)
        assert I.is_zero
        assert I.hilbert_table() == [1, 3, 6, 10]
        assert check_ideal_axioms(I).passed

    def test_hilbert_beyond_truncation(self):
        with pytest.raises(TruncationError):
            hilbert(linear_ideal(), 3)

    def test_slice_count(self):
        with pytest.raises(TruncationError):
            TruncatedTropicalIdeal(2, 2, linear_ideal().slices[:2])

    def test_json(self):
        I = linear_ideal()
        again = TruncatedTropicalIdeal.from_json(I.to_json())
        assert again.same_slices(I)
        assert again.homogeneous
        with pytest.raises(DimensionError):
            TruncatedTropicalIdeal.from_json({'format': 'matroid/v1'})

    def test_truncate(self):
        I = linear_ideal(3)
        J = I.truncate(1)
        assert J.D == 1
        assert J.hilbert_table() == [1, 3]
        assert J.same_slices(I)
        assert I.truncate(3) is I
        with pytest.raises(TruncationError):
            I.truncate(4)

    def test_degree_one_space_is_indexed_by_variables(self):
        # x0 + x1 over GF(2); Mon_<=1 is 1, x2, x1, x0
        I = trop_linear_ideal(2, [[1, 1, 0]], 3, 1)
        assert I.slice(1).circuits == (TropVector.from_mask(4, 0b1100),)
        assert degree_one_space(I).circuits == (TropVector.from_mask(3, 0b011),)


class TestAxioms:
    def test_missing_multiple(self):
        f = TropPolynomial(2, {(1, 0): 0, (0, 1): 0})
        I = TruncatedTropicalIdeal.from_top_circuits(2, 2, [f], homogeneous=True)
        report = check_ideal_axioms(I)
        assert not report.passed
        assert report.violations[0].kind == 'compatibility'
        assert report.violations[0].degree == 1
        assert 'compatibility' in report.summary()

    def test_realisable_ideal_passes(self):
        report = check_ideal_axioms(linear_ideal())
        assert report.passed
        assert sorted(report.family_sizes) == [0, 1, 2]


class TestInitialIdeal:
    def test_zero_weight_keeps_boolean_ideal(self):
        I = linear_ideal()
        assert initial_ideal(I, [0, 0, 0]).same_slices(I)

    def test_variety(self):
        I = linear_ideal()
        assert variety_member(I, [0, 0, 0])
        assert not variety_member(I, [0, 1, 1])
        assert monomial_witness(I, [0, 1, 1]) == (1, (1, 0, 0))

    def test_weight_length(self):
        with pytest.raises(DimensionError):
            variety_member(linear_ideal(), [0, 0])

    def test_hilbert_invariant_under_initial_ideals(self):
        ideals = realisable_homogeneous_ideals()
        assert len(ideals) >= 20
        for I in ideals:
            assert I.homogeneous
            weights = hilbert_invariance(I, samples=5)
            assert len(weights) == 5
            for w in weights:
                assert initial_ideal(I, w).hilbert_table() == I.hilbert_table()

    def test_generic_weight_gives_monomial_slices(self):
        for I in (linear_ideal(), bergman_ideal(representation_select('u24'), 2),
                  bergman_ideal(representation_select('k4'), 2)):
            J = initial_ideal(I)
            for d in range(J.D + 1):
                L = J.slice(d)
                assert all(len(c.finite) == 1 for c in L.circuits)
                assert len(L.circuits) == monomial_count(I.n, d) - I.hilbert(d)

    def test_generic_weight_is_seeded(self):
        config = Config(seed_num=3, current_date='static')
        w = generic_weight(4, config)
        assert w == generic_weight(4, config)
        assert sorted(w) == [7, 49, 343, 2401]
        assert sorted(generic_weight(3, config, D=9)) == [10, 100, 1000]


class TestSaturation:
    def test_pullback_joins_lower_slice(self):
        # x0 + x0*x1 over GF(2)
        I = trop_polynomial_ideal(2, [{(1, 0): 1, (1, 1): 1}], 2, 3)
        assert not is_saturated(I)
        J = saturate(I)
        # 1 + x1 sits at positions 0 and 1 of the order 1, x1, x0
        assert TropVector.from_mask(3, 0b011) in J.slice(1).circuits
        assert I.hilbert(1) == 3
        assert J.hilbert(1) == 2

    def test_linear_ideal_is_saturated(self):
        assert is_saturated(linear_ideal())

    def test_saturation_keeps_the_variety(self):
        rng = np.random.default_rng(5)
        # x0 + x0*x1 and x0*x1 + x0*x2 over GF(2)
        ideals = [trop_polynomial_ideal(2, [{(1, 0): 1, (1, 1): 1}], 2, 3),
                  trop_polynomial_ideal(2, [{(1, 1, 0): 1, (1, 0, 1): 1}], 3, 2)]
        for I in ideals:
            assert not is_saturated(I)
            J = saturate(I)
            for _ in range(100):
                num, den = rng.integers(-4, 5, size=I.n), rng.integers(1, 3, size=I.n)
                w = [Fraction(int(a), int(b)) for a, b in zip(num, den)]
                assert variety_member(I, w) == variety_member(J, w)


class TestSpecialization:
    def test_set_variable_to_zero(self):
        I = specialize(linear_ideal(1), [2], [0])
        assert I.n == 2
        assert I.same_slices(trop_linear_ideal(2, [[1, 1, 1]], 2, 1))
        J = specialize(linear_ideal(2), [2], [0])
        assert J.slice(1).same_circuits(trop_linear_ideal(2, [[1, 1, 1]], 2, 2).slice(1))

    def test_constant_appears(self):
        # x0 + 1 at x0 = 5
        I = specialize(trop_linear_ideal(2, [[1, 0, 1]], 2, 1), [0], [5])
        assert not I.slice(0).is_zero
        assert I.hilbert(0) == 0

    def test_empty_specialization(self):
        I = linear_ideal()
        assert specialize(I, [], []) is I

    def test_bad_variables(self):
        with pytest.raises(DimensionError):
            specialize(linear_ideal(), [0, 0], [1, 2])
        with pytest.raises(DimensionError):
            specialize(linear_ideal(), [0], [1, 2])
        with pytest.raises(PreconditionError):
            specialize(linear_ideal(), [0, 1, 2], [0, 0, 0])


class TestStarAndCertificates:
    def test_star_property(self):
        I = bergman_ideal(representation_select('u23'), 1)
        directions = [[a, b, c] for a in (-1, 0, 1) for b in (-1, 0, 1) for c in (-1, 0, 1)]
        report = star_property_check(I, [1, 0, 0], directions)
        assert report.passed
        assert report.samples == 27
        assert report.epsilon > 0

    def test_star_outside_variety(self):
        with pytest.raises(FanError):
            star_property_check(bergman_ideal(representation_select('u23'), 1), [0, 1, 1], [[0, 0, 0]])

    def test_flag_certificate(self):
        I = bergman_ideal(representation_select('u23'), 2)
        cert = flag_binomial_certificate(I, uniform(2, 3), [0, 1])
        assert cert.passed
        assert cert.matroid_match
        assert cert.missing() == []
        assert [(c.i, c.j) for c in cert.checks][:1] == [(1, 2)]

    def test_flag_certificate_on_every_basis(self):
        for name in ('u23', 'u24', 'k4'):
            fm = representation_select(name)
            M = from_matrix(fm.q, fm)
            I = bergman_ideal(fm, 1)
            for B in sorted(sorted(B) for B in M.bases):
                cert = flag_binomial_certificate(I, M, B)
                assert cert.passed, (name, B, cert.missing())
                assert cert.checks

    def test_certificate_needs_homogeneous_ideal(self):
        with pytest.raises(PreconditionError):
            flag_binomial_certificate(trop_linear_ideal(2, [[1, 1, 1]], 2, 1), uniform(2, 2), [0, 1])


class TestIndependence:
    def test_independence_complex(self):
        faces = independence_complex(bergman_ideal(representation_select('u23'), 2))
        assert len(faces) == 7
        assert max(len(F) for F in faces) == 2

    def test_point_has_degree_one(self):
        # x0 + 1 and x1 + 1 over GF(2)
        I = trop_linear_ideal(2, [[1, 0, 1], [0, 1, 1]], 2, 2)
        assert I.hilbert_table() == [1, 1, 1]
        assert degree_of_zero_dimensional(I) == 1

    def test_degree_needs_positive_truncation(self):
        with pytest.raises(TruncationError):
            degree_of_zero_dimensional(TruncatedTropicalIdeal.zero(2, 0))
