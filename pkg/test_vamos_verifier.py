import json

import pytest

from ideal.tropideal import TruncatedTropicalIdeal
from matroids.matroid import uniform
from matroids.matroid_pool import matroid_select, representation_select
from oracle.realisable import bergman_ideal
from semiring.troppoly import TropPolynomial
from utils.exceptions import CertificateError, PreconditionError
from verifier.vamos_verifier import (CONTRADICTION, NO_CONTRADICTION, binomial, binomial_candidate, certify_candidate,
                                     degree_two_blocks, degree_two_replay, pascal_binomial, run_theorem_pipeline)


class TestArithmetic:
    def test_binomials(self):
        assert binomial(5, 2) == 10
        assert binomial(21, 2) == 210
        assert pascal_binomial(3, 5) == 0
        assert [pascal_binomial(6, k) for k in range(7)] == [1, 6, 15, 20, 15, 6, 1]

    def test_blocks(self):
        blocks = degree_two_blocks(3, 8)
        assert [len(blocks[k]) for k in ('S1', 'S2', 'S3')] == [6, 36, 24]
        assert blocks['S3'][0] == (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0)
        assert sum(len(v) for v in blocks.values()) == binomial(12, 2)


class TestDegreeTwoReplay:
    def test_replay_on_realisable_ideal(self):
        replay = degree_two_replay()
        assert replay['hilbert'] == [1, 5, 15]
        assert replay['rank_Q'] == 10
        assert replay['rank_Q_matches_hilbert']
        assert (replay['rank_S1'], replay['rank_S2'], replay['rank_S3']) == (3, 3, 4)
        assert (replay['bound_S1'], replay['bound_S2']) == (3, 3)
        assert replay['deficit'] == 4
        assert all(replay['spanned_by_products'].values())
        assert replay['quasiproduct']['passed']


class TestTheoremPipeline:
    def test_contradiction(self):
        report = run_theorem_pipeline()
        assert report.verdict == CONTRADICTION
        assert report.exit_code == 0
        assert report.deficit == 8
        assert report.bound == 7
        assert [s.status for s in report.steps] == ['pass', 'pass', 'pass', 'pass', 'assumed', 'pass']
        assert len(report.external_assumptions) == 1
        assert report.steps[1].evidence['lower'][:3] == [1, 7, 28]
        assert report.steps[1].evidence['replay_u23'] == [1, 3, 6, 10]

    def test_weaker_bound(self):
        report = run_theorem_pipeline(lv_bound=8)
        assert report.verdict == NO_CONTRADICTION
        assert report.exit_code == 1

    def test_without_bound(self):
        report = run_theorem_pipeline(use_lv_bound=False)
        assert report.steps[4].status == 'skipped'
        assert report.verdict == NO_CONTRADICTION
        assert report.external_assumptions == []

    def test_representable_control_pair(self):
        report = run_theorem_pipeline(pair=('U23', 'U45'))
        step = report.steps[4]
        assert step.status == 'pass'
        assert step.evidence['q'] == 5
        assert step.evidence['kronecker']['rank'] == 8
        assert report.verdict == NO_CONTRADICTION
        assert report.external_assumptions == []

    def test_json_is_deterministic(self):
        a = json.dumps(run_theorem_pipeline().to_json(), sort_keys=True)
        b = json.dumps(run_theorem_pipeline().to_json(), sort_keys=True)
        assert a == b


class TestCandidates:
    def test_realisable_ideal_is_certified(self):
        report = certify_candidate(bergman_ideal(representation_select('u23'), 2), uniform(2, 3))
        assert report.certified
        assert report.hilbert == [1, 3, 6]
        assert report.lower_bounds == [1, 3, 6]

    def test_binomial_candidate_is_rejected(self):
        M = matroid_select('u23_vamos')
        report = certify_candidate(binomial_candidate(M, 9), M)
        assert report.saturated
        assert report.degree_one_match
        assert report.bases_checked == 195
        assert report.certificates_passed == 195
        assert report.hilbert == [1, 7, 27]
        assert report.lower_bounds == [1, 7, 28]
        assert not report.certified
        assert any('below the independence lower bound' in v for v in report.violations)

    def test_zero_ideal_misses_degree_one(self):
        report = certify_candidate(TruncatedTropicalIdeal.zero(3, 2), uniform(2, 3))
        assert not report.degree_one_match
        assert not report.certified

    def test_unsaturated_candidate(self):
        f = TropPolynomial(3, {(1, 1, 0): 0, (1, 0, 1): 0})
        I = TruncatedTropicalIdeal.from_top_circuits(3, 2, [f], homogeneous=True)
        with pytest.raises(CertificateError):
            certify_candidate(I, uniform(2, 3))

    def test_candidate_needs_odd_ground_set(self):
        with pytest.raises(PreconditionError):
            binomial_candidate(uniform(2, 4), 1)
