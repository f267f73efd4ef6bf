import math

import numpy as np
import pytest
from scipy import integrate

from bsimplex import bivariate as B, oracle, simplex as S
from bsimplex.bivariate import BivParams, ThetaDerived
from bsimplex.errors import DomainError
from bsimplex.sampler import sample_matrix


def _loglik_fn(data):
    return lambda x: B.log_lik(BivParams.from_vector(x), data)


class TestParams:
    def test_vector_round_trip(self):
        th = BivParams.of(0.2, 0.7, 1.5, 0.3, -0.4)
        assert BivParams.from_vector(th.as_vector()) == th

    def test_lambda_checked(self):
        with pytest.raises(DomainError):
            BivParams.of(0.5, 0.5, 1, 1, 1.2)

    def test_derived(self):
        d = ThetaDerived.of(BivParams.of(0.5, 0.8, 2.0, 0.5, 0.0))
        assert d.xi == pytest.approx((1.0, 0.25))
        assert d.a == pytest.approx((2.0, 1.5625 / 0.125))
        assert d.r[0] == pytest.approx(1 / (math.sqrt(2) * math.sqrt(2 * math.pi)))

    def test_dataset_shape(self):
        with pytest.raises(DomainError):
            B.as_dataset(np.zeros((0, 2)))
        with pytest.raises(DomainError):
            B.as_dataset([[0.5, 1.0]])


class TestJointPdf:
    def test_independence(self, rng):
        th = BivParams.of(0.3, 0.6, 1.0, 2.0, 0.0)
        y1, y2 = rng.uniform(0.01, 0.99, (2, 20))
        np.testing.assert_array_equal(B.joint_pdf(y1, y2, th), S.pdf(y1, th.m1) * S.pdf(y2, th.m2))

    def test_normalization(self):
        assert oracle.normalization_scan(BivParams.of(0.5, 0.5, 2, 2, 1)) == pytest.approx(1, abs=1e-6)

    @pytest.mark.parametrize("lam", [-1.0, 0.0, 1.0])
    @pytest.mark.parametrize("y1", [0.2, 0.5, 0.8])
    def test_marginal_consistency(self, lam, y1):
        th = BivParams.of(0.5, 0.4, 2.0, 0.8, lam)
        val, _ = integrate.quad(lambda y2: B.joint_pdf(y1, y2, th), 0, 1, points=[0.4], limit=300,
                                epsabs=1e-12)
        assert val == pytest.approx(S.pdf(y1, th.m1), abs=1e-6)


class TestLogLik:
    def test_independence_splits(self, small_dataset):
        _, data = small_dataset
        th = BivParams.of(0.45, 0.55, 1.7, 2.2, 0.0)
        expected = S.uni_loglik(th.m1, data[:, 0]) + S.uni_loglik(th.m2, data[:, 1])
        assert B.log_lik(th, data) == pytest.approx(expected, rel=1e-13)

    def test_single_point(self):
        th = BivParams.of(0.5, 0.5, 2, 2, 0)
        assert B.log_lik(th, [[0.5, 0.5]]) == pytest.approx(2 * math.log(2.256758), abs=1e-6)

    def test_permutation_bit_identical(self, small_dataset, rng):
        th, data = small_dataset
        perm = rng.permutation(len(data))
        assert B.log_lik(th, data) == B.log_lik(th, data[perm])

    def test_rejection_value(self):
        # G vanishes where F1 ~ 0 and F2 ~ 1 under lam = 1
        th = BivParams.of(0.5, 0.5, 0.01, 0.01, 1.0)
        assert B.log_lik(th, [[0.05, 0.95]]) == B.REJECT


class TestDerivatives:
    def test_score_at_independence(self, small_dataset):
        _, data = small_dataset
        th = BivParams.of(0.5, 0.5, 2.0, 2.0, 0.0)
        w1 = 2 * S.cdf(data[:, 0], th.m1) - 1
        w2 = 2 * S.cdf(data[:, 1], th.m2) - 1
        assert B.score(th, data)[4] == pytest.approx(np.sum(w1 * w2), rel=1e-12)
        assert B.observed_info(th, data)[4, 4] == pytest.approx(np.sum((w1 * w2) ** 2), rel=1e-12)

    def test_score_matches_finite_differences(self, small_dataset):
        th, data = small_dataset
        g = oracle.numeric_gradient(_loglik_fn(data), th.as_vector(), 1e-6)
        np.testing.assert_allclose(B.score(th, data), g, rtol=1e-4)

    @pytest.mark.parametrize("vec", [(0.5, 0.5, 2, 2, 0.3), (0.3, 0.75, 0.6, 4.0, -0.6),
                                     (0.85, 0.2, 3.3, 0.2, 0.9)])
    def test_info_matches_finite_differences(self, vec):
        th = BivParams.of(*vec)
        data = sample_matrix(th, 60, 31)
        H = oracle.numeric_hessian(_loglik_fn(data), th.as_vector(), 1e-4)
        J = B.observed_info(th, data)
        assert np.linalg.norm(J + H) / np.linalg.norm(H) <= 1e-3

    def test_info_symmetric(self, small_dataset):
        th, data = small_dataset
        J = B.observed_info(th, data)
        assert np.max(np.abs(J - J.T)) == 0.0

    def test_cache_invalidated_by_data(self, small_dataset):
        th, data = small_dataset
        first = B.score(th, data)
        other = data.copy()
        other[0, 0] = 0.31
        assert not np.array_equal(first, B.score(th, other))


GRID27 = [(mu, s2, lam) for mu in (0.3, 0.5, 0.9) for s2 in (0.5, 2.0, 5.0) for lam in (-1.0, 0.0, 1.0)]


class TestJointMoment:
    @pytest.mark.parametrize("vec", [(0.5, 0.5, 2, 2), (0.5, 0.5, 5, 5), (0.9, 0.9, math.sqrt(11), math.sqrt(11))])
    def test_independence_exact(self, vec):
        assert B.joint_moment(BivParams.of(*vec, 0.0)) == vec[0] * vec[1]

    @pytest.mark.parametrize("mu, s2, lam", GRID27)
    def test_closed_form_vs_quadrature(self, mu, s2, lam):
        th = BivParams.of(mu, mu, s2, s2, lam)
        assert B.joint_moment(th) == pytest.approx(oracle.numeric_joint_moment(th), rel=1e-5)

    def test_unequal_margins(self):
        th = BivParams.of(0.2, 0.65, 0.4, 7.0, -0.7)
        assert B.joint_moment(th) == pytest.approx(oracle.numeric_joint_moment(th), rel=1e-8)

    def test_bracket_is_expectation(self):
        p = S.UniParams(0.35, 1.1)
        val, _ = integrate.quad(lambda y: y * (2 * S.cdf(y, p) - 1) * S.pdf(y, p), 0, 1,
                                points=[0.35], epsabs=1e-14, limit=300)
        assert B.moment_bracket(p) == pytest.approx(val, rel=1e-9)

    def test_affine_in_lambda(self):
        base = (0.4, 0.6, 1.2, 3.0)
        e = [B.joint_moment(BivParams.of(*base, lam)) for lam in (-1.0, 0.0, 0.5, 1.0)]
        slope = B.moment_bracket(S.UniParams(0.4, 1.2)) * B.moment_bracket(S.UniParams(0.6, 3.0))
        assert e[3] - e[1] == pytest.approx(slope, rel=1e-12)
        assert e[2] == pytest.approx(0.5 * (e[1] + e[3]), rel=1e-13)
        assert e[0] == pytest.approx(2 * e[1] - e[3], rel=1e-13)

    def test_bounded_by_means(self, scenario_theta):
        v = B.joint_moment(scenario_theta)
        assert 0 < v < min(scenario_theta.m1.mu, scenario_theta.m2.mu)

    def test_uncorrected_form_disagrees(self):
        th = BivParams.of(0.5, 0.5, 2, 2, 1)
        assert abs(B.uncorrected_joint_moment(th) - oracle.numeric_joint_moment(th)) > 0.05


class TestCovariance:
    def test_zero(self):
        assert B.covariance(BivParams.of(0.5, 0.5, 2, 2, 0)) == 0.0

    def test_sign(self):
        assert B.covariance(BivParams.of(0.5, 0.5, 2, 2, 1)) > 0
        assert B.covariance(BivParams.of(0.5, 0.5, 2, 2, -1)) < 0

    def test_consistent_with_moment(self):
        th = BivParams.of(0.3, 0.8, 0.9, 1.4, 0.45)
        assert B.covariance(th) == pytest.approx(B.joint_moment(th) - 0.24, rel=1e-12)
