import inspect
import math

import numpy as np
import pytest
from scipy import integrate

from bsimplex import oracle, simplex as S, specfun
from bsimplex.bivariate import BivParams
from bsimplex.errors import DomainError, NumericError
from bsimplex.montecarlo import SCENARIOS


class TestJointMomentQuadrature:
    def test_independent_value(self):
        assert oracle.numeric_joint_moment(BivParams.of(*SCENARIOS["s3_theta1"])) == pytest.approx(0.25, abs=1e-6)

    def test_below_mean_bound(self):
        assert oracle.numeric_joint_moment(BivParams.of(*SCENARIOS["s1_theta3"])) < 0.9

    def test_against_scipy_double_integral(self):
        th = BivParams.of(0.5, 0.5, 5, 5, 1)
        f = lambda y, x: x * y * S.pdf(x, th.m1) * S.pdf(y, th.m2) * (  # noqa: E731
            1 + (2 * S.cdf(x, th.m1) - 1) * (2 * S.cdf(y, th.m2) - 1))
        ref, _ = integrate.dblquad(f, 0, 1, 0, 1, epsabs=1e-9)
        assert oracle.numeric_joint_moment(th) == pytest.approx(ref, abs=1e-7)

    @pytest.mark.parametrize("name", ["s1_theta1", "s2_theta3", "s3_theta2"])
    def test_refinement_converges(self, name):
        th = BivParams.of(*SCENARIOS[name])
        coarse = oracle.numeric_joint_moment(th, tol=1e-6)
        fine = oracle.numeric_joint_moment(th, tol=5e-7)
        assert abs(fine - coarse) < 1e-6

    def test_does_not_touch_cdf_engine(self):
        src = inspect.getsource(oracle)
        for name in ("MarginQuadrature", "margin_quadrature", "simplex.cdf", "cdf_logit"):
            assert name not in src


class TestNormalization:
    def test_scenarios(self, scenario_theta):
        assert oracle.normalization_scan(scenario_theta) == pytest.approx(1.0, abs=1e-6)

    def test_independence_factorises(self):
        th = BivParams.of(0.3, 0.7, 0.8, 3.0, 0.0)
        h = 1 / 64
        one = [np.sum(oracle._margin_rule(m, h)[1]) for m in th.margins]
        assert math.isclose(one[0] * one[1], 1.0, abs_tol=1e-10)
        assert oracle.normalization_scan(th) == pytest.approx(one[0] * one[1], abs=1e-10)

    def test_rejects_non_params(self):
        with pytest.raises(DomainError):
            oracle.normalization_scan((0.5, 0.5, 1, 1, 0))


class TestFiniteDifferences:
    A = np.array([[4.0, 1.0, 0.5], [1.0, 3.0, -0.2], [0.5, -0.2, 2.0]])
    b = np.array([0.3, -1.0, 2.0])

    def quad(self, x):
        return 0.5 * x @ self.A @ x + self.b @ x

    def test_gradient_of_quadratic(self):
        x = np.array([0.2, -0.4, 1.3])
        np.testing.assert_allclose(oracle.numeric_gradient(self.quad, x), self.A @ x + self.b, rtol=1e-9)

    def test_hessian_of_quadratic(self):
        np.testing.assert_allclose(oracle.numeric_hessian(self.quad, np.ones(3)), self.A, atol=1e-8)

    def test_zero_step(self):
        with pytest.raises(DomainError):
            oracle.numeric_gradient(self.quad, np.ones(3), 0.0)

    def test_non_finite(self):
        with pytest.raises(NumericError):
            oracle.numeric_hessian(lambda x: math.inf, np.ones(2))


class TestIdentities:
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
    def test_j1(self, a):
        assert oracle.j1_integral(a) == pytest.approx(oracle.j1_closed(a), rel=1e-6)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
    def test_j0(self, a):
        assert oracle.j0_integral(a) == pytest.approx(oracle.j0_closed(a), rel=1e-6)

    def test_uncorrected_j0_only_at_one(self):
        assert oracle.j0_closed_uncorrected(1.0) == pytest.approx(oracle.j0_integral(1.0), rel=1e-12)
        assert oracle.j0_closed_uncorrected(2.0) != pytest.approx(oracle.j0_integral(2.0), rel=1e-2)

    @pytest.mark.parametrize("z", [1.0, 2.0, 5.0])
    def test_antiderivative(self, z):
        assert abs(oracle.antiderivative_residual(z)) <= 1e-6

    def test_product_tends_to_one(self):
        assert abs(200 * specfun.bessel_struve_product(200.0) - 1) <= 0.01
        devs = [oracle.product_deviation(z) for z in (50.0, 100.0, 200.0)]
        assert devs[0] > devs[1] > devs[2] > 0


class TestBattery:
    def test_all_pass(self):
        results = oracle.run_checks()
        failed = [r for r in results if not r[1]]
        assert not failed

    def test_perturbed_constant_is_caught(self, monkeypatch):
        monkeypatch.setattr(specfun, "EULER_GAMMA", specfun.EULER_GAMMA + 1e-4)
        failed = {name for name, ok, _ in oracle.run_checks(include_slow=False) if not ok}
        assert any(name.startswith("J0 identity") for name in failed)
        assert any(name.startswith("K0 antiderivative") for name in failed)
