import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize

from bsimplex import copula as C
from bsimplex.errors import DomainError

lams = st.floats(-1.0, 1.0)
opens = st.floats(1e-9, 1 - 1e-9)
GRID = np.linspace(0.0, 1.0, 41)


class TestCdf:
    @pytest.mark.parametrize("lam", [-1.0, -0.3, 0.0, 0.6, 1.0])
    def test_margins(self, lam):
        u = np.linspace(0, 1, 11)
        np.testing.assert_allclose(C.fgm_cdf(u, 1.0, lam), u, atol=1e-15)
        np.testing.assert_allclose(C.fgm_cdf(1.0, u, lam), u, atol=1e-15)
        np.testing.assert_array_equal(C.fgm_cdf(u, 0.0, lam), 0.0)

    def test_value(self):
        assert C.fgm_cdf(0.5, 0.5, 1.0) == pytest.approx(0.3125)

    def test_independence(self):
        assert C.fgm_cdf(0.3, 0.7, 0.0) == pytest.approx(0.21)

    @pytest.mark.parametrize("lam", [-1.0, 0.0, 1.0])
    def test_frechet_bounds(self, lam):
        U, V = np.meshgrid(GRID, GRID)
        c = C.fgm_cdf(U, V, lam)
        assert np.all(c >= np.maximum(U + V - 1, 0) - 1e-15)
        assert np.all(c <= np.minimum(U, V) + 1e-15)

    @pytest.mark.parametrize("lam", [-1.0, 0.0, 1.0])
    def test_two_increasing(self, lam):
        U, V = np.meshgrid(GRID, GRID, indexing="ij")
        c = C.fgm_cdf(U, V, lam)
        rect = c[1:, 1:] - c[1:, :-1] - c[:-1, 1:] + c[:-1, :-1]
        assert np.all(rect >= -1e-15)

    @pytest.mark.parametrize("bad", [(-0.1, 0.5, 0.0), (0.5, 1.1, 0.0), (0.5, 0.5, 1.5), (0.5, 0.5, np.nan)])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            C.fgm_cdf(*bad)

    def test_lambda_slack_clamps(self):
        assert C.check_lambda(1 + 1e-13) == 1.0
        assert C.check_lambda(-1 - 1e-13) == -1.0
        with pytest.raises(DomainError):
            C.check_lambda(1 + 1e-9)


class TestDensity:
    def test_values(self):
        assert C.fgm_density(0.5, 0.13, 0.8) == 1.0
        assert C.fgm_density(0.0, 0.0, 1.0) == 2.0
        assert C.fgm_density(0.0, 1.0, 1.0) == 0.0

    @given(st.floats(0, 1), st.floats(0, 1), lams)
    def test_nonnegative(self, u, v, lam):
        assert C.fgm_density(u, v, lam) >= 0.0

    @pytest.mark.parametrize("lam", [-1.0, 0.4, 1.0])
    def test_mixed_partial(self, lam):
        h = 1e-4
        for u, v in [(0.2, 0.3), (0.5, 0.9), (0.75, 0.1)]:
            mixed = (C.fgm_cdf(u + h, v + h, lam) - C.fgm_cdf(u + h, v - h, lam)
                     - C.fgm_cdf(u - h, v + h, lam) + C.fgm_cdf(u - h, v - h, lam)) / (4 * h * h)
            assert mixed == pytest.approx(C.fgm_density(u, v, lam), abs=1e-6)


class TestConditionalInverse:
    @given(opens, opens)
    def test_independence(self, u1, v):
        assert C.conditional_inverse(u1, v, 0.0) == pytest.approx(v, rel=1e-15)

    @given(opens, lams)
    def test_center(self, v, lam):
        assert C.conditional_inverse(0.5, v, lam) == pytest.approx(v, rel=1e-14)

    def test_brute_force(self):
        v = 0.5
        ref = optimize.brentq(lambda x: C.conditional_cdf(0.9, x, 1.0) - v, 0, 1, xtol=1e-15)
        assert C.conditional_inverse(0.9, v, 1.0) == pytest.approx(ref, abs=1e-10)

    @given(opens, opens, lams)
    def test_inverts_conditional_cdf(self, u1, v, lam):
        u2 = C.conditional_inverse(u1, v, lam)
        assert 0.0 < u2 < 1.0
        assert C.conditional_cdf(u1, u2, lam) == pytest.approx(v, abs=1e-10)

    @pytest.mark.parametrize("lam", [-1.0, 0.5, 1.0])
    def test_increasing_in_v(self, lam):
        v = np.linspace(0.001, 0.999, 400)
        assert np.all(np.diff(C.conditional_inverse(np.full_like(v, 0.13), v, lam)) > 0)

    @pytest.mark.parametrize("u1, v", [(0.0, 0.5), (0.5, 1.0)])
    def test_open_interval(self, u1, v):
        with pytest.raises(DomainError):
            C.conditional_inverse(u1, v, 0.5)
