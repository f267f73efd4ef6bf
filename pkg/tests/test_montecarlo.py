import numpy as np
import pytest

from bsimplex.bivariate import PARAM_NAMES, BivParams
from bsimplex.errors import DomainError
from bsimplex.montecarlo import SCENARIOS, ScenarioConfig, replication_seed, run_scenario


def _cfg(reps=3, sizes=(30,), vec=SCENARIOS["s3_theta1"], seed=5):
    return ScenarioConfig(BivParams.of(*vec), sizes, reps, seed)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(reps=0), dict(sizes=(3,)), dict(sizes=())])
    def test_invalid(self, kw):
        base = dict(theta=BivParams.of(*SCENARIOS["s1_theta1"]), sizes=(50,), reps=2)
        base.update(kw)
        with pytest.raises(DomainError):
            ScenarioConfig(**base)

    def test_seed_derivation_distinct(self):
        seeds = {replication_seed(1, r, n) for r in range(50) for n in (50, 100)}
        assert len(seeds) == 100


class TestRun:
    def test_single_replication(self):
        s = run_scenario(_cfg(reps=1), workers=1)
        for row in s.rows:
            assert row.rmse == abs(row.bias)

    def test_deterministic(self):
        a = run_scenario(_cfg(), workers=1)
        b = run_scenario(_cfg(), workers=1)
        assert a == b

    def test_parallel_matches_serial(self):
        assert run_scenario(_cfg(reps=4), workers=2) == run_scenario(_cfg(reps=4), workers=1)

    def test_invariants(self):
        s = run_scenario(_cfg(reps=6, sizes=(30, 60)), workers=1)
        assert len(s.rows) == 10
        for row in s.rows:
            assert row.rmse >= abs(row.bias)
            assert 0 <= row.coverage <= 100
        assert set(s.non_converged) == {30, 60}
        assert {r.parameter for r in s.rows} == set(PARAM_NAMES)

    def test_mu_coverage_independent_case(self):
        cfg = ScenarioConfig(BivParams.of(*SCENARIOS["s3_theta1"]), (200,), 200, 31)
        row = run_scenario(cfg, workers=1).get(200, "mu1")
        assert 92 <= row.coverage <= 98

    def test_bias_and_rmse_shrink(self):
        cfg = ScenarioConfig(BivParams.of(*SCENARIOS["s3_theta1"]), (50, 1000), 200, 32)
        s = run_scenario(cfg, workers=1)
        for p in ("mu1", "mu2"):
            assert abs(s.get(1000, p).bias) <= abs(s.get(50, p).bias)
        for p in PARAM_NAMES:
            assert s.get(1000, p).rmse <= s.get(50, p).rmse


@pytest.mark.longrun
@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_full_grid(name):
    cfg = ScenarioConfig(BivParams.of(*SCENARIOS[name]), (50, 100, 150, 200, 1000), 1000, 2024)
    s = run_scenario(cfg)
    for p in ("mu1", "mu2"):
        assert abs(s.get(1000, p).bias) <= abs(s.get(50, p).bias)
        assert 92 <= s.get(1000, p).coverage <= 98
    for p in PARAM_NAMES:
        assert s.get(1000, p).rmse <= s.get(50, p).rmse
