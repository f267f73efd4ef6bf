"""
A small simulation study
========================

Bias, RMSE and Wald coverage of the maximum likelihood estimator for one
scenario vector.  The full-size design is R = 1000 at five sample sizes;
this runs a reduced version that finishes in about a minute on one core.
Set ``BSIMPLEX_WORKERS`` to use more processes.
"""

from bsimplex.bivariate import BivParams
from bsimplex.montecarlo import SCENARIOS, ScenarioConfig, run_scenario

cfg = ScenarioConfig(BivParams.of(*SCENARIOS["s1_theta1"]), sizes=(50, 200), reps=100, seed=7)
summary = run_scenario(cfg)

for n in cfg.sizes:
    print(f"\nn = {n}  ({summary.replications[n]} fits used, {summary.non_converged[n]} excluded)")
    print(f"{'':<10}{'mean':>8}{'bias':>8}{'rmse':>8}{'cover':>8}")
    for r in summary.rows:
        if r.n == n:
            print(f"{r.parameter:<10}{r.mean:8.3f}{r.bias:8.3f}{r.rmse:8.3f}{r.coverage:8.1f}")

# lambda sits on the boundary here, so its estimator is biased inward and
# its Wald coverage is not expected to be nominal
