"""
Joint moments: closed form against brute force
==============================================

The closed-form E[y1 y2] only needs two Bessel/Struve evaluations per
margin.  Here it is compared with a tensor-product tanh-sinh quadrature of
``y1 y2 f(y1, y2)`` for every scenario vector.
"""

import time

from bsimplex import bivariate, oracle
from bsimplex.bivariate import BivParams
from bsimplex.montecarlo import SCENARIOS

print(f"{'vector':<11}{'closed form':>14}{'quadrature':>14}{'rel diff':>11}{'mu1 mu2':>9}")
for name, vec in SCENARIOS.items():
    th = BivParams.of(*vec)
    t0 = time.perf_counter()
    closed = bivariate.joint_moment(th)
    numeric = oracle.numeric_joint_moment(th)
    print(f"{name:<11}{closed:14.8f}{numeric:14.8f}{abs(closed / numeric - 1):11.1e}"
          f"{th.m1.mu * th.m2.mu:9.4f}")

# lambda shifts the moment away from mu1 mu2 by lambda * B1 * B2, and the
# product stays below min(mu1, mu2) as any moment of unit-interval data must
th = BivParams.of(0.9, 0.9, 11 ** 0.5, 11 ** 0.5, 1.0)
print("\nbound check at", th.as_vector().round(3), "->", round(bivariate.joint_moment(th), 6), "< 0.9")

# the covariance is the dependence term alone
print("covariance at s1_theta1:", bivariate.covariance(BivParams.of(*SCENARIOS["s1_theta1"])))
