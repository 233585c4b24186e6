"""A tour of the bias transforms and their defining identities.

Each transform reweights or perturbs a random variable so that a simple
functional identity holds exactly:

    size bias           E[X g(X)]        = mu     E[g(X^s)]
    zero bias           E[W g(W)]        = sigma^2 E[g'(W^z)]
    equilibrium         E[f(W)] - f(0)   = mu     E[f'(W^e)]
    discrete equilib.   p(E[f(W)]-f(0))  = (1-p)  E[Df(W^e)]

The couplers construct (W, companion) on one probability space; the
checks below estimate both sides of each identity from the same draws
and gate the paired residual at four standard errors.
"""

import numpy as np

from stein.couplings import (IndependentSum, ZeroBiasSum,
                             check_discrete_equilibrium_identity,
                             check_equilibrium_identity,
                             check_size_bias_identity,
                             check_zero_bias_identity, size_bias_pmf,
                             size_bias_sum_coupler)
from stein.dist import RngStream, binomial_pmf, geometric_pmf, poisson_pmf
from stein.models.geometric_sums import IncrementLaw, geometric_sum_coupler
from stein.models.uniform_attachment import ua_equilibrium_coupler
from stein.stein_eq import smooth_suite, test_suite

N_DRAWS = 30000


def report(title, checks):
    worst = max(abs(c.diff) / max(c.stderr, 1e-300) for c in checks)
    status = "PASS" if all(c.ok for c in checks) else "FAIL"
    print(f"{status}  {title:<38} worst residual {worst:4.1f} se "
          f"over {len(checks)} test functions")


def main():
    rng = RngStream(7).generator()

    # size bias, exactly at the pmf level first
    p = binomial_pmf(6, 0.4)
    sb = size_bias_pmf(p)
    g = test_suite()[0]
    lhs = p.expect(lambda k: k * g(float(k)))
    rhs = p.mean() * sb.expect(lambda k: g(float(k)))
    print(f"exact reweight residual: {abs(lhs - rhs):.2e}  (pmf-level identity)")
    print()

    # then by coupling, for a heterogeneous independent sum
    model = IndependentSum([binomial_pmf(3, 0.3), poisson_pmf(1.2, 1e-10),
                            geometric_pmf(0.6, "zero", 1e-10)])
    mu = float(sum(model.means()))
    draws = [size_bias_sum_coupler(model, rng) for _ in range(N_DRAWS)]
    report("size bias (independent sum)",
           check_size_bias_identity(draws, mu, test_suite()))

    # zero bias for a standardized Rademacher sum
    n = 30
    s = 1.0 / np.sqrt(n)
    zb = ZeroBiasSum([[-s, s]] * n, [[0.5, 0.5]] * n)
    report("zero bias (Rademacher sum)",
           check_zero_bias_identity(zb.draw_batch(N_DRAWS, rng), 1.0,
                                    smooth_suite()))

    # equilibrium transform for a geometric sum of unit-mean increments
    inc = IncrementLaw("uniform02")
    draws = [geometric_sum_coupler(inc, 0.2, rng) for _ in range(N_DRAWS)]
    report("equilibrium (geometric sum)",
           check_equilibrium_identity(draws, 1.0, smooth_suite()))

    # discrete equilibrium for the uniform-attachment in-degree
    draws = [ua_equilibrium_coupler(50, rng) for _ in range(N_DRAWS)]
    report("discrete equilibrium (attachment)",
           check_discrete_equilibrium_identity(draws, 0.5, test_suite()))


if __name__ == "__main__":
    main()
