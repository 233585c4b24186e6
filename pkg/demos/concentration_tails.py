"""Tail bounds checked against simulated frequencies.

Three concentration inequalities, each verified by comparing a 99%
Wilson upper confidence edge on the empirical tail frequency with the
computed bound:

  * combinatorial Hoeffding for sum_i a_{i,pi(i)} over a random
    permutation,
  * Curie-Weiss: the magnetization sits near the mean-field fixed
    point tanh(beta m) uniformly in the inverse temperature,
  * size-bias tails for the head-run count, whose coupling moves the
    statistic by at most 2k - 1.
"""

import math

import numpy as np

from stein.concentration import (curie_weiss_concentration,
                                 hoeffding_combinatorial, size_bias_tails,
                                 wilson_upper)
from stein.dist import RngStream
from stein.models.head_runs import (head_runs_circular_size_bias_coupler,
                                    head_runs_variance)
from stein.models.spin_systems import curie_weiss_gibbs, cw_f_statistic

N_DRAWS = 10000


def main():
    rng = RngStream(11).generator()

    print("combinatorial Hoeffding, random 10x10 matrix in [0,1]")
    a = rng.random((10, 10))
    ey = a.sum() / 10
    vals = np.array([abs(a[np.arange(10), rng.permutation(10)].sum() - ey)
                     for _ in range(N_DRAWS)])
    for t in (2.0, 4.0, 6.0):
        freq = wilson_upper(int((vals >= t).sum()), vals.size)
        bound = min(1.0, hoeffding_combinatorial(a, t))
        print(f"  t={t:.0f}:  freq(99% upper) {freq:.4f}  <=  bound {bound:.4f}")

    print()
    print("Curie-Weiss magnetization, beta=0.5, n=100, Gibbs sampler")
    n, beta = 100, 0.5
    fs = np.abs([cw_f_statistic(c) for c in
                 curie_weiss_gibbs(n, beta, 0.0, 200, N_DRAWS, rng)])
    for t in (1.0, 2.0, 3.0):
        thr = beta / n + t / math.sqrt(n)
        freq = wilson_upper(int((fs >= thr).sum()), fs.size)
        bound = min(1.0, curie_weiss_concentration(beta, 0.0, n, t))
        print(f"  t={t:.0f}:  freq(99% upper) {freq:.4f}  <=  bound {bound:.4f}")

    print()
    print("head-run count, n=100, k=3: bounded size-bias coupling")
    n, p, k = 100, 0.5, 3
    mu, s2 = n * p ** k, head_runs_variance(n, p, k)
    sig, C = math.sqrt(s2), 2 * k - 1
    z = np.array([(head_runs_circular_size_bias_coupler(n, p, k, rng).w - mu)
                  / sig for _ in range(N_DRAWS)])
    for t in (1.0, 2.0, 3.0):
        upper, lower = size_bias_tails(mu, s2, C, t, monotone_up=True,
                                       mgf_ok=True)
        fu = wilson_upper(int((z >= t).sum()), z.size)
        fl = wilson_upper(int((z <= -t).sum()), z.size)
        print(f"  t={t:.0f}:  upper {fu:.4f} <= {upper:.4f}   "
              f"lower {fl:.4f} <= {lower:.4f}")


if __name__ == "__main__":
    main()
