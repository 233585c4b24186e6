"""Registered experiment catalog: each entry instantiates a model, computes
a theorem bound, computes an oracle distance (exact enumeration or Monte
Carlo), and returns both for soundness certification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import bounds
from ..dist import (binomial_pmf, exponential, geometric_pmf, normal,
                    poisson_pmf)
from ..metrics import (MetricValue, dtv_discrete, dw_discrete_vs_target,
                       estimate_metric_mc)
from ..models import (er_graph, geometric_sums, head_runs, occupancy,
                      permutations, uniform_attachment)


@dataclass(frozen=True)
class Experiment:
    experiment_id: str
    metric: str          # dTV | dK | dW
    oracle: str          # exact | monte_carlo
    default_samples: int
    fn: object           # fn(rng, samples) -> (bound_value, MetricValue)


# ---------------------------------------------------------------------------
# exact-oracle experiments

def _fixed_points_n10(rng, samples):
    n = 10
    bound = bounds.tv_exch_pair_poisson(1.0, (n - 1) / 2, 2 / n, 2 / n)
    dist = dtv_discrete(permutations.fp_exact_pmf(n), poisson_pmf(1.0))
    return bound.value, dist


def _coupon(n, k):
    def fn(rng, samples):
        lam, _ = occupancy.coupon_mean_var(n, k)
        bound = occupancy.coupon_tv_bound_inputs(n, k)
        dist = dtv_discrete(occupancy.coupon_exact_pmf(n, k), poisson_pmf(lam))
        return bound, dist
    return fn


def _hypergeom(N, n_red, m):
    def fn(rng, samples):
        model = occupancy.HypergeometricModel(N, n_red, m)
        dist = dtv_discrete(model.exact_pmf(), poisson_pmf(model.mean()))
        return model.tv_bound(), dist
    return fn


def _head_runs(n, p, k):
    def fn(rng, samples):
        rep = bounds.tv_head_runs(n, p, k)
        dist = dtv_discrete(head_runs.head_runs_exact_pmf(n, p, k),
                            poisson_pmf(rep.inputs["lam"].value))
        return rep.value, dist
    return fn


def _er_triangles(n, p):
    def fn(rng, samples):
        rep = bounds.tv_triangles(n, p)
        lam = math.comb(n, 3) * p ** 3
        dist = dtv_discrete(er_graph.er_exact_count_pmf(n, p, "triangles"),
                            poisson_pmf(lam))
        return rep.value, dist
    return fn


def _er_isolated(n, p):
    def fn(rng, samples):
        mu, var = er_graph.isolated_moments(n, p)
        sum_p_sq = n * (1 - p) ** (2 * (n - 1))
        rep = bounds.tv_size_bias_increasing(mu, var, sum_p_sq)
        dist = dtv_discrete(er_graph.er_exact_count_pmf(n, p, "isolated"),
                            poisson_pmf(mu))
        return rep.value, dist
    return fn


def _uniform_attachment(n):
    def fn(rng, samples):
        rep = bounds.tv_uniform_attachment(n)
        dist = dtv_discrete(uniform_attachment.ua_exact_pmf(n),
                            geometric_pmf(0.5, "zero"))
        return rep.value, dist
    return fn


def _binom_normal(n):
    """Standardized Bin(n, 1/2): summands are Rademacher/sqrt(n), so
    E|X|^3 = E X^4 = 1 after unit-variance standardization."""
    def fn(rng, samples):
        rep = bounds.wass_iid_sum([1.0] * n, [1.0] * n)
        pmf = binomial_pmf(n, 0.5)
        atoms = (pmf.support - n / 2) / math.sqrt(n / 4)
        dist = dw_discrete_vs_target(pmf, normal(), atoms=atoms)
        return rep.value, dist
    return fn


def _exp_geometric(p):
    """W = p Ge1(p) is its own equilibrium draw up to the p-step grid, so
    the coupling distance is E|W^e - W| <= p E U = p/2 and the theorem gives
    dW(W, Exp(1)) <= p."""
    def fn(rng, samples):
        rep = bounds.wass_equilibrium(bounds.Input(p / 2.0))
        pmf = geometric_pmf(p, "one")
        dist = dw_discrete_vs_target(pmf, exponential(),
                                     atoms=p * pmf.support.astype(float))
        return rep.value, dist
    return fn


# ---------------------------------------------------------------------------
# Monte Carlo experiments

def _geometric_sum_mc(p, increment_name):
    def fn(rng, samples):
        inc = geometric_sums.IncrementLaw(increment_name)
        rep = bounds.wass_geometric_sum(p, inc.second_moment, bounds.Input(0.0))
        w = np.array([geometric_sums.geometric_sum_coupler(inc, p, rng).w
                      for _ in range(samples)])
        dist = estimate_metric_mc(w, exponential(), "dW")
        return rep.value, dist
    return fn


def _er_triangles_normal(n, p):
    """Dependency-neighborhood normal bound for the standardized triangle
    count, compared against a Monte Carlo Wasserstein estimate."""
    def fn(rng, samples):
        q = p ** 3
        abs3 = q * (1 - q) * ((1 - q) ** 2 + q ** 2)
        m4 = q * (1 - q) * ((1 - q) ** 3 + q ** 3)
        n_triples = math.comb(n, 3)
        lam, var = er_graph.triangle_moments(n, p)
        D = 1 + 3 * (n - 3)  # triples sharing an edge with a fixed triple
        rep = bounds.wass_dependency([abs3] * n_triples, [m4] * n_triples,
                                     D, math.sqrt(var))
        sigma = math.sqrt(var)
        w = np.array([(er_graph.er_triangles(er_graph.er_sample(n, p, rng))
                       - lam) / sigma for _ in range(samples)])
        dist = estimate_metric_mc(w, normal(), "dW")
        return rep.value, dist
    return fn


def _er_isolated_normal(n, mu_target):
    """Size-bias normal bound for the standardized isolated-vertex count,
    with the coupling moments estimated from the erase-edges coupler.  The
    variance of W^s - W upper-bounds Var E[W^s - W | W] (conditional
    Jensen), so the computed value still dominates the theorem bound."""
    p = 1.0 - (mu_target / n) ** (1.0 / (n - 1))

    def fn(rng, samples):
        mu, var = er_graph.isolated_moments(n, p)
        sigma = math.sqrt(var)
        m = max(2000, samples // 4)
        draws = [er_graph.er_isolated_size_bias_coupler(n, p, rng)
                 for _ in range(m)]
        diff = np.array([d.companion - d.w for d in draws])
        var_cond = bounds.Input(float(diff.var(ddof=1)), "mc_estimate")
        sq_diff = bounds.Input(float((diff ** 2).mean()), "mc_estimate")
        rep = bounds.wass_size_bias(mu, var, var_cond, sq_diff)
        w = np.array([(er_graph.er_isolated(er_graph.er_sample(n, p, rng))
                       - mu) / sigma for _ in range(samples)])
        dist = estimate_metric_mc(w, normal(), "dW")
        return rep.value, dist
    return fn


# ---------------------------------------------------------------------------
# catalog

CATALOG: dict[str, Experiment] = {}


def _register(experiment_id, metric, oracle, fn, default_samples=0):
    CATALOG[experiment_id] = Experiment(experiment_id, metric, oracle,
                                        default_samples, fn)


_register("fixed_points_n10", "dTV", "exact", _fixed_points_n10)
_register("coupon_n8_k16", "dTV", "exact", _coupon(8, 16))
_register("hypergeom_N20_n5_m6", "dTV", "exact", _hypergeom(20, 5, 6))
_register("head_runs_n20_k3", "dTV", "exact", _head_runs(20, 0.5, 3))
_register("er_triangles_n6_p01", "dTV", "exact", _er_triangles(6, 0.1))
_register("er_triangles_n6_p03", "dTV", "exact", _er_triangles(6, 0.3))
_register("er_isolated_n6_p05", "dTV", "exact", _er_isolated(6, 0.5))
_register("uniform_attachment_n25", "dTV", "exact", _uniform_attachment(25))
_register("uniform_attachment_n50", "dTV", "exact", _uniform_attachment(50))
_register("uniform_attachment_n100", "dTV", "exact", _uniform_attachment(100))
_register("binom_normal_n16", "dW", "exact", _binom_normal(16))
_register("binom_normal_n64", "dW", "exact", _binom_normal(64))
_register("binom_normal_n256", "dW", "exact", _binom_normal(256))
_register("exp_geometric_p02", "dW", "exact", _exp_geometric(0.2))
_register("exp_geometric_p005", "dW", "exact", _exp_geometric(0.05))
_register("exp_geometric_p001", "dW", "exact", _exp_geometric(0.01))
_register("geometric_sum_uniform_p005", "dW", "monte_carlo",
          _geometric_sum_mc(0.05, "uniform02"), default_samples=40000)
_register("er_triangles_normal_n10_p05", "dW", "monte_carlo",
          _er_triangles_normal(10, 0.5), default_samples=20000)
_register("er_isolated_normal_n30", "dW", "monte_carlo",
          _er_isolated_normal(30, 2.0), default_samples=20000)


def get_experiment(experiment_id: str) -> Experiment:
    if experiment_id not in CATALOG:
        raise KeyError(f"unknown experiment {experiment_id!r}; "
                       f"known: {', '.join(CATALOG)}")
    return CATALOG[experiment_id]
