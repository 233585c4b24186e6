import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from stein.bounds import tv_dependency_poisson, tv_head_runs
from stein.couplings import check_equilibrium_identity
from stein.dist import RngStream, binomial_pmf, poisson_pmf
from stein.metrics import dtv_discrete
from stein.models.branching import GaltonWatson, geometric_offspring
from stein.models.er_graph import (ErGraph, cycle_overlap_counts,
                                   er_degree_d_coupler, er_exact_count_pmf,
                                   er_exact_statistic_pmf, er_isolated,
                                   er_isolated_size_bias_coupler, er_kcycles,
                                   er_sample, er_triangle_size_bias_coupler,
                                   er_triangles, isolated_moments,
                                   triangle_moments)
from stein.models.geometric_sums import IncrementLaw, geometric_sum_coupler
from stein.models.head_runs import (head_runs_circular_size_bias_coupler,
                                    head_runs_count, head_runs_exact_pmf,
                                    head_runs_grouped_inputs,
                                    head_runs_mean,
                                    head_runs_neighborhood_inputs,
                                    head_runs_sampler)
from stein.models.occupancy import (HypergeometricModel, coupon_empty_boxes,
                                    coupon_exact_pmf, coupon_mean_var,
                                    coupon_size_bias_coupler,
                                    coupon_tv_bound_inputs)
from stein.models.permutations import (count_two_cycles, fp_exact_pmf,
                                       fp_transposition_pair,
                                       permutation_fixed_points)
from stein.models.spin_systems import (AntiVoterChain, SpinConfig,
                                       complete_graph, curie_weiss_gibbs,
                                       cw_f_statistic, cw_pair_step)
from stein.models.uniform_attachment import (ua_equilibrium_coupler,
                                             ua_exact_pmf, ua_mean_abs_diff,
                                             uniform_attachment_indegree)
from stein.stein_eq import smooth_suite


class TestHeadRuns:
    def test_count_hand_cases(self):
        assert head_runs_count([1, 1, 0, 1, 1, 1], 2) == 2
        assert head_runs_count([1, 1, 1, 1], 2) == 1  # de-clumped: one maximal run
        assert head_runs_count([0, 0, 0], 1) == 0

    def test_exact_pmf_tiny_hand_oracle(self):
        # n=3, k=1, p=1/2: maximal-run counts over all 8 sequences
        pmf = head_runs_exact_pmf(3, 0.5, 1)
        assert pmf.prob(0) == pytest.approx(1 / 8, abs=1e-15)
        assert pmf.prob(1) == pytest.approx(6 / 8, abs=1e-15)
        assert pmf.prob(2) == pytest.approx(1 / 8, abs=1e-15)

    def test_exact_pmf_vs_brute_enumeration(self):
        n, k, p = 6, 2, 0.4
        probs = {}
        for bits in itertools.product([0, 1], repeat=n):
            w = head_runs_count(bits, k)
            pr = p ** sum(bits) * (1 - p) ** (n - sum(bits))
            probs[w] = probs.get(w, 0.0) + pr
        pmf = head_runs_exact_pmf(n, p, k)
        for w, pr in probs.items():
            assert pmf.prob(w) == pytest.approx(pr, abs=1e-14)

    def test_mean_formula_matches_pmf(self):
        for n, p, k in [(10, 0.5, 2), (14, 0.3, 3), (20, 0.6, 4)]:
            assert head_runs_exact_pmf(n, p, k).mean() == pytest.approx(
                head_runs_mean(n, p, k), abs=1e-12)

    def test_sampler_mean(self):
        rng = RngStream(201).generator()
        n, p, k = 12, 0.5, 2
        draws = np.array([head_runs_sampler(n, p, k, rng) for _ in range(20000)])
        se = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - head_runs_mean(n, p, k)) <= 5 * se

    def test_circular_coupler_bounded_and_mean(self):
        rng = RngStream(202).generator()
        n, p, k = 15, 0.5, 3
        ws = []
        wsum = 0.0
        for _ in range(5000):
            d = head_runs_circular_size_bias_coupler(n, p, k, rng)
            assert abs(d.companion - d.w) <= 2 * k - 1
            wsum += d.w
            ws.append(d.companion)
        # circular indicator sum has mean n p^k
        assert wsum / 5000 == pytest.approx(n * p ** k, abs=0.1)

    def test_grouped_inputs_reproduce_closed_bound(self):
        for n, p, k in [(20, 0.5, 4), (24, 0.5, 5), (18, 0.4, 3)]:
            got = tv_dependency_poisson(*head_runs_grouped_inputs(n, p, k))
            assert got.value == pytest.approx(tv_head_runs(n, p, k).value,
                                              abs=1e-12)

    def test_exact_neighborhood_bound_not_worse(self):
        n, p, k = 20, 0.5, 4
        exact = tv_dependency_poisson(*head_runs_neighborhood_inputs(n, p, k))
        closed = tv_head_runs(n, p, k)
        assert exact.value <= closed.value + 1e-12

    def test_bound_dominates_true_distance(self):
        n, p, k = 20, 0.5, 3
        pmf = head_runs_exact_pmf(n, p, k)
        lam = head_runs_mean(n, p, k)
        truth = dtv_discrete(pmf, poisson_pmf(lam)).value
        assert truth <= tv_head_runs(n, p, k).value


class TestCoupon:
    def test_exact_pmf_vs_brute_enumeration(self):
        n, k = 4, 3
        probs = {}
        for throws in itertools.product(range(n), repeat=k):
            w = n - len(set(throws))
            probs[w] = probs.get(w, Fraction(0)) + Fraction(1, n ** k)
        pmf = coupon_exact_pmf(n, k)
        for w in range(n + 1):
            assert pmf.prob(w) == pytest.approx(float(probs.get(w, 0)), abs=1e-14)

    def test_mean_var_formulas(self):
        n, k = 8, 16
        pmf = coupon_exact_pmf(n, k)
        lam, var = coupon_mean_var(n, k)
        assert pmf.mean() == pytest.approx(lam, abs=1e-12)
        assert pmf.var() == pytest.approx(var, abs=1e-12)

    def test_sampler_and_validation(self):
        rng = RngStream(203).generator()
        assert 0 <= coupon_empty_boxes(5, 7, rng) <= 4
        with pytest.raises(ValueError):
            coupon_empty_boxes(5, -1, rng)
        with pytest.raises(ValueError):
            coupon_empty_boxes(5, 3, rng, probs=[0.5, 0.5])

    def test_coupler_is_decreasing_construction(self):
        rng = RngStream(204).generator()
        for _ in range(500):
            d = coupon_size_bias_coupler(6, 9, rng)
            assert d.companion >= 1.0  # box 1 is forced empty

    def test_tv_bound_dominates_truth(self):
        n, k = 8, 16
        lam, _ = coupon_mean_var(n, k)
        truth = dtv_discrete(coupon_exact_pmf(n, k), poisson_pmf(lam)).value
        assert truth <= coupon_tv_bound_inputs(n, k)


class TestHypergeometric:
    def test_exact_pmf_vs_scipy(self):
        m = HypergeometricModel(20, 6, 5)
        pmf = m.exact_pmf()
        for j in pmf.support:
            ref = stats.hypergeom.pmf(j, 20, 6, 5)
            assert pmf.prob(int(j)) == pytest.approx(ref, rel=1e-12)

    def test_moment_formulas_match_pmf(self):
        m = HypergeometricModel(15, 4, 7)
        pmf = m.exact_pmf()
        assert pmf.mean() == pytest.approx(m.mean(), abs=1e-12)
        assert pmf.var() == pytest.approx(m.var(), abs=1e-12)

    def test_sampler_support(self):
        rng = RngStream(205).generator()
        m = HypergeometricModel(12, 5, 4)
        for _ in range(200):
            assert 0 <= m.sample(rng) <= 4

    def test_coupler_forces_red_ball(self):
        rng = RngStream(206).generator()
        m = HypergeometricModel(12, 5, 4)
        for _ in range(300):
            d = m.size_bias_coupler(rng)
            assert 1 <= d.companion <= 5

    def test_tv_bound_dominates_truth(self):
        m = HypergeometricModel(20, 6, 5)
        truth = dtv_discrete(m.exact_pmf(), poisson_pmf(m.mean())).value
        assert truth <= m.tv_bound()

    def test_validation(self):
        with pytest.raises(ValueError):
            HypergeometricModel(10, 0, 5)
        with pytest.raises(ValueError):
            HypergeometricModel(10, 3, 11)


class TestPermutations:
    def test_rencontres_small(self):
        pmf2 = fp_exact_pmf(2)
        assert pmf2.prob(0) == pytest.approx(0.5, abs=1e-15)
        assert pmf2.prob(1) == 0.0
        assert pmf2.prob(2) == pytest.approx(0.5, abs=1e-15)
        pmf3 = fp_exact_pmf(3)
        assert pmf3.prob(0) == pytest.approx(2 / 6, abs=1e-15)
        assert pmf3.prob(1) == pytest.approx(3 / 6, abs=1e-15)
        assert pmf3.prob(3) == pytest.approx(1 / 6, abs=1e-15)

    def test_mean_is_one(self):
        assert fp_exact_pmf(10).mean() == pytest.approx(1.0, abs=1e-12)

    def test_two_cycle_count(self):
        assert count_two_cycles(np.array([1, 0, 3, 2])) == 2
        assert count_two_cycles(np.array([0, 1, 2])) == 0
        assert count_two_cycles(np.array([1, 2, 0])) == 0

    def test_sampler_range(self):
        rng = RngStream(207).generator()
        for _ in range(100):
            assert 0 <= permutation_fixed_points(8, rng) <= 8

    def test_transposition_pair_probabilities(self):
        rng = RngStream(208).generator()
        for _ in range(300):
            w, wp, aux = fp_transposition_pair(6, rng)
            assert 0 <= aux["p_up"] <= 1 and 0 <= aux["p_down"] <= 1
            assert aux["p_up"] + aux["p_down"] <= 1 + 1e-12
            assert wp - w in (-2.0, -1.0, 0.0, 1.0, 2.0)

    def test_transposition_pair_is_exchangeable_in_mean(self):
        rng = RngStream(209).generator()
        diffs = np.array([fp_transposition_pair(6, rng)[1]
                          - fp_transposition_pair(6, rng)[0]
                          for _ in range(4000)])
        assert abs(diffs.mean()) <= 5 * diffs.std(ddof=1) / math.sqrt(diffs.size)


class TestErGraph:
    def test_statistics_on_complete_graph(self):
        n = 5
        a = ~np.eye(n, dtype=bool)
        g = ErGraph(n, 1.0, a)
        assert er_triangles(g) == math.comb(n, 3)
        assert er_isolated(g) == 0
        assert er_kcycles(g, 3) == math.comb(n, 3)
        assert er_kcycles(g, 4) == 3 * math.comb(n, 4)

    def test_vectorized_pmf_matches_enumeration(self):
        n, p = 5, 0.3
        fast = er_exact_count_pmf(n, p, "triangles")
        slow = er_exact_statistic_pmf(
            n, p, lambda a: np.trace((a.astype(int) @ a @ a)) // 6)
        np.testing.assert_allclose(fast.probs, slow.probs, atol=1e-13)
        fast = er_exact_count_pmf(n, p, "isolated")
        slow = er_exact_statistic_pmf(n, p, lambda a: np.sum(a.sum(1) == 0))
        np.testing.assert_allclose(fast.probs, slow.probs, atol=1e-13)
        fast = er_exact_count_pmf(n, p, "degree_d", d=2)
        slow = er_exact_statistic_pmf(n, p, lambda a: np.sum(a.sum(1) == 2))
        np.testing.assert_allclose(fast.probs, slow.probs, atol=1e-13)

    def test_degenerate_p(self):
        pmf = er_exact_count_pmf(5, 1.0, "triangles")
        assert pmf.prob(math.comb(5, 3)) == pytest.approx(1.0, abs=1e-15)
        pmf = er_exact_count_pmf(5, 0.0, "isolated")
        assert pmf.prob(5) == pytest.approx(1.0, abs=1e-15)

    def test_moment_formulas_match_exact_pmf(self):
        n, p = 6, 0.35
        tri = er_exact_count_pmf(n, p, "triangles")
        lam, var = triangle_moments(n, p)
        assert tri.mean() == pytest.approx(lam, rel=1e-10)
        assert tri.var() == pytest.approx(var, rel=1e-10)
        iso = er_exact_count_pmf(n, p, "isolated")
        mu, ivar = isolated_moments(n, p)
        assert iso.mean() == pytest.approx(mu, rel=1e-10)
        assert iso.var() == pytest.approx(ivar, rel=1e-10)

    def test_triangle_overlap_counts(self):
        # triangles sharing exactly one edge with a fixed one: 3 edges times
        # (n - 3) third vertices; sharing two edges is impossible
        assert cycle_overlap_counts(6, 3) == {1: 9}
        assert cycle_overlap_counts(7, 3) == {1: 12}

    def test_couplers_monotone(self):
        rng = RngStream(210).generator()
        for _ in range(200):
            d = er_isolated_size_bias_coupler(7, 0.4, rng)
            assert d.companion >= 1.0
            d = er_triangle_size_bias_coupler(7, 0.4, rng)
            assert d.companion >= d.w
            d = er_degree_d_coupler(7, 0.4, 2, rng)
            assert d.companion >= 1.0

    def test_sample_validation(self):
        rng = RngStream(211).generator()
        with pytest.raises(ValueError):
            er_sample(5, 1.5, rng)
        with pytest.raises(ValueError):
            ErGraph(3, 0.5, np.ones((3, 3), dtype=bool))


class TestUniformAttachment:
    def test_exact_pmf_vs_independent_computation(self):
        n = 4
        mus = [1 / (n - i) for i in range(n)]  # 1/(n-i+1) at i = 1..n
        probs = {}
        for N in range(1, n + 1):
            for bits in itertools.product([0, 1], repeat=N):
                pr = 1 / n
                for b, mu in zip(bits, mus):
                    pr *= mu if b else (1 - mu)
                w = sum(bits)
                probs[w] = probs.get(w, 0.0) + pr
        pmf = ua_exact_pmf(n)
        for w, pr in probs.items():
            assert pmf.prob(w) == pytest.approx(pr, abs=1e-14)

    def test_mean_in_degree_is_one(self):
        assert ua_exact_pmf(60).mean() == pytest.approx(1.0, abs=1e-12)

    def test_mean_abs_diff_harmonic(self):
        assert ua_mean_abs_diff(4) == pytest.approx(
            (1 + 1 / 2 + 1 / 3 + 1 / 4) / 4, abs=1e-15)

    def test_coupler_removes_last_indicator(self):
        rng = RngStream(212).generator()
        for _ in range(300):
            d = ua_equilibrium_coupler(25, rng)
            assert d.kind == "discrete_equilibrium"
            assert d.w - 1 <= d.companion <= d.w

    def test_sampler_range(self):
        rng = RngStream(213).generator()
        for _ in range(100):
            assert 0 <= uniform_attachment_indegree(10, rng) <= 10


class TestGeometricSums:
    def test_second_moments(self):
        assert IncrementLaw("constant").second_moment == 1.0
        assert IncrementLaw("exponential").second_moment == 2.0
        assert IncrementLaw("uniform02").second_moment == pytest.approx(4 / 3)

    def test_equilibrium_quantiles_invert_cdf(self):
        law = IncrementLaw("uniform02")
        for u in (0.1, 0.4, 0.75, 0.95):
            t = law._equilibrium_quantile(u)
            assert t - t * t / 4 == pytest.approx(u, abs=1e-12)
        law = IncrementLaw("constant")
        assert law._equilibrium_quantile(0.3) == pytest.approx(0.3)
        law = IncrementLaw("exponential")
        assert law._equilibrium_quantile(0.5) == pytest.approx(math.log(2.0))

    def test_unit_means(self):
        rng = RngStream(214).generator()
        for name in ("constant", "exponential", "uniform02"):
            xs = np.array([IncrementLaw(name).sample(rng) for _ in range(20000)])
            se = max(xs.std(ddof=1) / math.sqrt(xs.size), 1e-12)
            assert abs(xs.mean() - 1.0) <= 5 * se + 1e-9

    def test_coupler_identity(self):
        rng = RngStream(215).generator()
        p = 0.2
        draws = [geometric_sum_coupler(IncrementLaw("uniform02"), p, rng)
                 for _ in range(20000)]
        # W has mean 1 (unit-mean increments, count mean 1/p, scale p)
        checks = check_equilibrium_identity(draws, 1.0, smooth_suite())
        assert all(c.ok for c in checks), [(c.name, c.diff, c.stderr)
                                           for c in checks if not c.ok]

    def test_coupler_uses_same_count_for_geometric(self):
        rng = RngStream(216).generator()
        d = geometric_sum_coupler(IncrementLaw("exponential"), 0.3, rng)
        assert d.aux["M"] == d.aux["N"]
        with pytest.raises(ValueError):
            geometric_sum_coupler(IncrementLaw("constant"), 0.0, rng)


class TestBranching:
    def test_offspring_must_be_critical(self):
        with pytest.raises(ValueError):
            GaltonWatson(binomial_pmf(2, 0.3))

    def test_survival_probability_geometric(self):
        gw = GaltonWatson(geometric_offspring(0.5))
        for n in range(1, 8):
            assert gw.survival_prob(n) == pytest.approx(1 / (n + 1), abs=1e-9)

    def test_grow_from_zero(self):
        rng = RngStream(217).generator()
        gw = GaltonWatson(geometric_offspring(0.5))
        assert gw.grow(0, 5, rng) == 0

    def test_spine_tree_consistency(self):
        rng = RngStream(218).generator()
        gw = GaltonWatson(geometric_offspring(0.5))
        for _ in range(50):
            st = gw.spine_tree(4, rng)
            assert st.S_n == st.L_n + st.R_n
            assert st.R_n >= 1
            assert len(st.levels) == 4

    def test_coupled_yaglom_draw(self):
        rng = RngStream(219).generator()
        gw = GaltonWatson(geometric_offspring(0.5))
        for _ in range(30):
            st, y, y_e = gw.coupled_yaglom_draw(3, rng)
            assert y >= 1.0
            assert st.R_n - 1 < y_e < st.R_n

    def test_size_biased_spine_mean(self):
        # E[S_n] = E[Z_n^2]/E[Z_n]; for geometric offspring E Z_n = 1 and
        # Var Z_n = n sigma^2 = 2n, so E[S_n] = 1 + 2n
        rng = RngStream(220).generator()
        gw = GaltonWatson(geometric_offspring(0.5))
        n = 3
        s = np.array([gw.spine_tree(n, rng).S_n for _ in range(20000)], float)
        se = s.std(ddof=1) / math.sqrt(s.size)
        assert abs(s.mean() - (1 + 2 * n)) <= 5 * se


class TestSpinSystems:
    def test_config_validation_and_magnetization(self):
        with pytest.raises(ValueError):
            SpinConfig(np.array([1, 0, -1]), 1.0, 0.0)
        cfg = SpinConfig(np.array([1, 1, -1, -1]), 1.0, 0.0)
        assert cfg.magnetization == 0.0

    def test_f_statistic_all_up(self):
        n, b, h = 6, 0.8, 0.1
        cfg = SpinConfig(np.ones(n, dtype=int), b, h)
        expected = 1.0 - math.tanh(b * (n - 1) / n + b * h)
        assert cw_f_statistic(cfg) == pytest.approx(expected, abs=1e-12)

    def test_pair_step_difference(self):
        rng = RngStream(221).generator()
        cfg = SpinConfig(np.ones(10, dtype=int), 0.5, 0.0)
        for _ in range(50):
            _, _, f = cw_pair_step(cfg, rng)
            assert f in (-2.0, 0.0, 2.0)

    def test_gibbs_sampler_symmetric_at_beta_zero(self):
        rng = RngStream(222).generator()
        mags = [c.magnetization for c in
                curie_weiss_gibbs(20, 0.0, 0.0, 50, 400, rng)]
        m = np.array(mags)
        assert abs(m.mean()) <= 5 / math.sqrt(20 * 400) + 0.05

    def test_antivoter_requires_regular_graph(self):
        a = np.zeros((4, 4), dtype=bool)
        a[0, 1] = a[1, 0] = a[1, 2] = a[2, 1] = True
        with pytest.raises(ValueError):
            AntiVoterChain(a)

    def test_antivoter_on_complete_graph(self):
        chain = AntiVoterChain(complete_graph(6))
        assert chain.r == 5
        spins = np.ones(6, dtype=int)
        assert chain.w(spins) == 6.0
        assert chain.q(spins) == 6.0 * 5.0
        rng = RngStream(223).generator()
        w_t, w_next, q_t = chain.run(500, rng, burn_in=100)
        assert w_t.size == w_next.size == q_t.size == 500
        # single-site updates move W by 0 or +-2
        assert set(np.unique(w_next - w_t)).issubset({-2.0, 0.0, 2.0})
