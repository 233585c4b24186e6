import math

import numpy as np
import pytest

from stein.concentration import (TailReport, chernoff_bound,
                                 curie_weiss_concentration,
                                 empirical_tail_check, exch_pair_tails,
                                 generalized_exch_tails,
                                 hoeffding_combinatorial, size_bias_tails,
                                 wilson_upper)
from stein.dist import RngStream


class TestChernoff:
    def test_normal_mgf_gives_gaussian_tail(self):
        # min_theta e^{theta^2/2 - theta t} = e^{-t^2/2} at theta = t
        mgf = lambda th: math.exp(min(th * th / 2, 700.0))
        for t in (0.5, 1.0, 2.0):
            got = chernoff_bound(mgf, t, theta_hint=t)
            assert got == pytest.approx(math.exp(-t * t / 2), rel=1e-9)

    def test_nonpositive_t_is_trivial(self):
        assert chernoff_bound(lambda th: math.exp(th * th / 2), 0.0) == 1.0
        assert chernoff_bound(lambda th: math.exp(th * th / 2), -1.0) == 1.0

    def test_handles_divergent_mgf_region(self):
        # mgf finite only below theta = 1; optimum stays inside
        mgf = lambda th: 1.0 / (1.0 - th) if th < 1 else float("inf")
        got = chernoff_bound(mgf, 5.0)
        # exact: min over theta<1 of e^{-5 theta}/(1-theta) at theta = 4/5
        assert got == pytest.approx(5 * math.exp(-4.0), rel=1e-6)


class TestPairTails:
    def test_forms(self):
        B, C, t = 0.5, 2.0, 1.5
        up, lo = exch_pair_tails(B, C, t)
        assert up == pytest.approx(math.exp(-t * t / (2 * C + 2 * B * t)), abs=1e-15)
        assert lo == pytest.approx(math.exp(-t * t / (2 * C)), abs=1e-15)
        assert generalized_exch_tails(B, C, t) == (up, lo)

    def test_validation(self):
        with pytest.raises(ValueError):
            exch_pair_tails(-1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            exch_pair_tails(1.0, 0.0, 1.0)

    def test_monotone_in_t(self):
        ups = [exch_pair_tails(0.3, 1.0, t)[0] for t in (0.5, 1.0, 2.0, 4.0)]
        assert all(a > b for a, b in zip(ups, ups[1:]))


class TestCurieWeiss:
    def test_value(self):
        assert curie_weiss_concentration(0.5, 0.0, 100, 2.0) == pytest.approx(
            2 * math.exp(-4 / 6), abs=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            curie_weiss_concentration(0.0, 0.0, 100, 1.0)
        with pytest.raises(ValueError):
            curie_weiss_concentration(1.0, 0.0, 1, 1.0)


class TestSizeBiasTails:
    def test_forms(self):
        mu, s2, C, t = 12.5, 16.0, 5.0, 2.0
        up, lo = size_bias_tails(mu, s2, C, t, monotone_up=True, mgf_ok=True)
        assert lo == pytest.approx(math.exp(-t * t * s2 / (2 * C * mu)), abs=1e-15)
        sigma = 4.0
        assert up == pytest.approx(
            math.exp(-t * t / (2 * (C * mu / s2 + C * t / (2 * sigma)))), abs=1e-15)

    def test_flags_gate_the_tails(self):
        up, lo = size_bias_tails(1.0, 1.0, 1.0, 1.0, monotone_up=True)
        assert up is None and lo is not None
        up, lo = size_bias_tails(1.0, 1.0, 1.0, 1.0, mgf_ok=True)
        assert up is not None and lo is None
        with pytest.raises(ValueError):
            size_bias_tails(1.0, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            size_bias_tails(1.0, 1.0, 0.0, 1.0, monotone_up=True)


class TestHoeffding:
    def test_identity_matrix(self):
        n, t = 6, 2.0
        a = np.eye(n)
        got = hoeffding_combinatorial(a, t)
        assert got == pytest.approx(2 * math.exp(-t * t / (4 + 2 * t)), abs=1e-14)

    def test_entry_range_enforced(self):
        with pytest.raises(ValueError):
            hoeffding_combinatorial(np.full((3, 3), 1.5), 1.0)

    def test_dominates_fixed_point_tails(self):
        # Y = fixed points of a uniform permutation (a = I): the bound must
        # dominate the exact tail P(|Y - 1| >= t) from the rencontres pmf
        from stein.models.permutations import fp_exact_pmf
        n = 8
        pmf = fp_exact_pmf(n)
        for t in (1.0, 2.0, 3.0, 4.0):
            exact = sum(pmf.prob(j) for j in range(n + 1) if abs(j - 1) >= t)
            assert exact <= hoeffding_combinatorial(np.eye(n), t) + 1e-12


class TestWilsonAndEmpirical:
    def test_wilson_basic(self):
        assert wilson_upper(0, 0) == 1.0
        assert wilson_upper(0, 1000) < 0.01
        assert wilson_upper(1000, 1000) == 1.0
        # upper edge always covers the point estimate
        assert wilson_upper(37, 1000) > 0.037

    def test_empirical_check_requires_draws(self):
        rng = RngStream(301).generator()
        with pytest.raises(ValueError):
            empirical_tail_check(lambda r: r.standard_normal(), lambda x: x,
                                 lambda t: 1.0, [1.0], 100, rng)

    def test_gaussian_tails_sound(self):
        rng = RngStream(302).generator()
        rep = empirical_tail_check(
            lambda r: r.standard_normal(), lambda x: x,
            lambda t: math.exp(-t * t / 2), [0.5, 1.0, 2.0, 3.0],
            20000, rng)
        assert rep.all_sound

    def test_two_sided_and_clipping(self):
        rng = RngStream(303).generator()
        rep = empirical_tail_check(
            lambda r: r.standard_normal(), lambda x: x,
            lambda t: 2 * math.exp(-t * t / 2), [0.2, 1.0, 2.5],
            20000, rng, two_sided=True)
        assert rep.all_sound
        assert rep.bound[0] == 1.0  # clipped in reporting

    def test_unsound_bound_detected(self):
        rng = RngStream(304).generator()
        rep = empirical_tail_check(
            lambda r: r.standard_normal(), lambda x: x,
            lambda t: 0.0, [1.0], 20000, rng)
        assert not rep.all_sound

    def test_report_sound_vector(self):
        rep = TailReport(np.array([1.0]), np.array([0.5]), np.array([0.2]),
                         np.array([0.25]))
        assert rep.all_sound
        rep = TailReport(np.array([1.0]), np.array([0.2]), np.array([0.2]),
                         np.array([0.25]))
        assert not rep.all_sound
