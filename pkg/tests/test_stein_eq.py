import math

import numpy as np
import pytest

from stein.dist import (exponential, geometric0, geometric_pmf, normal,
                        normal_cdf, poisson, poisson_pmf)
from stein.stein_eq import (TestFunction, apply_characterizing_operator,
                            certify_solution_norms, exponential_solution_fh,
                            expect_operator_at_target, geometric_solution_fA,
                            normal_solution_fh, normal_solution_fx,
                            normal_solution_fx_deriv, poisson_solution_fA,
                            poisson_solution_norms, smooth_suite, test_suite)

SQRT_2PI = math.sqrt(2 * math.pi)


class TestTestFunctions:
    def test_suite_composition(self):
        suite = test_suite()
        kinds = [f.kind for f in suite]
        assert len(suite) == 12
        assert kinds.count("lipschitz_hat") == 6
        assert kinds.count("indicator_halfline") == 3
        assert kinds.count("exponential") == 2
        assert kinds.count("polynomial") == 1

    def test_continuous_suite_swaps_indicators(self):
        suite = test_suite(continuous_target=True)
        assert sum(f.kind == "smoothed_indicator" for f in suite) == 3
        assert all(f.kind != "indicator_halfline" for f in suite)

    def test_smooth_suite_is_absolutely_continuous(self):
        assert all(f.kind != "indicator_halfline" for f in smooth_suite())

    def test_hat_values_and_derivative(self):
        h = TestFunction("lipschitz_hat", (1.0, 0.5))
        assert h(1.0) == 1.0
        assert h(3.0) == 0.0
        assert h(2.0) == pytest.approx(0.5)
        assert h.deriv(1.5) == -0.5
        assert h.deriv(0.5) == 0.5
        assert h.lipschitz_const == 0.5

    def test_hat_slope_capped(self):
        with pytest.raises(ValueError):
            TestFunction("lipschitz_hat", (0.0, 2.0))

    def test_smoothed_indicator_ramp(self):
        f = TestFunction("smoothed_indicator", (0.0, 0.5))
        assert f(-1.0) == 1.0
        assert f(0.25) == pytest.approx(0.5)
        assert f(1.0) == 0.0
        assert f.deriv(0.25) == -2.0

    def test_derivative_matches_finite_difference(self):
        for f in smooth_suite():
            for t in (-1.7, -0.3, 0.21, 0.9, 2.3):
                fd = (f(t + 1e-7) - f(t - 1e-7)) / 2e-7
                assert f.deriv(t) == pytest.approx(fd, abs=1e-5), (f.kind, t)


class TestNormalSolutions:
    def test_fx_at_origin_reference(self):
        # f_0(0) = sqrt(2 pi) Phi(0)(1 - Phi(0)) = sqrt(2 pi)/4
        assert normal_solution_fx(0.0, 0.0) == pytest.approx(SQRT_2PI / 4, rel=1e-14)

    def test_fx_solves_equation(self):
        for x in (-2.0, -0.5, 0.0, 1.0, 2.5):
            for w in (-3.0, -1.0, 0.2, 1.7, 4.0):
                lhs = normal_solution_fx_deriv(x, w) - w * normal_solution_fx(x, w)
                rhs = float(w <= x) - normal_cdf(x)
                assert lhs == pytest.approx(rhs, abs=1e-12), (x, w)

    def test_fx_deriv_matches_finite_difference(self):
        x = 0.7
        for w in (-2.0, 0.0, 0.3, 2.0):  # away from the kink at w = x
            fd = (normal_solution_fx(x, w + 1e-6) - normal_solution_fx(x, w - 1e-6)) / 2e-6
            assert normal_solution_fx_deriv(x, w) == pytest.approx(fd, abs=1e-7)

    def test_fx_no_overflow_guard(self):
        with pytest.raises(OverflowError):
            normal_solution_fx(0.0, 40.0)

    def test_fh_solves_equation(self):
        h = TestFunction("lipschitz_hat", (0.0, 1.0))
        from stein.stein_eq import _normal_eh
        eh = _normal_eh(h)
        for w in (-2.3, -0.4, 0.6, 1.9):
            f = lambda t: normal_solution_fh(h, t, eh)
            fd = (f(w + 1e-5) - f(w - 1e-5)) / 2e-5
            assert fd - w * f(w) == pytest.approx(h(w) - eh, abs=1e-7)


class TestPoissonSolutions:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 5.0])
    def test_fA_solves_recurrence(self, lam):
        A = [0, 2, 5]
        pmf = poisson_pmf(lam)
        pA = sum(pmf.prob(a) for a in A)
        for k in range(0, 30):
            lhs = lam * poisson_solution_fA(lam, A, k + 1) \
                - k * poisson_solution_fA(lam, A, k)
            rhs = float(k in A) - pA
            assert lhs == pytest.approx(rhs, abs=1e-10), k

    def test_fA_zero_at_origin_and_complement(self):
        assert poisson_solution_fA(2.0, [1, 3], 0) == 0.0
        assert poisson_solution_fA(2.0, [1, 3], 4, complement=True) == pytest.approx(
            -poisson_solution_fA(2.0, [1, 3], 4), abs=1e-15)

    def test_norms_within_constants(self):
        for lam in (0.5, 1.0, 5.0):
            m, d = poisson_solution_norms(lam, [0, 1, 4])
            assert m <= min(1.0, lam ** -0.5) + 1e-9
            assert d <= (1 - math.exp(-lam)) / lam + 1e-9


class TestGeometricSolutions:
    def test_fA_solves_equation(self):
        p = 0.3
        A = [1, 2, 6]
        pmf = geometric_pmf(p, "zero")
        pA = sum(pmf.prob(a) for a in A)
        for k in range(0, 25):
            f = lambda j: geometric_solution_fA(p, A, j)
            lhs = (1 - p) * (f(k + 1) - f(k)) - p * f(k) + p * f(0)
            assert lhs == pytest.approx(float(k in A) - pA, abs=1e-10), k

    def test_delta_norm(self):
        p = 0.5
        A = [0, 3, 4, 9]
        vals = [geometric_solution_fA(p, A, k) for k in range(40)]
        assert max(abs(b - a) for a, b in zip(vals, vals[1:])) <= 1.0 + 1e-12


class TestExponentialSolutions:
    def test_fh_solves_equation(self):
        h = TestFunction("smoothed_indicator", (1.0, 0.5))
        from stein.stein_eq import _exponential_eh
        eh = _exponential_eh(h)
        f = lambda t: exponential_solution_fh(h, t, eh)
        # f(0) = 0, so the operator forms f'-f and f'-f+f(0) coincide
        assert f(0.0) == pytest.approx(0.0, abs=1e-10)
        for x in (0.1, 0.8, 1.6, 3.0):
            fd = (f(x + 1e-5) - f(x - 1e-5)) / 2e-5
            assert fd - f(x) == pytest.approx(h(x) - eh, abs=1e-6)

    def test_norm_bounded_by_h(self):
        h = TestFunction("lipschitz_hat", (1.0, 1.0))
        vals = [abs(exponential_solution_fh(h, x)) for x in np.linspace(0, 10, 41)]
        assert max(vals) <= 1.0 + 1e-9


class TestOperators:
    def test_apply_forms(self):
        f = TestFunction("polynomial", ((1.0, 0.0),))  # f(t) = t
        assert apply_characterizing_operator(normal(), f, 2.0) == pytest.approx(1 - 4.0)
        assert apply_characterizing_operator(poisson(3.0), f, 2.0) == pytest.approx(
            3 * 3.0 - 2 * 2.0)
        assert apply_characterizing_operator(exponential(), f, 2.0) == pytest.approx(
            1 - 2.0 + 0.0)
        assert apply_characterizing_operator(geometric0(0.5), f, 2.0) == pytest.approx(
            0.5 * 1 - 0.5 * 2 + 0.5 * 0)

    def test_finite_difference_fallback(self):
        g = lambda w: w * w
        got = apply_characterizing_operator(normal(), g, 1.5)
        assert got == pytest.approx(2 * 1.5 - 1.5 * 1.5 ** 2, abs=1e-6)

    @pytest.mark.parametrize("law,cont", [
        (normal(), True), (exponential(), True),
        (poisson(1.0), False), (poisson(5.0), False),
        (geometric0(0.5), False), (geometric0(0.7), False)])
    def test_operator_zeros(self, law, cont):
        for f in test_suite(continuous_target=cont):
            assert abs(expect_operator_at_target(law, f)) <= 1e-8, (law, f.kind)

    def test_divergent_expectation_raises(self):
        # e^{t/2} is outside the geometric0(0.2) domain: (1-p) e^theta > 1
        f = TestFunction("exponential", (0.5,))
        with pytest.raises(RuntimeError):
            expect_operator_at_target(geometric0(0.2), f)


class TestNormCertification:
    @pytest.mark.parametrize("family", [
        "normal_kolmogorov", "normal_wasserstein", "poisson", "geometric",
        "exponential"])
    def test_certificates_pass(self, family):
        cert = certify_solution_norms(family)
        assert cert.ok, [c for c in cert.checks if not c[3]]
        assert len(cert.checks) > 0

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            certify_solution_norms("cauchy")
