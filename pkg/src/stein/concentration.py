"""Tail-bound calculators and empirical tail-frequency checks.

Raw calculator outputs are never clipped; probabilities are clipped to
[0,1] only inside TailReport for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar


def chernoff_bound(mgf, t: float, theta_range=(1e-9, 50.0),
                   theta_hint: float | None = None) -> float:
    """min over theta of E[e^{theta W}] e^{-theta t}, by a 200-point grid
    plus local golden-section refinement (started at the analytic minimizer
    when supplied)."""
    if t <= 0:
        return 1.0
    lo, hi = theta_range

    def obj(th):
        m = mgf(th)
        if not np.isfinite(m):
            return np.inf
        return m * math.exp(-th * t)

    grid = np.linspace(lo, hi, 200)
    vals = np.array([obj(th) for th in grid])
    best = int(np.argmin(vals))
    l = grid[max(0, best - 1)]
    r = grid[min(grid.size - 1, best + 1)]
    res = minimize_scalar(obj, bounds=(l, r), method="bounded",
                          options={"xatol": 1e-12})
    out = min(float(res.fun), float(vals[best]))
    if theta_hint is not None and lo <= theta_hint <= hi:
        out = min(out, obj(theta_hint))
    return out


def exch_pair_tails(B: float, C: float, t: float) -> tuple[float, float]:
    """Stein-pair tails with |E[(W'-W)^2 | W]| <= B W + C:
    upper exp{-t^2/(2C + 2Bt)}, lower exp{-t^2/(2C)}."""
    if B < 0 or C < 0:
        raise ValueError("B and C must be nonnegative")
    if C == 0 and t > 0:
        raise ValueError("lower tail needs C > 0")
    upper = math.exp(-t * t / (2 * C + 2 * B * t)) if (C or B * t) else (1.0 if t <= 0 else 0.0)
    lower = math.exp(-t * t / (2 * C)) if C else (1.0 if t <= 0 else 0.0)
    return upper, lower


def generalized_exch_tails(B: float, C: float, t: float) -> tuple[float, float]:
    """Same exponents applied to an antisymmetric-function statistic f(X)."""
    return exch_pair_tails(B, C, t)


def curie_weiss_concentration(beta: float, h: float, n: int, t: float) -> float:
    """P(|m - tanh(beta m + beta h)| >= beta/n + t/sqrt(n)) <=
    2 exp{-t^2 / (4(1+beta))}."""
    if not beta > 0 or n < 2:
        raise ValueError("need beta > 0 and n >= 2")
    return 2.0 * math.exp(-t * t / (4 * (1 + beta)))


def size_bias_tails(mu: float, sigma2: float, C: float, t: float,
                    monotone_up: bool = False, mgf_ok: bool = False):
    """Size-biased coupling with |X^s - X| <= C.

    Returns (upper, lower); the lower tail exp{-t^2 sigma^2/(2 C mu)}
    in standardized units requires X^s >= X (monotone_up), the upper tail
    exp{-t^2/(2(C mu/sigma^2 + C t/(2 sigma)))} requires the caller-asserted
    mgf finiteness.  Tails are for (W - mu)/sigma.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    if not (monotone_up or mgf_ok):
        raise ValueError("neither tail's hypothesis asserted")
    sigma = math.sqrt(sigma2)
    lower = upper = None
    if monotone_up:
        lower = math.exp(-t * t / (2 * C * mu / sigma2))
    if mgf_ok:
        upper = math.exp(-t * t / (2 * (C * mu / sigma2 + C * t / (2 * sigma))))
    return upper, lower


def hoeffding_combinatorial(a_matrix, t: float) -> float:
    """Y = sum_i a_{i pi(i)} over a uniform permutation, 0 <= a_ij <= 1:
    P(|Y - E Y| >= t) <= 2 exp{-t^2 / ((4/n) sum a_ij + 2t)}."""
    a = np.asarray(a_matrix, dtype=float)
    if np.any((a < 0) | (a > 1)):
        raise ValueError("entries must lie in [0,1]")
    n = a.shape[0]
    denom = (4.0 / n) * a.sum() + 2 * t
    if denom == 0:
        return 2.0 if t <= 0 else 0.0
    return 2.0 * math.exp(-t * t / denom)


# ---------------------------------------------------------------------------
# empirical checks

@dataclass
class TailReport:
    t_grid: np.ndarray
    bound: np.ndarray           # clipped to [0,1]
    empirical_freq: np.ndarray
    ci_upper: np.ndarray        # Wilson upper edge
    sound: np.ndarray = field(init=False)

    def __post_init__(self):
        self.bound = np.clip(self.bound, 0.0, 1.0)
        self.sound = self.ci_upper <= self.bound + 1e-12

    @property
    def all_sound(self) -> bool:
        return bool(np.all(self.sound))


def wilson_upper(count: int, n: int, z: float = 2.5758) -> float:
    """99% Wilson-interval upper edge for a binomial frequency."""
    if n == 0:
        return 1.0
    phat = count / n
    denom = 1 + z * z / n
    center = phat + z * z / (2 * n)
    rad = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return min(1.0, (center + rad) / denom)


def empirical_tail_check(sampler, statistic, bound_fn, t_grid, n_draws: int,
                         rng: np.random.Generator,
                         two_sided: bool = False) -> TailReport:
    """Empirical frequency of {statistic >= t} (or {|statistic| >= t})
    against bound_fn(t), with 99% Wilson CIs."""
    if n_draws < 10 ** 4:
        raise ValueError("need at least 10^4 draws")
    vals = np.array([statistic(sampler(rng)) for _ in range(n_draws)])
    if two_sided:
        vals = np.abs(vals)
    t_grid = np.asarray(t_grid, dtype=float)
    freq = np.array([(vals >= t).mean() for t in t_grid])
    ci = np.array([wilson_upper(int((vals >= t).sum()), n_draws) for t in t_grid])
    bound = np.array([bound_fn(t) for t in t_grid])
    return TailReport(t_grid, bound, freq, ci)
