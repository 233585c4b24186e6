"""Occupancy models with decreasing size-bias couplings: empty boxes after
throwing balls (coupon collecting) and red balls drawn from an urn
(hypergeometric)."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..couplings import CouplingDraw
from ..dist import FinitePmf


# ---------------------------------------------------------------------------
# coupon collector: empty boxes among n after k uniform throws

def coupon_empty_boxes(n: int, k: int, rng: np.random.Generator,
                       probs=None) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if probs is None:
        boxes = rng.integers(0, n, size=k)
    else:
        probs = np.asarray(probs, dtype=float)
        if abs(probs.sum() - 1) > 1e-9 or np.any(probs < 0):
            raise ValueError("probs must be a probability vector")
        boxes = rng.choice(n, size=k, p=probs)
    return n - np.unique(boxes).size


def coupon_mean_var(n: int, k: int) -> tuple[float, float]:
    lam = n * (1 - 1 / n) ** k
    var = (lam * (1 - (1 - 1 / n) ** k)
           + n * (n - 1) * ((1 - 2 / n) ** k - (1 - 1 / n) ** (2 * k)))
    return lam, var


def coupon_exact_pmf(n: int, k: int) -> FinitePmf:
    """Exact pmf of the empty-box count by inclusion-exclusion in rational
    arithmetic: P(W=j) = C(n,j) sum_i (-1)^i C(n-j,i) ((n-j-i)/n)^k."""
    if n > 12:
        raise ValueError("inclusion-exclusion oracle capped at n <= 12")
    probs = []
    for j in range(n + 1):
        s = Fraction(0)
        for i in range(n - j + 1):
            s += (-1) ** i * math.comb(n - j, i) * Fraction(n - j - i, n) ** k
        probs.append(math.comb(n, j) * s)
    return FinitePmf(0, np.array([float(x) for x in probs]), 0.0).trimmed()


def coupon_size_bias_coupler(n: int, k: int, rng: np.random.Generator) -> CouplingDraw:
    """Size-bias the empty-box count by emptying box 1 (exchangeable
    indicators) and redistributing its balls uniformly over boxes 2..n.
    Decreasing: every other box can only gain balls, so X_j^(1) <= X_j."""
    boxes = rng.integers(0, n, size=k)
    occupied = np.zeros(n, dtype=bool)
    occupied[boxes] = True
    w = n - int(occupied.sum())
    moved = boxes == 0
    boxes2 = boxes.copy()
    boxes2[moved] = rng.integers(1, n, size=int(moved.sum()))
    occ2 = np.zeros(n, dtype=bool)
    occ2[boxes2] = True
    if np.any(~occ2[1:] & occupied[1:]):
        raise AssertionError("redistribution coupling must be decreasing")
    ws = 1 + int(np.sum(~occ2[1:]))
    return CouplingDraw(float(w), float(ws), "size_bias", {"moved": float(moved.sum())})


def coupon_tv_bound_inputs(n: int, k: int) -> float:
    """The closed form the decreasing-coupling theorem yields here:
    min{1, lam}((1-1/n)^k + (n-1)[(1-1/n)^k - (1-1/(n-1))^k])."""
    lam = n * (1 - 1 / n) ** k
    val = (1 - 1 / n) ** k + (n - 1) * ((1 - 1 / n) ** k - (1 - 1 / (n - 1)) ** k)
    return min(1.0, lam) * val


# ---------------------------------------------------------------------------
# hypergeometric: red balls in a uniform m-sample from N balls, n_red red

class HypergeometricModel:
    def __init__(self, N: int, n_red: int, m: int):
        if not (1 <= n_red <= N and 1 <= m <= N):
            raise ValueError("need 1 <= n_red, m <= N")
        self.N, self.n_red, self.m = N, n_red, m

    def mean(self) -> float:
        return self.n_red * self.m / self.N

    def var(self) -> float:
        N, n, m = self.N, self.n_red, self.m
        return n * m * (N - n) * (N - m) / (N ** 2 * (N - 1))

    def exact_pmf(self) -> FinitePmf:
        N, n, m = self.N, self.n_red, self.m
        lo = max(0, m - (N - n))
        hi = min(n, m)
        probs = [Fraction(math.comb(n, j) * math.comb(N - n, m - j),
                          math.comb(N, m)) for j in range(lo, hi + 1)]
        return FinitePmf(lo, np.array([float(x) for x in probs]), 0.0)

    def sample(self, rng: np.random.Generator) -> int:
        drawn = rng.choice(self.N, size=self.m, replace=False)
        return int(np.sum(drawn < self.n_red))

    def size_bias_coupler(self, rng: np.random.Generator) -> CouplingDraw:
        """Force red ball 0 into the sample: if absent, add it and put back
        a uniformly chosen ball from the current sample.  Decreasing:
        X_i^(0) <= X_i for every other red ball i."""
        drawn = rng.choice(self.N, size=self.m, replace=False)
        w = int(np.sum(drawn < self.n_red))
        sample2 = set(drawn.tolist())
        if 0 not in sample2:
            out = drawn[rng.integers(0, self.m)]
            sample2.discard(int(out))
            sample2.add(0)
        in2 = np.zeros(self.N, dtype=bool)
        in2[list(sample2)] = True
        in1 = np.zeros(self.N, dtype=bool)
        in1[drawn] = True
        if np.any(in2[1:] & ~in1[1:]):
            raise AssertionError("put-back coupling must be decreasing")
        ws = 1 + int(np.sum(in2[1: self.n_red]))
        return CouplingDraw(float(w), float(ws), "size_bias", {})

    def tv_bound(self) -> float:
        """min{1, lam}(n/(N-1) + m/(N-1) - nm/(N(N-1)) - 1/(N-1)) from the
        decreasing-coupling theorem, lam = nm/N."""
        N, n, m = self.N, self.n_red, self.m
        lam = self.mean()
        val = n / (N - 1) + m / (N - 1) - n * m / (N * (N - 1)) - 1 / (N - 1)
        return min(1.0, lam) * val
