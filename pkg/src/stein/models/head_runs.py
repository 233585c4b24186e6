"""Head runs in a coin-toss sequence: de-clumped count of runs of length
>= k, exact pmf by dynamic programming, sampler, and the size-bias coupling
used for both the Poisson bound and the concentration example."""

from __future__ import annotations

import math

import numpy as np

from ..couplings import CouplingDraw
from ..dist import FinitePmf


def head_runs_count(bits, k: int) -> int:
    """De-clumped count: number of maximal head runs of length >= k."""
    bits = np.asarray(bits).astype(int)
    n = bits.size
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    count = 0
    streak = 0
    for b in bits:
        if b:
            streak += 1
            if streak == k:
                count += 1
        else:
            streak = 0
    return count


def head_runs_mean(n: int, p: float, k: int) -> float:
    """E[W] = p^k ((n-k)(1-p) + 1)."""
    return p ** k * ((n - k) * (1 - p) + 1)


def head_runs_variance(n: int, p: float, k: int) -> float:
    """Var of the circular-indicator version used in the concentration
    example: lam (1 - p^k + sum_{i=1}^{k-1} (p^i - p^k)) with lam = n p^k."""
    lam = n * p ** k
    return lam * (1 - p ** k + sum(p ** i - p ** k for i in range(1, k)))


def head_runs_exact_pmf(n: int, p: float, k: int) -> FinitePmf:
    """Exact pmf of the de-clumped count by DP over
    (position, current streak capped at k, count so far).  n <= 24."""
    if n > 24:
        raise ValueError("DP oracle capped at n <= 24")
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    max_count = n // k + 1
    # state[s, c]: probability of streak s (s = k means 'already counted')
    state = np.zeros((k + 1, max_count + 1))
    state[0, 0] = 1.0
    for _ in range(n):
        nxt = np.zeros_like(state)
        # tails reset the streak
        nxt[0] += (1 - p) * state.sum(axis=0)
        # heads extend it
        for s in range(k + 1):
            if s + 1 < k:
                nxt[s + 1] += p * state[s]
            elif s + 1 == k:
                nxt[k, 1:] += p * state[s, :-1]  # run completes: count += 1
            else:  # s == k: run already counted, stay
                nxt[k] += p * state[k]
        state = nxt
    probs = state.sum(axis=0)
    nz = np.nonzero(probs)[0]
    return FinitePmf(0, probs[: nz[-1] + 1], 0.0)


def head_runs_sampler(n: int, p: float, k: int, rng: np.random.Generator) -> int:
    return head_runs_count(rng.random(n) < p, k)


def head_runs_circular_size_bias_coupler(n: int, p: float, k: int,
                                         rng: np.random.Generator) -> CouplingDraw:
    """Size-bias coupling of the circular run-indicator sum
    W = sum_i X_i, X_i = 1[heads at i..i+k-1 (mod n)]: pick a uniform index
    and force its k tosses to heads.  |W^s - W| <= 2k - 1 since only
    indicators within distance k of the forced window can change."""
    bits = rng.random(n) < p
    x = _circular_indicators(bits, k)
    w = int(x.sum())
    i = int(rng.integers(n))
    forced = bits.copy()
    forced[(i + np.arange(k)) % n] = True
    ws = int(_circular_indicators(forced, k).sum())
    if abs(ws - w) > 2 * k - 1:
        raise AssertionError("|W^s - W| must be <= 2k-1")
    return CouplingDraw(float(w), float(ws), "size_bias", {"I": float(i)})


def _circular_indicators(bits: np.ndarray, k: int) -> np.ndarray:
    n = bits.size
    idx = (np.arange(n)[:, None] + np.arange(k)[None, :]) % n
    return bits[idx].all(axis=1)


def head_runs_neighborhood_inputs(n: int, p: float, k: int):
    """Exact (p_i list, neighborhoods, p_ij dict) for the de-clumped
    indicators X_i = (1 - Y_{i-1}) prod Y_i..Y_{i+k-1}: N_i = {j: |i-j| <= k},
    and p_ij = 0 inside the neighborhood because overlapping de-clumped runs
    cannot coexist."""
    p_list = [p ** k] + [(1 - p) * p ** k] * (n - k)
    m = len(p_list)
    nbhds = [set(j for j in range(m) if abs(i - j) <= k) for i in range(m)]
    p_ij = {(i, j): 0.0 for i in range(m) for j in nbhds[i] if j != i}
    return p_list, nbhds, p_ij


def head_runs_grouped_inputs(n: int, p: float, k: int):
    """Grouped surrogate inputs whose dependency-theorem value reproduces the
    closed head-run bound exactly: every index carries the average mean
    lam/(n-k+1) with a full cyclic (2k+1)-neighborhood, and the cross terms
    involving the un-de-clumped first indicator are charged as a single
    pairwise term 2 lam p^k.  Only meaningful when lam <= 1 (the closed
    formula drops the min{1, 1/lam} factor)."""
    m = n - k + 1
    lam = head_runs_mean(n, p, k)
    pbar = lam / m
    p_list = [pbar] * m
    nbhds = [set((i + d) % m for d in range(-k, k + 1)) for i in range(m)]
    p_ij = {(i, j): 0.0 for i in range(m) for j in nbhds[i] if j != i}
    p_ij[(0, 1 % m)] = lam * p ** k
    p_ij[(1 % m, 0)] = lam * p ** k
    return p_list, nbhds, p_ij
