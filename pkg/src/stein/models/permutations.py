"""Fixed points of a uniform random permutation: exact (rencontres) pmf and
the transposition exchangeable pair with its birth/death transition laws."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..dist import FinitePmf


def permutation_fixed_points(n: int, rng: np.random.Generator) -> int:
    if n < 2:
        raise ValueError("n must be >= 2")
    pi = rng.permutation(n)
    return int(np.sum(pi == np.arange(n)))


def fp_exact_pmf(n: int) -> FinitePmf:
    """Rencontres pmf P(W = j) = (1/j!) sum_{i <= n-j} (-1)^i / i!."""
    if n < 2:
        raise ValueError("n must be >= 2")
    probs = []
    for j in range(n + 1):
        s = sum(Fraction((-1) ** i, math.factorial(i)) for i in range(n - j + 1))
        probs.append(Fraction(1, math.factorial(j)) * s)
    return FinitePmf(0, np.array([float(x) for x in probs]), 0.0)


def count_two_cycles(pi: np.ndarray) -> int:
    idx = np.arange(pi.size)
    return int(np.sum((pi[pi] == idx) & (pi != idx)) // 2)


def fp_transposition_pair(n: int, rng: np.random.Generator):
    """One exchangeable-pair draw: uniform permutation composed with a
    uniform transposition.  Returns (w, w_prime, aux) where aux carries the
    two-cycle count W2 and the conditional birth/death probabilities
    P(W' = W + 1 | pi) = (n - W - 2 W2)/C(n,2), P(W' = W - 1 | pi) =
    W (n - W)/C(n,2)."""
    pi = rng.permutation(n)
    w = int(np.sum(pi == np.arange(n)))
    w2 = count_two_cycles(pi)
    i, j = rng.choice(n, size=2, replace=False)
    pi2 = pi.copy()
    pi2[i], pi2[j] = pi2[j], pi2[i]
    wp = int(np.sum(pi2 == np.arange(n)))
    c2 = math.comb(n, 2)
    aux = {"W2": float(w2),
           "p_up": (n - w - 2 * w2) / c2,
           "p_down": w * (n - w) / c2}
    return float(w), float(wp), aux
