"""Uniform-attachment random graph: in-degree W of a uniformly chosen node,
its exact pmf (averaged Poisson-binomial convolutions), and the discrete
equilibrium coupler W^e = W - X_N.

Node k+1 attaches to a uniform node among 1..k (node 1 starts with a loop).
The in-degree of a uniform node has the representation W = sum_{i=1}^N X_i
with X_i ~ Bernoulli(1/(n-i+1)) independent and N uniform on {1..n}."""

from __future__ import annotations

import math

import numpy as np

from ..couplings import CouplingDraw
from ..dist import FinitePmf


def _mus(n: int) -> np.ndarray:
    return 1.0 / (n - np.arange(1, n + 1) + 1.0)


def uniform_attachment_indegree(n: int, rng: np.random.Generator) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    N = int(rng.integers(1, n + 1))
    mus = _mus(n)[:N]
    return int(np.sum(rng.random(N) < mus))


def ua_exact_pmf(n: int) -> FinitePmf:
    """Exact pmf by averaging the Poisson-binomial convolutions over N."""
    if n > 200:
        raise ValueError("convolution oracle capped at n <= 200")
    mus = _mus(n)
    acc = np.zeros(n + 1)
    dist = np.array([1.0])  # pmf of sum of first m indicators
    for m in range(1, n + 1):
        mu = mus[m - 1]
        nxt = np.zeros(dist.size + 1)
        nxt[: dist.size] += dist * (1 - mu)
        nxt[1:] += dist * mu
        dist = nxt
        acc[: dist.size] += dist / n
    return FinitePmf(0, acc, 0.0).trimmed()


def ua_equilibrium_coupler(n: int, rng: np.random.Generator) -> CouplingDraw:
    """(W, W^e) with W^e = sum_{i<N} X_i on the same indicator draw; the
    companion is a discrete-equilibrium coupling for the Geo0(1/2) target."""
    N = int(rng.integers(1, n + 1))
    mus = _mus(n)[:N]
    x = rng.random(N) < mus
    w = int(x.sum())
    we = int(x[:-1].sum())
    return CouplingDraw(float(w), float(we), "discrete_equilibrium",
                        {"N": float(N)})


def ua_mean_abs_diff(n: int) -> float:
    """E|W - W^e| = E[X_N] = (1/n) sum_i (n-i+1)^{-1} = H_n / n."""
    return float(np.sum(1.0 / np.arange(1, n + 1)) / n)
