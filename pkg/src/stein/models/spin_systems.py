"""Spin-system chains: the Curie-Weiss Gibbs sampler (with the single-site
exchangeable-pair statistics used for concentration of the magnetization)
and the anti-voter chain on a regular graph (a 2/n-Stein pair)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class SpinConfig:
    spins: np.ndarray   # +-1 entries
    beta: float
    h: float

    def __post_init__(self):
        if not np.all(np.abs(self.spins) == 1):
            raise ValueError("spins must be +-1")

    @property
    def n(self) -> int:
        return self.spins.size

    @property
    def magnetization(self) -> float:
        return float(self.spins.mean())


def cw_f_statistic(cfg: SpinConfig) -> float:
    """f(sigma) = m - (1/n) sum_i tanh(beta m_i + beta h) with
    m_i the magnetization of the other sites (scaled by 1/n)."""
    s, b, h = cfg.spins, cfg.beta, cfg.h
    n = s.size
    m_i = (s.sum() - s) / n
    return float(s.mean() - np.mean(np.tanh(b * m_i + b * h)))


def cw_gibbs_update(cfg: SpinConfig, i: int, rng: np.random.Generator) -> int:
    """Resample site i from its conditional law; returns the new spin."""
    s, b, h = cfg.spins, cfg.beta, cfg.h
    m_i = (s.sum() - s[i]) / s.size
    p_up = 0.5 * (1.0 + math.tanh(b * m_i + b * h))
    new = 1 if rng.random() < p_up else -1
    s[i] = new
    return new


def cw_pair_step(cfg: SpinConfig, rng: np.random.Generator):
    """One exchangeable-pair move: resample a uniform site.  Returns
    (sigma, sigma', F) with F(sigma, sigma') = sum_i (sigma_i - sigma'_i)."""
    before = cfg.spins.copy()
    i = int(rng.integers(cfg.n))
    old = cfg.spins[i]
    new = cw_gibbs_update(cfg, i, rng)
    return before, cfg.spins.copy(), float(old - new)


def curie_weiss_gibbs(n: int, beta: float, h: float, burn_in: int,
                      n_draws: int, rng: np.random.Generator,
                      thin: int = 1):
    """Yield SpinConfig snapshots from the Gibbs sampler (one sweep = n
    single-site updates; `thin` sweeps between yields)."""
    if n < 2 or burn_in < 0:
        raise ValueError("need n >= 2 and burn_in >= 0")
    spins = rng.choice(np.array([-1, 1]), size=n)
    cfg = SpinConfig(spins.astype(int), beta, h)
    for _ in range(burn_in):
        for i in rng.integers(0, n, size=n):
            cw_gibbs_update(cfg, int(i), rng)
    for _ in range(n_draws):
        for _ in range(thin):
            for i in rng.integers(0, n, size=n):
                cw_gibbs_update(cfg, int(i), rng)
        yield SpinConfig(cfg.spins.copy(), beta, h)


# ---------------------------------------------------------------------------
# anti-voter chain

class AntiVoterChain:
    """sigma_{t+1}: pick a uniform vertex v, a uniform neighbor u, and set
    sigma_v to -sigma_u.  The graph must be r-regular, non-bipartite and
    not a cycle (caller-asserted) for the stationary chain to give a
    nondegenerate 2/n-Stein pair."""

    def __init__(self, adjacency: np.ndarray):
        a = np.asarray(adjacency, dtype=bool)
        deg = a.sum(axis=1)
        if np.any(a != a.T) or np.any(np.diag(a)):
            raise ValueError("adjacency must be symmetric, no self-loops")
        if deg.min() != deg.max() or deg.min() == 0:
            raise ValueError("graph must be regular")
        self.adj = a
        self.n = a.shape[0]
        self.r = int(deg[0])
        self.neighbors = [np.flatnonzero(a[i]) for i in range(self.n)]

    def step(self, spins: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        v = int(rng.integers(self.n))
        u = int(rng.choice(self.neighbors[v]))
        spins[v] = -spins[u]
        return spins

    def w(self, spins: np.ndarray) -> float:
        return float(spins.sum())

    def q(self, spins: np.ndarray) -> float:
        """Q = sum_i sum_{j in N_i} X_i X_j."""
        return float(spins @ (self.adj @ spins))

    def run(self, steps: int, rng: np.random.Generator, burn_in: int = 1000):
        """Stationary-regime stream of (W_t, W_{t+1}, Q_t) along the chain."""
        spins = rng.choice(np.array([-1, 1]), size=self.n)
        for _ in range(burn_in):
            self.step(spins, rng)
        w_t = np.empty(steps)
        w_next = np.empty(steps)
        q_t = np.empty(steps)
        for t in range(steps):
            w_t[t] = self.w(spins)
            q_t[t] = self.q(spins)
            self.step(spins, rng)
            w_next[t] = self.w(spins)
        return w_t, w_next, q_t


def complete_graph(n: int) -> np.ndarray:
    a = ~np.eye(n, dtype=bool)
    return a
