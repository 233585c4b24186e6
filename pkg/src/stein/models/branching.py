"""Critical Galton-Watson process and its size-bias spine tree.

The spine tree gives, in one structure, a copy of the size-biased
generation size S_n, the counts L_n / R_n of generation-n individuals to
the left / right (inclusive) of the distinguished vertex, the equilibrium
companion Y_n^e = R_n - U, and the conditioned copy Y_n = R_n^* built from
per-level resampled right counts R'_{n,j} ~ R_{n,j} | L_{n,j} = 0."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..couplings import size_bias_pmf
from ..dist import FinitePmf


@dataclass
class SpineTreeStats:
    n: int
    S_n: int
    L_n: int
    R_n: int
    levels: list = field(default_factory=list)  # per-level (X_j, L_nj, R_nj)

    def __post_init__(self):
        if self.S_n != self.L_n + self.R_n or self.R_n < 1:
            raise ValueError("inconsistent spine counts")


class GaltonWatson:
    """Offspring law given as a finite-support pmf with mean 1."""

    def __init__(self, offspring: FinitePmf):
        mean = offspring.mean()
        if abs(mean - 1.0) > 1e-10:
            raise ValueError(f"offspring mean must be 1 (critical), got {mean}")
        if offspring.prob(1) >= 1.0:
            raise ValueError("degenerate offspring law")
        self.offspring = offspring
        self.sb = size_bias_pmf(offspring)
        self.sigma2 = offspring.var()
        self._vals = offspring.support
        self._probs = offspring.probs / offspring.probs.sum()
        self._sb_vals = self.sb.support
        self._sb_probs = self.sb.probs / self.sb.probs.sum()

    def grow(self, start: int, generations: int, rng: np.random.Generator) -> int:
        """Generation size after `generations` steps from `start` individuals."""
        z = start
        for _ in range(generations):
            if z == 0:
                return 0
            z = int(self._vals[rng.choice(self._vals.size, size=z,
                                          p=self._probs)].sum())
        return z

    def survival_prob(self, n: int) -> float:
        """P(Z_n > 0) by iterating the generating function on the exact
        (truncated) offspring pmf: q_{m+1} = sum_k p_k q_m^k."""
        q = 0.0  # extinction by generation m
        for _ in range(n):
            q = float(self._probs @ (q ** self._vals.astype(float)))
        return 1.0 - q

    def _level(self, depth: int, rng: np.random.Generator):
        """One spine level grown to the target generation: returns
        (X_j, L_nj, R_nj) where depth = n - j remaining generations."""
        x = int(self._sb_vals[rng.choice(self._sb_vals.size, p=self._sb_probs)]) - 1
        left = int(rng.integers(0, x + 1))
        right = x - left
        lnj = self.grow(left, depth, rng)
        rnj = self.grow(right, depth, rng)
        return x, lnj, rnj

    def spine_tree(self, n: int, rng: np.random.Generator) -> SpineTreeStats:
        levels = [self._level(n - j, rng) for j in range(1, n + 1)]
        L = sum(l for _, l, _ in levels)
        R = 1 + sum(r for _, _, r in levels)
        return SpineTreeStats(n, L + R, L, R, levels)

    def _right_given_no_left(self, depth: int, rng: np.random.Generator,
                             max_tries: int = 200000) -> int:
        """R'_{n,j} ~ R_{n,j} | L_{n,j} = 0 by rejection."""
        for _ in range(max_tries):
            _, lnj, rnj = self._level(depth, rng)
            if lnj == 0:
                return rnj
        raise RuntimeError("rejection sampler for R' did not accept")

    def coupled_yaglom_draw(self, n: int, rng: np.random.Generator):
        """(stats, y_n, y_n_e): Y_n = R_n^* = 1 + sum_j R*_{n,j} with
        R*_{n,j} = R_{n,j} on {L_{n,j}=0} else an independent conditioned
        copy; Y_n^e = R_n - U."""
        stats = self.spine_tree(n, rng)
        y = 1
        for j, (x, lnj, rnj) in enumerate(stats.levels, start=1):
            if lnj == 0:
                y += rnj
            else:
                y += self._right_given_no_left(n - j, rng)
        y_e = stats.R_n - rng.random()
        return stats, float(y), float(y_e)


def geometric_offspring(p: float = 0.5, tol: float = 1e-12) -> FinitePmf:
    """Truncated geometric0(p) offspring; critical exactly when p = 1/2
    (truncation keeps the mean within ~1e-12 of 1)."""
    from ..dist import geometric_pmf
    g = geometric_pmf(p, "zero", tol)
    return g
