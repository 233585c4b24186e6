"""Geometric sums W = p sum_{i<=N} X_i with unit-mean increments, coupled to
an equilibrium companion W^e = p [sum_{i<M} X_i + X_M^e] where M satisfies
P(M = m) = p P(N >= m).  For geometric N the coupling takes M = N on the
same draw."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..couplings import CouplingDraw


@dataclass(frozen=True)
class IncrementLaw:
    """Nonnegative unit-mean increment with a quantile-coupled equilibrium
    transform X^e (density P(X > t)/mu on t >= 0)."""

    name: str  # constant | exponential | uniform02

    def sample(self, rng: np.random.Generator) -> float:
        u = rng.random()
        return self._quantile(u)

    def _quantile(self, u: float) -> float:
        if self.name == "constant":
            return 1.0
        if self.name == "exponential":
            return -math.log1p(-u)
        if self.name == "uniform02":
            return 2.0 * u
        raise ValueError(self.name)

    def _equilibrium_quantile(self, u: float) -> float:
        # equilibrium density p^e(t) = P(X > t) (unit mean)
        if self.name == "constant":
            return u                       # Uniform(0,1)
        if self.name == "exponential":
            return -math.log1p(-u)         # Exp(1) is its own equilibrium
        if self.name == "uniform02":
            # F_e(t) = t - t^2/4 on [0,2]
            return 2.0 * (1.0 - math.sqrt(1.0 - u))
        raise ValueError(self.name)

    def coupled_pair(self, rng: np.random.Generator) -> tuple[float, float]:
        """(X, X^e) quantile-coupled through one uniform."""
        u = rng.random()
        return self._quantile(u), self._equilibrium_quantile(u)

    @property
    def second_moment(self) -> float:
        return {"constant": 1.0, "exponential": 2.0, "uniform02": 4.0 / 3.0}[self.name]


def geometric_sum_coupler(increments: IncrementLaw, p: float,
                          rng: np.random.Generator,
                          n_sampler=None) -> CouplingDraw:
    """Coupled (W, W^e) draw.  With the default geometric1(p) count, M = N
    on the same draw; a custom n_sampler must have mean 1/p and M is then
    quantile-realized from P(M = m) = p P(N >= m) with the same uniform."""
    if not (0 < p <= 1):
        raise ValueError("p must be in (0,1]")
    if n_sampler is None:
        u = rng.random()
        n = max(1, int(math.ceil(math.log1p(-u) / math.log1p(-p)))) if p < 1 else 1
        m = n
    else:
        u = rng.random()
        n = int(n_sampler(u))
        m = _m_from_uniform(u, n_sampler, p)
    hi = max(n, m)
    xs = np.array([increments.sample(rng) for _ in range(hi)])
    xm, xme = increments.coupled_pair(rng)
    xs[m - 1] = xm
    w = p * float(xs[:n].sum())
    we = p * (float(xs[: m - 1].sum()) + xme)
    return CouplingDraw(w, we, "equilibrium",
                        {"M": float(m), "N": float(n), "X_M": xm, "X_M_e": xme})


def _m_from_uniform(u: float, n_sampler, p: float, cap: int = 10 ** 7) -> int:
    """Quantile draw of M with P(M = m) = p P(N >= m), sharing u with N."""
    acc = 0.0
    m = 0
    while acc < u:
        m += 1
        acc += p * _survival(n_sampler, m)
        if m > cap:
            raise RuntimeError("M quantile search did not terminate")
    return m


def _survival(n_sampler, m: int) -> float:
    # n_sampler must expose .sf(m) = P(N >= m) for custom counts
    return n_sampler.sf(m)
