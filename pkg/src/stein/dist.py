"""Exact finite distributions, reference laws, and seeded random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

DEFAULT_TOL = 1e-12
_NORM_SLACK = 1e-12


@dataclass(frozen=True)
class FinitePmf:
    """Finite-support integer-indexed pmf with tracked tail mass.

    `offset` is the smallest support point; `probs[j]` is the mass at
    `offset + j`.  `tail_mass` is whatever probability lives beyond the
    stored support (never silently dropped; metrics charge it as worst
    case).
    """

    offset: int
    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if np.any(probs < -_NORM_SLACK):
            raise ValueError("negative probability mass")
        if self.tail_mass < -_NORM_SLACK:
            raise ValueError("negative tail mass")
        total = probs.sum() + self.tail_mass
        if not (1 - 1e-12 <= total <= 1 + 1e-12):
            raise ValueError(f"pmf mass {total} not within 1e-12 of 1")

    @property
    def support(self) -> np.ndarray:
        return self.offset + np.arange(self.probs.size)

    def prob(self, k: int) -> float:
        j = k - self.offset
        if 0 <= j < self.probs.size:
            return float(self.probs[j])
        return 0.0

    def cdf_values(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def mean(self) -> float:
        return float(self.support @ self.probs)

    def var(self) -> float:
        m = self.mean()
        return float(((self.support - m) ** 2) @ self.probs)

    def moment(self, r: int, absolute: bool = False, center: float = 0.0) -> float:
        x = self.support - center
        if absolute:
            x = np.abs(x)
        return float((x ** r) @ self.probs)

    def expect(self, f) -> float:
        return float(sum(pk * f(int(k)) for k, pk in zip(self.support, self.probs)))

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        # tail mass must be negligible for sampling to be faithful
        p = self.probs / self.probs.sum()
        return self.offset + rng.choice(self.probs.size, size=size, p=p)

    def trimmed(self) -> "FinitePmf":
        """Drop leading/trailing zero entries (support bookkeeping only)."""
        nz = np.nonzero(self.probs)[0]
        if nz.size == 0:
            return self
        lo, hi = nz[0], nz[-1] + 1
        return FinitePmf(self.offset + int(lo), self.probs[lo:hi], self.tail_mass)


@dataclass(frozen=True)
class RngStream:
    """Deterministic counter-based random stream: (seed, stream_id) -> Generator.

    Identical (seed, stream_id) always reproduces the same draw sequence;
    distinct stream ids give independently usable substreams (Philox keys).
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = (int(self.seed) & (2**64 - 1)) | ((int(self.stream_id) & (2**64 - 1)) << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, i: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id + i)


@dataclass(frozen=True)
class TargetLaw:
    """One of the reference laws: normal, poisson(lam), exponential,
    geometric0(p), geometric1(p)."""

    family: str
    lam: float = 0.0
    p: float = 0.0

    _FAMILIES = ("normal", "poisson", "exponential", "geometric0", "geometric1")

    def __post_init__(self):
        if self.family not in self._FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "poisson" and not self.lam > 0:
            raise ValueError("poisson needs lam > 0")
        if self.family.startswith("geometric") and not (0 < self.p <= 1):
            raise ValueError("geometric needs 0 < p <= 1")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "normal":
            return normal_cdf(x)
        if self.family == "exponential":
            return np.where(x < 0, 0.0, -np.expm1(-np.maximum(x, 0.0)))
        if self.family == "poisson":
            return stats.poisson.cdf(np.floor(x), self.lam)
        if self.family == "geometric0":
            k = np.floor(x)
            return np.where(k < 0, 0.0, 1.0 - (1.0 - self.p) ** (k + 1))
        # geometric1
        k = np.floor(x)
        return np.where(k < 1, 0.0, 1.0 - (1.0 - self.p) ** k)

    def pmf(self, tol: float = DEFAULT_TOL) -> FinitePmf:
        if self.family == "poisson":
            return poisson_pmf(self.lam, tol)
        if self.family == "geometric0":
            return geometric_pmf(self.p, "zero", tol)
        if self.family == "geometric1":
            return geometric_pmf(self.p, "one", tol)
        raise ValueError(f"{self.family} has no pmf")

    def mean(self) -> float:
        if self.family == "normal":
            return 0.0
        if self.family == "exponential":
            return 1.0
        if self.family == "poisson":
            return self.lam
        if self.family == "geometric0":
            return (1 - self.p) / self.p
        return 1.0 / self.p  # geometric1


def normal(): return TargetLaw("normal")
def poisson(lam): return TargetLaw("poisson", lam=lam)
def exponential(): return TargetLaw("exponential")
def geometric0(p): return TargetLaw("geometric0", p=p)
def geometric1(p): return TargetLaw("geometric1", p=p)


def poisson_pmf(lam: float, tol: float = DEFAULT_TOL) -> FinitePmf:
    """Poisson(lam) truncated so the dropped upper tail is below tol."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    if not (0 < tol < 1):
        raise ValueError("tol must be in (0,1)")
    # find the cutoff via the survival function, then take exact masses
    k_hi = int(stats.poisson.isf(tol, lam)) + 2
    while stats.poisson.sf(k_hi - 1, lam) >= tol:
        k_hi += 8
    k = np.arange(k_hi)
    probs = stats.poisson.pmf(k, lam)
    tail = float(stats.poisson.sf(k_hi - 1, lam))
    return FinitePmf(0, probs, tail)


def geometric_pmf(p: float, convention: str = "zero", tol: float = DEFAULT_TOL) -> FinitePmf:
    """Geometric pmf; convention 'zero' gives P(k)=(1-p)^k p on k>=0,
    'one' gives P(k)=(1-p)^(k-1) p on k>=1."""
    if not (0 < p <= 1):
        raise ValueError("p must be in (0,1]")
    if convention not in ("zero", "one"):
        raise ValueError("convention must be 'zero' or 'one'")
    if p == 1.0:
        off = 0 if convention == "zero" else 1
        return FinitePmf(off, np.array([1.0]), 0.0)
    # (1-p)^m <= tol  <=>  m >= log(tol)/log(1-p)
    m = int(math.ceil(math.log(tol) / math.log1p(-p))) + 1
    k = np.arange(m)
    probs = p * (1 - p) ** k
    tail = float((1 - p) ** m)
    off = 0 if convention == "zero" else 1
    return FinitePmf(off, probs, tail)


def binomial_pmf(n: int, p: float) -> FinitePmf:
    probs = stats.binom.pmf(np.arange(n + 1), n, p)
    return FinitePmf(0, probs, 0.0)


def normal_cdf(x):
    """Standard normal CDF via the complementary error function.

    Accurate to ~1e-16 relative in the body and absolutely in the tails;
    erfc carries the |x|>2 regime without cancellation.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("normal_cdf requires finite input")
    from scipy.special import erfc
    out = 0.5 * erfc(-x / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def normal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# randomization primitives

def sample_uniform01(rng: np.random.Generator) -> float:
    return float(rng.random())


def sample_bernoulli(p: float, rng: np.random.Generator) -> int:
    if not (0 <= p <= 1):
        raise ValueError("p must be a probability")
    return int(rng.random() < p)


def sample_categorical(weights, rng: np.random.Generator) -> int:
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError("empty weights")
    if np.any(w < 0):
        raise ValueError("negative weight")
    total = w.sum()
    if total <= 0:
        raise ValueError("weights sum to zero")
    return int(rng.choice(w.size, p=w / total))


def sample_uniform_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return rng.permutation(n)
