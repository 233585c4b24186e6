"""Bias transforms (size, zero, equilibrium, discrete equilibrium) and
exchangeable-pair constructions, each with identity-verification helpers.

Every coupler draws the statistic and its companion from one shared random
source per draw so the pair lives on a single probability space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dist import FinitePmf


@dataclass(frozen=True)
class CouplingDraw:
    w: float
    companion: float
    kind: str   # size_bias | zero_bias | equilibrium | discrete_equilibrium | exchangeable_pair
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "discrete_equilibrium":
            ws = self.aux.get("w_s")
            if ws is not None and not (0 <= self.companion <= ws - 1):
                raise ValueError("discrete equilibrium companion out of range")


@dataclass(frozen=True)
class SteinPairSpec:
    a: float
    builder: object  # callable(rng) -> (w, w_prime) or (w, w_prime, aux)

    def __post_init__(self):
        if not (0 < self.a <= 1):
            raise ValueError("a must lie in (0,1]")


# ---------------------------------------------------------------------------
# size bias

def size_bias_pmf(p: FinitePmf) -> FinitePmf:
    """Exact reweighting P(X^s = k) = k P(X = k) / mu."""
    if p.offset < 0:
        raise ValueError("size bias needs nonnegative support")
    mu = p.mean()
    if mu <= 0:
        raise ValueError("size bias needs positive mean")
    k = p.support.astype(float)
    probs = k * p.probs / mu
    # residual mass accounts for the (reweighted) truncated tail
    tail = max(0.0, 1.0 - float(probs.sum()))
    return FinitePmf(p.offset, probs, tail).trimmed()


def size_bias_sum_coupler(model, rng: np.random.Generator) -> CouplingDraw:
    """Size-bias a sum W = sum_i X_i per the recipe: pick I with
    P(I = i) proportional to mu_i, size-bias coordinate I, redraw the rest
    from their conditional law given the new value.

    `model` must expose means() and sample(rng) -> vector, plus
    conditional_given(i, x, rng) -> full vector with coordinate i set to a
    size-biased draw x (models supply this; only indicator and independent
    summand structures are supported generically — see the helpers below).
    """
    mus = np.asarray(model.means(), dtype=float)
    if np.any(mus < 0):
        raise ValueError("summand means must be nonnegative")
    x = np.asarray(model.sample(rng), dtype=float)
    w = float(x.sum())
    i = int(rng.choice(mus.size, p=mus / mus.sum()))
    xs_i = model.size_biased_coordinate(i, rng)
    xv = np.asarray(model.conditional_given(i, xs_i, rng), dtype=float)
    ws = float(xv.sum())
    return CouplingDraw(w, ws, "size_bias", {"I": i, "x_i": float(x[i])})


class IndependentSum:
    """Independent nonnegative summands given as FinitePmfs."""

    def __init__(self, pmfs: list[FinitePmf]):
        self.pmfs = pmfs
        self._sb = [size_bias_pmf(p) for p in pmfs]

    def means(self):
        return [p.mean() for p in self.pmfs]

    def sample(self, rng):
        return np.array([float(p.sample((), rng)) for p in self.pmfs])

    def size_biased_coordinate(self, i, rng):
        return float(self._sb[i].sample((), rng))

    def conditional_given(self, i, x, rng):
        v = self.sample(rng)  # independence: conditional law = marginal law
        v[i] = x
        return v


class IndicatorSum:
    """Exchangeable-or-not indicator summands with a model-supplied
    conditional sampler given X_i = 1.

    joint_sampler(rng) -> 0/1 vector; conditional_sampler(i, rng) -> 0/1
    vector distributed as (X_j) | X_i = 1 (with coordinate i equal to 1).
    For independent indicators pass conditional_sampler=None.
    """

    def __init__(self, p_vec, joint_sampler=None, conditional_sampler=None):
        self.p = np.asarray(p_vec, dtype=float)
        self.joint_sampler = joint_sampler
        self.conditional_sampler = conditional_sampler

    def means(self):
        return self.p

    def sample(self, rng):
        if self.joint_sampler is not None:
            return self.joint_sampler(rng)
        return (rng.random(self.p.size) < self.p).astype(float)

    def size_biased_coordinate(self, i, rng):
        return 1.0  # Bernoulli size-biased to its positive part

    def conditional_given(self, i, x, rng):
        if self.conditional_sampler is not None:
            v = np.asarray(self.conditional_sampler(i, rng), dtype=float)
        else:
            v = self.sample(rng)
        v[i] = 1.0
        return v


# ---------------------------------------------------------------------------
# zero bias

class ZeroBiasDensity:
    """p^z(w) = sigma^{-2} E[W 1(W > w)] for a mean-zero discrete W:
    piecewise constant between support points, with a piecewise-linear CDF
    and an inverse-CDF sampler."""

    def __init__(self, values, probs):
        v = np.asarray(values, dtype=float)
        q = np.asarray(probs, dtype=float)
        order = np.argsort(v)
        self.v, self.q = v[order], q[order]
        mean = float(self.v @ self.q)
        if abs(mean) > 1e-10:
            raise ValueError(f"zero bias needs mean 0, got {mean}")
        self.var = float((self.v ** 2) @ self.q)
        if self.var <= 0:
            raise ValueError("zero variance")
        # density on (v[j], v[j+1]) equals E[W 1(W > v[j])]/var
        tail_ew = np.cumsum((self.v * self.q)[::-1])[::-1]  # E[W 1(W >= v_j)]
        self.heights = np.concatenate([tail_ew[1:], [0.0]]) / self.var
        widths = np.diff(self.v)
        seg = self.heights[:-1] * widths
        self.cdf_knots = np.concatenate([[0.0], np.cumsum(seg)])

    @classmethod
    def from_pmf(cls, p: FinitePmf):
        return cls(p.support.astype(float), p.probs)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        idx = np.searchsorted(self.v, w, side="right") - 1
        out = np.where((idx >= 0) & (idx < self.v.size - 1),
                       self.heights[np.clip(idx, 0, self.heights.size - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def total_mass(self) -> float:
        return float(self.cdf_knots[-1])

    def sample(self, size, rng: np.random.Generator):
        u = rng.random(size) * self.cdf_knots[-1]
        j = np.clip(np.searchsorted(self.cdf_knots, u, side="right") - 1, 0,
                    self.v.size - 2)
        h = self.heights[j]
        return self.v[j] + (u - self.cdf_knots[j]) / h


def zero_bias_density(p: FinitePmf) -> ZeroBiasDensity:
    return ZeroBiasDensity.from_pmf(p)


class ZeroBiasSum:
    """Sum of independent mean-zero discrete summands with unit total
    variance; couples W to W^z = W - X_I + X_I^z, P(I = i) = sigma_i^2."""

    def __init__(self, values_list, probs_list):
        self.values = [np.asarray(v, dtype=float) for v in values_list]
        self.probs = [np.asarray(q, dtype=float) for q in probs_list]
        self.dens = [ZeroBiasDensity(v, q) for v, q in zip(self.values, self.probs)]
        self.sig2 = np.array([d.var for d in self.dens])
        if abs(self.sig2.sum() - 1.0) > 1e-10:
            raise ValueError("summand variances must sum to 1")

    def draw(self, rng: np.random.Generator) -> CouplingDraw:
        xs = np.array([v[rng.choice(v.size, p=q)]
                       for v, q in zip(self.values, self.probs)])
        w = float(xs.sum())
        i = int(rng.choice(self.sig2.size, p=self.sig2))
        xz = float(self.dens[i].sample((), rng))
        return CouplingDraw(w, w - xs[i] + xz, "zero_bias",
                            {"I": i, "x_i": float(xs[i]), "x_z": xz})

    def draw_batch(self, n: int, rng: np.random.Generator) -> list[CouplingDraw]:
        """Vectorized batch of coupled draws (order-fixed, reproducible)."""
        m = len(self.values)
        xs = np.column_stack([v[rng.choice(v.size, size=n, p=q)]
                              for v, q in zip(self.values, self.probs)])
        w = xs.sum(axis=1)
        i = rng.choice(m, size=n, p=self.sig2)
        xz = np.array([float(self.dens[j].sample((), rng)) for j in i])
        wz = w - xs[np.arange(n), i] + xz
        return [CouplingDraw(float(w[t]), float(wz[t]), "zero_bias",
                             {"I": int(i[t])}) for t in range(n)]


def zero_bias_sum_coupler(values_list, probs_list, rng: np.random.Generator) -> CouplingDraw:
    return ZeroBiasSum(values_list, probs_list).draw(rng)


# ---------------------------------------------------------------------------
# equilibrium transforms

def equilibrium_coupler(ws_sampler, rng: np.random.Generator) -> CouplingDraw:
    """W^e = U * W^s with U uniform(0,1) independent; ws_sampler(rng) must
    return a coupled (w, w_s) pair on one space."""
    w, ws = ws_sampler(rng)
    u = rng.random()
    return CouplingDraw(float(w), float(u * ws), "equilibrium",
                        {"w_s": float(ws), "u": float(u)})


def discrete_equilibrium_coupler(ws_sampler, rng: np.random.Generator) -> CouplingDraw:
    """Companion uniform on {0, ..., w_s - 1} given an integer size-bias draw."""
    w, ws = ws_sampler(rng)
    ws = int(ws)
    if ws <= 0:
        raise ValueError("size-biased draw must be a positive integer")
    comp = int(rng.integers(0, ws))
    return CouplingDraw(float(w), float(comp), "discrete_equilibrium",
                        {"w_s": ws})


# ---------------------------------------------------------------------------
# identity checks

@dataclass
class IdentityCheck:
    name: str
    diff: float        # estimated identity residual
    stderr: float
    threshold_se: float = 4.0

    @property
    def ok(self) -> bool:
        return abs(self.diff) <= self.threshold_se * max(self.stderr, 1e-300)


def _paired_check(name, lhs: np.ndarray, rhs: np.ndarray) -> IdentityCheck:
    d = lhs - rhs
    se = float(d.std(ddof=1) / math.sqrt(d.size))
    return IdentityCheck(name, float(d.mean()), se)


def check_size_bias_identity(draws: list[CouplingDraw], mu: float,
                             test_fns) -> list[IdentityCheck]:
    """E[X g(X)] = mu E[g(X^s)] over the test suite, paired by draw."""
    w = np.array([d.w for d in draws])
    ws = np.array([d.companion for d in draws])
    return [_paired_check(f"size_bias {g.kind}{g.params}", w * g(w), mu * g(ws))
            for g in test_fns]


def check_zero_bias_identity(draws, sigma2: float, test_fns) -> list[IdentityCheck]:
    """E[W g(W)] = sigma^2 E[g'(W^z)] for absolutely continuous g."""
    w = np.array([d.w for d in draws])
    wz = np.array([d.companion for d in draws])
    return [_paired_check(f"zero_bias {g.kind}{g.params}", w * g(w),
                          sigma2 * g.deriv(wz)) for g in test_fns]


def check_equilibrium_identity(draws, mu: float, test_fns) -> list[IdentityCheck]:
    """E[f(W)] - f(0) = mu E[f'(W^e)] for Lipschitz f (mean-mu W)."""
    w = np.array([d.w for d in draws])
    we = np.array([d.companion for d in draws])
    return [_paired_check(f"equilibrium {g.kind}{g.params}", g(w) - g(0.0),
                          mu * g.deriv(we)) for g in test_fns]


def check_discrete_equilibrium_identity(draws, p: float, test_fns) -> list[IdentityCheck]:
    """p E[f(W)] - p f(0) = (1-p) E[Df(W^e)] when E W = (1-p)/p."""
    w = np.array([d.w for d in draws])
    we = np.array([d.companion for d in draws])
    return [_paired_check(f"discrete_eq {g.kind}{g.params}",
                          p * (g(w) - g(0.0)), (1 - p) * (g(we + 1) - g(we)))
            for g in test_fns]


# ---------------------------------------------------------------------------
# exchangeable pairs

@dataclass
class PairCheckReport:
    n_draws: int
    antisym_mean: float
    antisym_se: float
    slope: float
    slope_se: float
    a_claimed: float
    sq_mean: float
    sq_se: float
    two_a_sigma2: float
    sigma2: float
    threshold_se: float = 4.0

    @property
    def antisym_ok(self) -> bool:
        return abs(self.antisym_mean) <= self.threshold_se * self.antisym_se

    @property
    def slope_ok(self) -> bool:
        return abs(self.slope + self.a_claimed) <= self.threshold_se * self.slope_se

    @property
    def sq_ok(self) -> bool:
        return abs(self.sq_mean - self.two_a_sigma2) <= self.threshold_se * self.sq_se

    @property
    def ok(self) -> bool:
        return self.antisym_ok and self.slope_ok and self.sq_ok


def _batch_se(x: np.ndarray, n_batches: int = 100) -> float:
    """Batch-means standard error for (possibly autocorrelated) sequences."""
    m = x.size // n_batches
    if m < 2:
        return float(x.std(ddof=1) / math.sqrt(x.size))
    means = x[: m * n_batches].reshape(n_batches, m).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(n_batches))


def exchangeable_pair_check(pair_sampler, a: float, n_draws: int,
                            rng: np.random.Generator,
                            dependent: bool = False) -> PairCheckReport:
    """Statistical check that (W, W') is an a-Stein pair.

    Three statistics with 4-standard-error gates: the antisymmetric test
    F(w, w') = w^2 w' - w w'^2 has mean 0; the regression slope of W' - W
    on W is -a; E[(W'-W)^2] = 2 a Var(W).  Set dependent=True for pairs
    generated along a Markov chain (batch-means standard errors).
    """
    if n_draws < 1000:
        raise ValueError("need at least 10^3 draws")
    w = np.empty(n_draws)
    wp = np.empty(n_draws)
    for i in range(n_draws):
        out = pair_sampler(rng)
        w[i], wp[i] = out[0], out[1]
    se = _batch_se if dependent else (lambda x: float(x.std(ddof=1) / math.sqrt(x.size)))

    f_anti = w ** 2 * wp - w * wp ** 2
    d = wp - w
    wc = w - w.mean()
    varw = float(wc @ wc / (w.size - 1))
    slope = float((wc @ d) / (wc @ wc))
    resid = d - d.mean() - slope * wc
    if dependent:
        slope_se = _batch_se(wc * (d - slope * wc)) * w.size / float(wc @ wc)
    else:
        slope_se = math.sqrt(float(resid @ resid) / (w.size - 2) / float(wc @ wc))
    sq = d ** 2
    return PairCheckReport(
        n_draws=n_draws,
        antisym_mean=float(f_anti.mean()), antisym_se=se(f_anti),
        slope=slope, slope_se=float(slope_se), a_claimed=a,
        sq_mean=float(sq.mean()), sq_se=se(sq),
        two_a_sigma2=2 * a * varw, sigma2=varw)
