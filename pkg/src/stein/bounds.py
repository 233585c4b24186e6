"""Approximation-bound calculators: one pure function per theorem.

Calculators never sample; stochastic inputs arrive as estimates with
provenance.  Vacuous bounds (> 1 for dTV/dK) are returned as computed with
a note — clipping happens only in reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dist import TargetLaw, exponential, geometric0, normal, poisson

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Input:
    value: float
    provenance: str = "exact"   # exact | mc_estimate
    ci_radius: float = 0.0


@dataclass
class BoundReport:
    theorem_id: str
    metric: str           # dTV | dK | dW
    target: TargetLaw
    value: float
    inputs: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound value must be nonnegative")
        if self.metric in ("dTV", "dK") and self.value > 1 and not self.notes:
            self.notes = "vacuous (exceeds 1); reported unclipped"


@dataclass
class MomentSummary:
    mean: float = 0.0
    variance: float = 0.0
    abs3: float = 0.0
    m4: float = 0.0
    ci_radius: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variance < 0 or self.ci_radius < 0:
            raise ValueError("variance and ci_radius must be nonnegative")


def _inputs(**kwargs) -> dict:
    return {k: (v if isinstance(v, Input) else Input(float(v)))
            for k, v in kwargs.items()}


# ---------------------------------------------------------------------------
# normal target

def be_iid(abs3: float, n: int) -> BoundReport:
    """Berry-Esseen for standardized iid sums: 1.88 E|X_1|^3 / sqrt(n)."""
    if abs3 < 1:
        raise ValueError("E|X|^3 < 1 is inconsistent with unit variance")
    if n < 1:
        raise ValueError("n must be >= 1")
    return BoundReport("be_iid", "dK", normal(), 1.88 * abs3 / math.sqrt(n),
                       _inputs(abs3=abs3, n=n))


def wass_iid_sum(abs3_list, m4_list, n: int | None = None) -> BoundReport:
    """Independent unit-variance-standardized sums:
    n^{-3/2} sum E|X_i|^3 + (sqrt(2)/sqrt(pi n)) sqrt(sum E X_i^4)."""
    if len(abs3_list) == 0:
        raise ValueError("empty moment list")
    n = n if n is not None else len(abs3_list)
    t1 = sum(abs3_list) / n ** 1.5
    t2 = math.sqrt(2.0) / (math.sqrt(math.pi) * n) * math.sqrt(sum(m4_list))
    return BoundReport("wass_iid_sum", "dW", normal(), t1 + t2,
                       _inputs(sum_abs3=sum(abs3_list), sum_m4=sum(m4_list), n=n))


def wass_dependency(abs3_list, m4_list, D: int, sigma: float,
                    raw_intermediates: bool = False):
    """Dependency neighborhoods of size <= D:
    (D^2/sigma^3) sum E|X_i|^3 + (sqrt(26) D^{3/2} / (sqrt(pi) sigma^2))
    sqrt(sum E X_i^4)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if D < 1:
        raise ValueError("D must be >= 1")
    t1 = D ** 2 / sigma ** 3 * sum(abs3_list)
    t2 = math.sqrt(26.0) * D ** 1.5 / (math.sqrt(math.pi) * sigma ** 2) \
        * math.sqrt(sum(m4_list))
    rep = BoundReport("wass_dependency", "dW", normal(), t1 + t2,
                      _inputs(D=D, sigma=sigma, sum_abs3=sum(abs3_list),
                              sum_m4=sum(m4_list)))
    if raw_intermediates:
        return rep, (t1, t2)
    return rep


def wass_exch_pair(a: float, var_cond_sq, abs3_diff) -> BoundReport:
    """a-Stein pair: sqrt(Var E[(W'-W)^2|W]) / (sqrt(2 pi) a)
    + E|W'-W|^3 / (3a)."""
    if not (0 < a <= 1):
        raise ValueError("a must be in (0,1]")
    v = var_cond_sq.value if isinstance(var_cond_sq, Input) else float(var_cond_sq)
    d3 = abs3_diff.value if isinstance(abs3_diff, Input) else float(abs3_diff)
    val = math.sqrt(max(v, 0.0)) / (SQRT_2PI * a) + d3 / (3 * a)
    return BoundReport("wass_exch_pair", "dW", normal(), val,
                       _inputs(a=a, var_cond_sq=var_cond_sq, abs3_diff=abs3_diff))


def wass_antivoter(n: int, r: int, sigma: float, var_q) -> BoundReport:
    """Anti-voter specialization: 4n/(3 sigma^3)
    + sqrt(Var Q) / (r sigma^2 sqrt(2 pi))."""
    vq = var_q.value if isinstance(var_q, Input) else float(var_q)
    val = 4 * n / (3 * sigma ** 3) + math.sqrt(max(vq, 0.0)) / (r * sigma ** 2 * SQRT_2PI)
    return BoundReport("wass_antivoter", "dW", normal(), val,
                       _inputs(n=n, r=r, sigma=sigma, var_q=var_q))


def wass_size_bias(mu: float, sigma2: float, var_cond, sq_diff) -> BoundReport:
    """Size-bias coupling: (mu/sigma^2) sqrt(2/pi) sqrt(Var E[X^s-X|X])
    + (mu/sigma^3) E[(X^s-X)^2]."""
    if mu <= 0 or sigma2 <= 0:
        raise ValueError("mu and sigma^2 must be positive")
    vc = var_cond.value if isinstance(var_cond, Input) else float(var_cond)
    sd = sq_diff.value if isinstance(sq_diff, Input) else float(sq_diff)
    val = (mu / sigma2) * math.sqrt(2 / math.pi) * math.sqrt(max(vc, 0.0)) \
        + mu / sigma2 ** 1.5 * sd
    return BoundReport("wass_size_bias", "dW", normal(), val,
                       _inputs(mu=mu, sigma2=sigma2, var_cond=var_cond,
                               sq_diff=sq_diff))


def wass_zero_bias(e_abs_diff) -> BoundReport:
    """2 E|W^z - W|."""
    e = e_abs_diff.value if isinstance(e_abs_diff, Input) else float(e_abs_diff)
    if e < 0:
        raise ValueError("E|W^z - W| must be nonnegative")
    return BoundReport("wass_zero_bias", "dW", normal(), 2 * e,
                       _inputs(e_abs_diff=e_abs_diff))


KOLM_ZERO_BIAS_CONST = 1.0 + 1.0 / SQRT_2PI + SQRT_2PI / 4.0  # ~ 2.0257


def kolm_zero_bias(delta: float) -> BoundReport:
    """|W^z - W| <= delta: dK <= (1 + 1/sqrt(2 pi) + sqrt(2 pi)/4) delta."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return BoundReport("kolm_zero_bias", "dK", normal(),
                       KOLM_ZERO_BIAS_CONST * delta, _inputs(delta=delta))


def kolm_exch_pair(a: float, var_cond_sq, delta: float) -> BoundReport:
    """|W' - W| <= delta: sqrt(Var E[(W'-W)^2|W])/(2a) + delta^3/(2a)
    + 3 delta / 2."""
    if not (0 < a <= 1):
        raise ValueError("a must be in (0,1]")
    v = var_cond_sq.value if isinstance(var_cond_sq, Input) else float(var_cond_sq)
    val = math.sqrt(max(v, 0.0)) / (2 * a) + delta ** 3 / (2 * a) + 1.5 * delta
    return BoundReport("kolm_exch_pair", "dK", normal(), val,
                       _inputs(a=a, var_cond_sq=var_cond_sq, delta=delta))


# ---------------------------------------------------------------------------
# Poisson target

def tv_small_numbers(p_list) -> BoundReport:
    """Independent indicators: min{1, 1/lam} sum p_i^2."""
    lam = float(sum(p_list))
    if lam <= 0:
        raise ValueError("lam = sum p_i must be positive")
    val = min(1.0, 1.0 / lam) * sum(p * p for p in p_list)
    return BoundReport("tv_small_numbers", "dTV", poisson(lam), val,
                       _inputs(lam=lam, sum_p_sq=sum(p * p for p in p_list)))


def tv_dependency_poisson(p_list, neighborhoods, p_ij) -> BoundReport:
    """Locally dependent indicators: min{1, 1/lam}
    (sum_i sum_{j in N_i} p_i p_j + sum_i sum_{j in N_i \\ {i}} p_ij).
    neighborhoods[i] must contain i; p_ij maps (i, j) pairs."""
    lam = float(sum(p_list))
    if lam <= 0:
        raise ValueError("lam must be positive")
    s1 = 0.0
    s2 = 0.0
    for i, nb in enumerate(neighborhoods):
        if i not in nb:
            raise ValueError(f"neighborhood {i} must contain i")
        for j in nb:
            s1 += p_list[i] * p_list[j]
            if j != i:
                if (i, j) not in p_ij:
                    raise ValueError(f"missing p_ij for ({i},{j})")
                s2 += p_ij[(i, j)]
    val = min(1.0, 1.0 / lam) * (s1 + s2)
    return BoundReport("tv_dependency_poisson", "dTV", poisson(lam), val,
                       _inputs(lam=lam, pair_means=s1, pair_joint=s2))


def tv_head_runs(n: int, p: float, k: int) -> BoundReport:
    """Closed head-runs bound: lam^2 (2k+1)/(n-k+1) + 2 lam p^k,
    lam = p^k((n-k)(1-p)+1)."""
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    lam = p ** k * ((n - k) * (1 - p) + 1)
    val = lam ** 2 * (2 * k + 1) / (n - k + 1) + 2 * lam * p ** k
    return BoundReport("tv_head_runs", "dTV", poisson(lam), val,
                       _inputs(n=n, p=p, k=k, lam=lam))


def tv_size_bias_poisson(lam: float, e_abs) -> BoundReport:
    """Size-bias coupling: min{1, lam} E|W + 1 - W^s|."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    e = e_abs.value if isinstance(e_abs, Input) else float(e_abs)
    return BoundReport("tv_size_bias_poisson", "dTV", poisson(lam),
                       min(1.0, lam) * e, _inputs(lam=lam, e_abs=e_abs))


def tv_size_bias_increasing(lam: float, variance: float,
                            sum_p_sq: float) -> BoundReport:
    """Increasing size-bias coupling: min{1, 1/lam}(Var - lam + 2 sum p_i^2)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    raw = variance - lam + 2 * sum_p_sq
    if raw < 0:
        raise ValueError("Var - lam + 2 sum p_i^2 < 0: inconsistent inputs")
    return BoundReport("tv_size_bias_increasing", "dTV", poisson(lam),
                       min(1.0, 1.0 / lam) * raw,
                       _inputs(lam=lam, variance=variance, sum_p_sq=sum_p_sq))


def tv_subgraph(n: int, p: float, e_H: int, overlap_counts) -> BoundReport:
    """Subgraph counts: min{1, lam}(p^{e_H}
    + sum_{t=1}^{e_H-1} |Gamma_alpha^t| (p^t - p^{e_H})).
    overlap_counts maps t -> |Gamma_alpha^t| (missing t treated as 0);
    lam must be supplied through overlap_counts['lam']."""
    counts = dict(overlap_counts)
    lam = counts.pop("lam")
    s = p ** e_H
    for t in range(1, e_H):
        s += counts.get(t, 0) * (p ** t - p ** e_H)
    return BoundReport("tv_subgraph", "dTV", poisson(lam),
                       min(1.0, lam) * s, _inputs(n=n, p=p, e_H=e_H, lam=lam))


def tv_triangles(n: int, p: float) -> BoundReport:
    """Triangle specialization: min{1, lam}(p^3 + 3(n-3) p^2 (1-p)),
    lam = C(n,3) p^3."""
    lam = math.comb(n, 3) * p ** 3
    return tv_subgraph(n, p, 3, {"lam": lam, 2: 3 * (n - 3), 1: 0})


def tv_size_bias_decreasing(lam: float, variance: float) -> BoundReport:
    """Decreasing size-bias coupling: min{1, lam}(1 - Var/lam)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if variance > lam * (1 + 1e-12):
        raise ValueError("Var > lam is inconsistent with a decreasing coupling")
    return BoundReport("tv_size_bias_decreasing", "dTV", poisson(lam),
                       min(1.0, lam) * (1 - variance / lam),
                       _inputs(lam=lam, variance=variance))


def tv_exch_pair_poisson(lam: float, c: float, cond_up, cond_down) -> BoundReport:
    """Birth-death exchangeable pair:
    min{1, lam^{-1/2}}(E|lam - c P(W'=W+1|F)| + E|W - c P(W'=W-1|F)|)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    up = cond_up.value if isinstance(cond_up, Input) else float(cond_up)
    dn = cond_down.value if isinstance(cond_down, Input) else float(cond_down)
    val = min(1.0, lam ** -0.5) * (up + dn)
    return BoundReport("tv_exch_pair_poisson", "dTV", poisson(lam), val,
                       _inputs(lam=lam, c=c, cond_up=cond_up, cond_down=cond_down))


def tv_degree_vertices(n: int, p: float, d: int, mode: str) -> BoundReport:
    """Degree-d vertex counts in G(n,p), the two quoted closed forms.

    at_least: q1 = P(Bin(n-1,p) >= d), bound q1 + d^2 (1-p) B^2/((n-1) p q1);
    at_most:  q2 = P(Bin(n-1,p) <= d), bound q2 + (n-d-1)^2 p B^2 /
    ((n-1)(1-p) q2); B = C(n-1,d) p^d (1-p)^{n-d-1}.
    """
    from scipy import stats
    if not (0 <= d <= n - 1):
        raise ValueError("need 0 <= d <= n-1")
    B = math.comb(n - 1, d) * p ** d * (1 - p) ** (n - d - 1)
    if mode == "at_least":
        q1 = float(stats.binom.sf(d - 1, n - 1, p))
        if p == 0 or q1 == 0:
            val = q1
        else:
            val = q1 + d ** 2 * (1 - p) * B ** 2 / ((n - 1) * p * q1)
        lam = n * q1 if q1 > 0 else 1e-300
        return BoundReport("tv_degree_vertices", "dTV", poisson(max(lam, 1e-300)),
                           val, _inputs(n=n, p=p, d=d, q=q1))
    if mode == "at_most":
        q2 = float(stats.binom.cdf(d, n - 1, p))
        if p == 1 or q2 == 0:
            val = q2
        else:
            val = q2 + (n - d - 1) ** 2 * p * B ** 2 / ((n - 1) * (1 - p) * q2)
        lam = n * q2 if q2 > 0 else 1e-300
        return BoundReport("tv_degree_vertices", "dTV", poisson(max(lam, 1e-300)),
                           val, _inputs(n=n, p=p, d=d, q=q2))
    raise ValueError("mode must be at_least or at_most")


# ---------------------------------------------------------------------------
# exponential / geometric targets

def wass_equilibrium(e_abs) -> BoundReport:
    """Equilibrium coupling of a mean-1 W: dW(W, Exp(1)) <= 2 E|W^e - W|."""
    e = e_abs.value if isinstance(e_abs, Input) else float(e_abs)
    if e < 0:
        raise ValueError("E|W^e - W| must be nonnegative")
    return BoundReport("wass_equilibrium", "dW", exponential(), 2 * e,
                       _inputs(e_abs=e_abs))


def wass_geometric_sum(p: float, mu2: float, e_NM, e_XMe=None) -> BoundReport:
    """Geometric sums: 2p(E|X_M - X_M^e| + E|N - M|), or the relaxed
    2p(1 + mu2/2 + E|N - M|) when no equilibrium-coupling estimate is given."""
    if not (0 < p <= 1):
        raise ValueError("p must be in (0,1]")
    nm = e_NM.value if isinstance(e_NM, Input) else float(e_NM)
    if e_XMe is not None:
        xe = e_XMe.value if isinstance(e_XMe, Input) else float(e_XMe)
        val = 2 * p * (xe + nm)
        note = "tight form"
    else:
        val = 2 * p * (1 + mu2 / 2 + nm)
        note = "relaxed form (1 + mu2/2)"
    return BoundReport("wass_geometric_sum", "dW", exponential(), val,
                       _inputs(p=p, mu2=mu2, e_NM=e_NM), note)


def tv_discrete_equilibrium(p: float, e_abs) -> BoundReport:
    """Discrete equilibrium coupling (E W = (1-p)/p):
    dTV(W, Geo0(p)) <= 2(1-p) E|W^e - W|."""
    if not (0 < p <= 1):
        raise ValueError("p must be in (0,1]")
    e = e_abs.value if isinstance(e_abs, Input) else float(e_abs)
    return BoundReport("tv_discrete_equilibrium", "dTV", geometric0(p),
                       2 * (1 - p) * e, _inputs(p=p, e_abs=e_abs))


def tv_uniform_attachment(n: int) -> BoundReport:
    """Uniform-attachment in-degree vs Geo0(1/2): 2 (log n + 1)/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return BoundReport("tv_uniform_attachment", "dTV", geometric0(0.5),
                       2 * (math.log(n) + 1) / n, _inputs(n=n))
