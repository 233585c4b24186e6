"""Total variation, Kolmogorov and Wasserstein distances.

Exact values on finite pmfs (with tail mass charged as a worst-case
upper-bound correction), CDF-L1 Wasserstein for integer laws, quadrature
against continuous targets, and Monte Carlo plug-in estimators with
confidence radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import FinitePmf, TargetLaw, normal_cdf, normal_pdf


@dataclass(frozen=True)
class MetricValue:
    metric: str            # dTV | dK | dW
    value: float
    mode: str = "exact"    # exact | estimated
    ci_radius: float = 0.0

    def __post_init__(self):
        if self.metric in ("dTV", "dK") and not (-1e-12 <= self.value <= 1 + 1e-9):
            raise ValueError(f"{self.metric} out of [0,1]: {self.value}")
        if self.value < -1e-12:
            raise ValueError("negative metric value")


def _aligned(p: FinitePmf, q: FinitePmf):
    """Both mass vectors on the union of supports."""
    lo = min(p.offset, q.offset)
    hi = max(p.offset + p.probs.size, q.offset + q.probs.size)
    a = np.zeros(hi - lo)
    b = np.zeros(hi - lo)
    a[p.offset - lo: p.offset - lo + p.probs.size] = p.probs
    b[q.offset - lo: q.offset - lo + q.probs.size] = q.probs
    return lo, a, b


def dtv_discrete(p: FinitePmf, q: FinitePmf) -> MetricValue:
    """Exact (certified-upper) total variation between finite pmfs."""
    _, a, b = _aligned(p, q)
    val = 0.5 * np.abs(a - b).sum() + 0.5 * (p.tail_mass + q.tail_mass)
    return MetricValue("dTV", min(float(val), 1.0))


def dk_discrete_vs_discrete(p: FinitePmf, q: FinitePmf) -> MetricValue:
    lo, a, b = _aligned(p, q)
    fa, fb = np.cumsum(a), np.cumsum(b)
    val = float(np.max(np.abs(fa - fb))) + p.tail_mass + q.tail_mass
    return MetricValue("dK", min(val, 1.0))


def dk_discrete_vs_target(p: FinitePmf, law: TargetLaw,
                          atoms: np.ndarray | None = None) -> MetricValue:
    """sup_x |F_p(x) - F_law(x)|; for a continuous target the sup over each
    flat piece of F_p is attained approaching the next atom, so both sides
    of every atom are checked.  `atoms` overrides the support locations
    (for rescaled integer laws); they must be increasing."""
    if atoms is None:
        ks = p.support.astype(float)
    else:
        ks = np.asarray(atoms, dtype=float)
        if np.any(np.diff(ks) <= 0):
            raise ValueError("atoms must be strictly increasing")
    fp = p.cdf_values()
    fl = np.asarray(law.cdf(ks), dtype=float)
    at_k = np.abs(fp - fl)
    left = np.abs(np.concatenate(([0.0], fp[:-1])) - fl)  # just below each atom
    # beyond the last stored atom F_p is fp[-1]+tail vs F_law -> 1
    right_gap = abs(1.0 - fp[-1])
    val = float(max(at_k.max(), left.max(), right_gap)) + p.tail_mass
    return MetricValue("dK", min(val, 1.0))


def dw_integer_supported(p: FinitePmf, q: FinitePmf) -> MetricValue:
    """Wasserstein distance of integer laws via the CDF L1 identity
    sum_k |F_p(k) - F_q(k)|.  Tail mass is charged at one support-width
    per unit, which is negligible at builder tolerances."""
    lo, a, b = _aligned(p, q)
    fa, fb = np.cumsum(a), np.cumsum(b)
    val = float(np.abs(fa - fb).sum())
    val += (p.tail_mass + q.tail_mass) * a.size
    return MetricValue("dW", val)


def _cdf_antideriv(law: TargetLaw, x: np.ndarray) -> np.ndarray:
    """G with G' = F_law, in closed form (normal / exponential only)."""
    if law.family == "normal":
        return x * normal_cdf(x) + normal_pdf(x)
    if law.family == "exponential":
        xp = np.maximum(x, 0.0)
        return xp + np.exp(-xp) - 1.0
    raise ValueError("dw_discrete_vs_target supports normal and exponential")


def _target_quantile(law: TargetLaw, c: float) -> float:
    from scipy import stats
    if law.family == "normal":
        return float(stats.norm.ppf(c))
    return float(stats.expon.ppf(c))


def dw_discrete_vs_target(p: FinitePmf, law: TargetLaw,
                          atoms: np.ndarray | None = None) -> MetricValue:
    """integral of |F_p - F_law| using the exact antiderivative of the
    target CDF on each flat piece of F_p (splitting at the crossing).

    `atoms` overrides the support locations (for rescaled integer laws).
    Any tail_mass is treated as sitting just past the last atom, which is
    negligible at builder tolerances but keeps the value an upper bound
    only up to that placement; builders keep tails < 1e-12.
    """
    if law.family not in ("normal", "exponential"):
        raise ValueError("law must be exponential or normal")
    if atoms is None:
        atoms = p.support.astype(float)
    else:
        atoms = np.asarray(atoms, dtype=float)
    masses = p.probs.copy()
    order = np.argsort(atoms)
    atoms, masses = atoms[order], masses[order]
    masses[-1] += p.tail_mass
    val = _dw_points_vs_target(atoms, masses, law)
    return MetricValue("dW", float(val))


def _piece_abs_integral(law: TargetLaw, l: float, u: float, c: float) -> float:
    """integral over [l,u] of |c - F_law(x)| with F_law monotone."""
    if u <= l:
        return 0.0
    G = lambda x: float(_cdf_antideriv(law, np.array([x]))[0])
    Fl = float(law.cdf(np.array([l]))[0])
    Fu = float(law.cdf(np.array([u]))[0])
    if Fu <= c:          # F below c on the whole piece
        return c * (u - l) - (G(u) - G(l))
    if Fl >= c:          # F above c on the whole piece
        return (G(u) - G(l)) - c * (u - l)
    xc = min(max(_target_quantile(law, c), l), u)
    return (c * (xc - l) - (G(xc) - G(l))) + ((G(u) - G(xc)) - c * (u - xc))


def _upper_tail_integral(law: TargetLaw, x0: float) -> float:
    """integral over (x0, inf) of (1 - F_law)."""
    if law.family == "exponential":
        return math.exp(-max(x0, 0.0)) + max(0.0, -x0)
    # normal: int_x0^inf (1 - Phi) = phi(x0) - x0 (1 - Phi(x0))
    return float(normal_pdf(x0) - x0 * (1.0 - normal_cdf(x0)))


def dk_from_dw_bound(dw: float, density_bound: float) -> float:
    """Kolmogorov from Wasserstein when the target has a bounded density:
    dK <= sqrt(2 C dW); for the standard normal this is (2/pi)^(1/4) sqrt(dW)."""
    if dw < 0:
        raise ValueError("dw must be nonnegative")
    if not density_bound > 0:
        raise ValueError("density bound must be positive")
    return math.sqrt(2.0 * density_bound * dw)


# ---------------------------------------------------------------------------
# Monte Carlo estimators

def _dkw_radius(n: int, delta: float = 0.01) -> float:
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n))


def estimate_metric_mc(samples_a, samples_b_or_law, metric: str,
                       delta: float = 0.01) -> MetricValue:
    """Plug-in empirical estimate of dTV/dK/dW with a 99% confidence radius.

    dTV is only defined here for integer-valued data (histogram plug-in,
    positively biased, used on the <= side of soundness checks).
    """
    a = np.asarray(samples_a, dtype=float)
    if a.size < 1000:
        raise ValueError("need at least 10^3 samples")
    vs_law = isinstance(samples_b_or_law, TargetLaw)

    if metric == "dTV":
        ka = np.rint(a).astype(int)
        if not np.allclose(a, ka):
            raise ValueError("dTV estimator needs integer-valued samples")
        lo = ka.min()
        if vs_law:
            q = samples_b_or_law.pmf()
            lo = min(lo, q.offset)
            hi = max(ka.max(), q.offset + q.probs.size - 1)
            pa = np.bincount(ka - lo, minlength=hi - lo + 1) / a.size
            qv = np.zeros(hi - lo + 1)
            qv[q.offset - lo: q.offset - lo + q.probs.size] = q.probs
            val = 0.5 * np.abs(pa - qv).sum() + 0.5 * q.tail_mass
            rad = _dkw_radius(a.size, delta) * math.sqrt(max(1, np.count_nonzero(pa + qv)))
        else:
            b = np.rint(np.asarray(samples_b_or_law)).astype(int)
            lo = min(lo, b.min()); hi = max(ka.max(), b.max())
            pa = np.bincount(ka - lo, minlength=hi - lo + 1) / a.size
            pb = np.bincount(b - lo, minlength=hi - lo + 1) / b.size
            val = 0.5 * np.abs(pa - pb).sum()
            rad = _dkw_radius(min(a.size, b.size), delta) * math.sqrt(max(1, np.count_nonzero(pa + pb)))
        return MetricValue("dTV", min(float(val), 1.0), "estimated", float(rad))

    if metric == "dK":
        a = np.sort(a)
        n = a.size
        ecdf_hi = np.arange(1, n + 1) / n
        ecdf_lo = np.arange(0, n) / n
        if vs_law:
            F = np.asarray(samples_b_or_law.cdf(a), dtype=float)
            val = float(max(np.max(np.abs(ecdf_hi - F)), np.max(np.abs(ecdf_lo - F))))
            rad = _dkw_radius(n, delta)
        else:
            b = np.sort(np.asarray(samples_b_or_law, dtype=float))
            grid = np.concatenate([a, b])
            Fa = np.searchsorted(a, grid, side="right") / a.size
            Fb = np.searchsorted(b, grid, side="right") / b.size
            val = float(np.max(np.abs(Fa - Fb)))
            rad = _dkw_radius(a.size, delta) + _dkw_radius(b.size, delta)
        return MetricValue("dK", min(val, 1.0), "estimated", float(rad))

    if metric == "dW":
        a = np.sort(a)
        if vs_law:
            law = samples_b_or_law
            # integral of |ecdf - F| via the piecewise-exact machinery
            masses = np.full(a.size, 1.0 / a.size)
            val = _dw_points_vs_target(a, masses, law)
            span = float(a[-1] - a[0]) if a.size > 1 else 1.0
            rad = _dkw_radius(a.size, delta) * (span + 2.0)
        else:
            b = np.sort(np.asarray(samples_b_or_law, dtype=float))
            if a.size == b.size:
                val = float(np.mean(np.abs(a - b)))
            else:
                grid = np.linspace(0, 1, 2001)[1:-1]
                qa = np.quantile(a, grid); qb = np.quantile(b, grid)
                val = float(np.mean(np.abs(qa - qb)))
            span = float(max(a[-1], b[-1]) - min(a[0], b[0])) if a.size > 1 else 1.0
            rad = (_dkw_radius(a.size, delta) + _dkw_radius(b.size, delta)) * (span + 2.0)
        return MetricValue("dW", val, "estimated", float(rad))

    raise ValueError(f"unknown metric {metric!r}")


def _dw_points_vs_target(atoms: np.ndarray, masses: np.ndarray, law: TargetLaw) -> float:
    """integral |F_points - F_law| for a weighted point set (sorted atoms)."""
    F = np.concatenate(([0.0], np.cumsum(masses)))
    total = _lower_tail_integral(law, float(atoms[0]))
    for i in range(len(atoms) - 1):
        total += _piece_abs_integral(law, float(atoms[i]), float(atoms[i + 1]), float(F[i + 1]))
    c = float(F[-1])
    u = float(atoms[-1])
    if c >= 1.0 - 1e-15:
        total += _upper_tail_integral(law, u)
    else:
        xc = max(_target_quantile(law, c), u)
        total += _piece_abs_integral(law, u, xc, c)
        total += _upper_tail_integral(law, xc)
    return total


def _lower_tail_integral(law: TargetLaw, x0: float) -> float:
    """integral over (-inf, x0) of F_law."""
    if law.family == "exponential":
        x = max(x0, 0.0)
        return x + math.exp(-x) - 1.0
    return float(x0 * normal_cdf(x0) + normal_pdf(x0))
