"""Experiment execution and report emission.

CSV rows are byte-deterministic for a fixed seed: runtime is reported as 0
in the CSV (wall-clock timing is not reproducible) and the measured
runtimes go to the markdown summary instead.
"""

from __future__ import annotations

import fnmatch
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dist import RngStream
from .config import ConfigError, ExperimentConfig
from .experiments import CATALOG, get_experiment

CSV_HEADER = "experiment_id,metric,bound,distance,ci_low,ci_high,sound,seed,runtime_ms"
SOUND_SLACK = 1e-12


@dataclass(frozen=True)
class RunRecord:
    experiment_id: str
    metric: str
    bound_value: float
    distance_value: float
    distance_ci: float      # radius; 0 for exact oracles
    sound: bool
    seed: int
    runtime_ms: float       # measured; not written to the CSV

    @property
    def ci_low(self) -> float:
        return max(0.0, self.distance_value - self.distance_ci)

    @property
    def ci_high(self) -> float:
        return self.distance_value + self.distance_ci


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def csv_row(rec: RunRecord) -> str:
    return ",".join([rec.experiment_id, rec.metric, _fmt(rec.bound_value),
                     _fmt(rec.distance_value), _fmt(rec.ci_low),
                     _fmt(rec.ci_high), str(rec.sound).lower(),
                     str(rec.seed), "0"])


def write_csv(records: list[RunRecord], path: str | Path) -> None:
    lines = [CSV_HEADER] + [csv_row(r) for r in records]
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def run_experiment(cfg: ExperimentConfig, stream_id: int = 0) -> RunRecord:
    """Run one catalog experiment; deterministic given (seed, stream_id)."""
    exp = get_experiment(cfg.experiment_id)
    samples = cfg.n_draws if cfg.n_draws is not None else exp.default_samples
    rng = RngStream(cfg.seed, stream_id).generator()
    t0 = time.perf_counter()
    bound, dist = exp.fn(rng, samples)
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    if dist.metric != exp.metric:
        raise RuntimeError(f"{cfg.experiment_id}: metric mismatch "
                           f"{dist.metric} != {exp.metric}")
    sound = dist.value + dist.ci_radius <= bound + SOUND_SLACK
    return RunRecord(cfg.experiment_id, exp.metric, float(bound),
                     float(dist.value), float(dist.ci_radius), bool(sound),
                     cfg.seed, runtime_ms)


def run_suite(seed: int, out_dir: str | Path, filter_glob: str = "*",
              samples: int | None = None) -> list[RunRecord]:
    """Run every catalog experiment matching the glob, in catalog order,
    each on its own RngStream id; write results.csv and summary.md."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for stream_id, experiment_id in enumerate(CATALOG):
        if not fnmatch.fnmatch(experiment_id, filter_glob):
            continue
        cfg = ExperimentConfig(experiment_id, seed,
                               oracle=CATALOG[experiment_id].oracle,
                               n_draws=samples)
        records.append(run_experiment(cfg, stream_id=stream_id))
    write_csv(records, out / "results.csv")
    (out / "summary.md").write_bytes(
        summary_markdown(records, seed).encode("utf-8"))
    return records


def summary_markdown(records: list[RunRecord], seed: int) -> str:
    n_pass = sum(r.sound for r in records)
    n_fail = len(records) - n_pass
    lines = [
        "# Soundness suite summary",
        "",
        f"Seed: {seed}  |  PASS: {n_pass}  |  FAIL: {n_fail}",
        "",
        "| experiment | metric | bound | distance | ci radius | sound | runtime (ms) |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in records:
        lines.append(
            f"| {r.experiment_id} | {r.metric} | {r.bound_value:.6g} "
            f"| {r.distance_value:.6g} | {r.distance_ci:.3g} "
            f"| {'PASS' if r.sound else 'FAIL'} | {r.runtime_ms:.0f} |")
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# trend reports

TREND_FAMILIES = ("head_runs", "uniform_attachment", "binom_dw", "constant")


@dataclass(frozen=True)
class TrendReport:
    family: str
    sizes: list
    bounds: list
    distances: list        # nan where no exact oracle exists at that size
    slope_bound: float
    slope_distance: float  # nan when fewer than 3 exact distances

    def csv_text(self) -> str:
        lines = ["size,bound,distance"]
        for n, b, d in zip(self.sizes, self.bounds, self.distances):
            dtxt = _fmt(d) if math.isfinite(d) else ""
            lines.append(f"{n},{_fmt(b)},{dtxt}")
        return "\n".join(lines) + "\n"


def _loglog_slope(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(y) & (y > 0)
    if keep.sum() < 3:
        return float("nan")
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def trend_report(family: str, sizes, out: str | Path | None = None) -> TrendReport:
    """Bound (and exact distance, where an oracle exists) across a size
    grid, with fitted log-log slopes."""
    from .. import bounds as bd
    from ..dist import geometric_pmf, normal, poisson_pmf
    from ..metrics import dtv_discrete, dw_discrete_vs_target
    from ..models import head_runs as hr
    from ..models import uniform_attachment as ua

    sizes = [int(n) for n in sizes]
    if len(sizes) < 3 or len(set(sizes)) < 3:
        raise ConfigError("trend needs at least 3 distinct sizes")
    if family not in TREND_FAMILIES:
        raise ConfigError(f"unknown trend family {family!r}; "
                          f"known: {', '.join(TREND_FAMILIES)}")
    bvals, dvals = [], []
    for n in sizes:
        if family == "head_runs":
            p = 0.5
            # k tuned so lam = p^k((n-k)(1-p)+1) stays O(1): k ~ log_{1/p} n
            k = max(1, round(math.log(n * (1 - p)) / math.log(1 / p)))
            rep = bd.tv_head_runs(n, p, k)
            bvals.append(rep.value)
            if n <= 24:
                lam = rep.inputs["lam"].value
                dvals.append(dtv_discrete(hr.head_runs_exact_pmf(n, p, k),
                                          poisson_pmf(lam)).value)
            else:
                dvals.append(float("nan"))
        elif family == "uniform_attachment":
            bvals.append(bd.tv_uniform_attachment(n).value)
            if n <= 200:
                dvals.append(dtv_discrete(ua.ua_exact_pmf(n),
                                          geometric_pmf(0.5, "zero")).value)
            else:
                dvals.append(float("nan"))
        elif family == "binom_dw":
            from ..dist import binomial_pmf
            bvals.append(bd.wass_iid_sum([1.0] * n, [1.0] * n).value)
            pmf = binomial_pmf(n, 0.5)
            atoms = (pmf.support - n / 2) / math.sqrt(n / 4)
            dvals.append(dw_discrete_vs_target(pmf, normal(), atoms=atoms).value)
        else:  # constant
            bvals.append(1.0)
            dvals.append(float("nan"))
    slope_b = 0.0 if family == "constant" else _loglog_slope(sizes, bvals)
    slope_d = _loglog_slope(sizes, dvals)
    rep = TrendReport(family, sizes, bvals, dvals, slope_b, slope_d)
    if out is not None:
        Path(out).write_bytes(rep.csv_text().encode("utf-8"))
    return rep
