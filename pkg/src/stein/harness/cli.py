"""Command-line entry point.

Subcommands: bound, verify, suite, coupling-check, trend.
Exit codes: 0 all sound / all checks pass, 1 any FAIL, 2 config error.
"""

from __future__ import annotations

import argparse
import inspect
import sys

import numpy as np

from .. import bounds, couplings, stein_eq
from ..dist import RngStream, binomial_pmf, geometric_pmf, poisson_pmf
from ..models import geometric_sums, occupancy, permutations, spin_systems
from ..models import uniform_attachment as ua
from .config import ConfigError, ExperimentConfig, load_params
from .runner import csv_row, run_experiment, run_suite, trend_report, write_csv

THEOREMS = {
    name: fn for name, fn in vars(bounds).items()
    if callable(fn) and not name.startswith("_")
    and inspect.isfunction(fn) and name not in ("Input",)
    and fn.__module__ == bounds.__name__
}


def _cmd_bound(args) -> int:
    if args.theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem {args.theorem!r}; "
                          f"known: {', '.join(sorted(THEOREMS))}")
    fn = THEOREMS[args.theorem]
    params = load_params(args.params)
    sig = inspect.signature(fn)
    kwargs = {}
    for name, par in sig.parameters.items():
        if name in params:
            kwargs[name] = params[name]
        elif par.default is inspect.Parameter.empty:
            raise ConfigError(f"{args.theorem}: missing parameter {name!r}")
    unknown = set(params) - set(sig.parameters)
    if unknown:
        raise ConfigError(f"{args.theorem}: unknown parameters {sorted(unknown)}")
    try:
        rep = fn(**kwargs)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"{args.theorem}: {e}") from e
    print(f"theorem:  {rep.theorem_id}")
    print(f"metric:   {rep.metric}")
    print(f"target:   {rep.target.family}")
    print(f"bound:    {rep.value:.12g}")
    if rep.notes:
        print(f"notes:    {rep.notes}")
    return 0


def _cmd_verify(args) -> int:
    cfg = ExperimentConfig(args.experiment, args.seed, n_draws=args.samples)
    try:
        rec = run_experiment(cfg)
    except KeyError as e:
        raise ConfigError(str(e)) from e
    write_csv([rec], args.out)
    print(csv_row(rec))
    print(f"{'SOUND' if rec.sound else 'FAIL'}: distance "
          f"{rec.distance_value:.6g} (+{rec.distance_ci:.3g}) vs bound "
          f"{rec.bound_value:.6g}")
    return 0 if rec.sound else 1


def _cmd_suite(args) -> int:
    records = run_suite(args.seed, args.out, filter_glob=args.filter)
    n_fail = sum(not r.sound for r in records)
    print(f"{len(records)} experiments, {len(records) - n_fail} PASS, "
          f"{n_fail} FAIL -> {args.out}")
    return 1 if n_fail else 0


# ---------------------------------------------------------------------------
# coupling checks

def _check_size_bias_independent(samples, rng):
    pmfs = [binomial_pmf(3, 0.3), poisson_pmf(1.2, 1e-10),
            geometric_pmf(0.6, "zero", 1e-10), binomial_pmf(1, 0.7)]
    model = couplings.IndependentSum(pmfs)
    mu = float(sum(model.means()))
    draws = [couplings.size_bias_sum_coupler(model, rng) for _ in range(samples)]
    return couplings.check_size_bias_identity(draws, mu, stein_eq.test_suite())


def _check_size_bias_coupon(samples, rng):
    n, k = 8, 16
    mu, _ = occupancy.coupon_mean_var(n, k)
    draws = [occupancy.coupon_size_bias_coupler(n, k, rng) for _ in range(samples)]
    return couplings.check_size_bias_identity(draws, mu, stein_eq.test_suite())


def _check_zero_bias_rademacher(samples, rng):
    n = 30
    s = 1.0 / np.sqrt(n)
    zb = couplings.ZeroBiasSum([[-s, s]] * n, [[0.5, 0.5]] * n)
    draws = zb.draw_batch(samples, rng)
    return couplings.check_zero_bias_identity(draws, 1.0, stein_eq.smooth_suite())


def _check_equilibrium_geometric_sum(samples, rng):
    inc = geometric_sums.IncrementLaw("uniform02")
    draws = [geometric_sums.geometric_sum_coupler(inc, 0.2, rng)
             for _ in range(samples)]
    return couplings.check_equilibrium_identity(draws, 1.0, stein_eq.smooth_suite())


def _check_discrete_equilibrium_ua(samples, rng):
    # E W = 1 for the uniform-attachment in-degree, matching Geo0(1/2)
    draws = [ua.ua_equilibrium_coupler(50, rng) for _ in range(samples)]
    return couplings.check_discrete_equilibrium_identity(
        draws, 0.5, stein_eq.test_suite())


def _check_exch_pair_iid(samples, rng):
    n = 50

    def pair(rng):
        xi = rng.choice([-1.0, 1.0], size=n)
        w = xi.sum() / np.sqrt(n)
        i = int(rng.integers(n))
        wp = w + (rng.choice([-1.0, 1.0]) - xi[i]) / np.sqrt(n)
        return w, wp

    rep = couplings.exchangeable_pair_check(pair, 1.0 / n, samples, rng)
    return [couplings.IdentityCheck("antisymmetry", rep.antisym_mean, rep.antisym_se),
            couplings.IdentityCheck("slope+a", rep.slope + rep.a_claimed, rep.slope_se),
            couplings.IdentityCheck("sq-2a*var", rep.sq_mean - rep.two_a_sigma2, rep.sq_se)]


def _check_exch_pair_antivoter(samples, rng):
    chain = spin_systems.AntiVoterChain(spin_systems.complete_graph(8))
    w_t, w_next, _ = chain.run(samples, rng)
    it = iter(zip(w_t, w_next))

    def pair(rng):
        return next(it)

    rep = couplings.exchangeable_pair_check(pair, 2.0 / chain.n, samples, rng,
                                            dependent=True)
    return [couplings.IdentityCheck("antisymmetry", rep.antisym_mean, rep.antisym_se),
            couplings.IdentityCheck("slope+a", rep.slope + rep.a_claimed, rep.slope_se),
            couplings.IdentityCheck("sq-2a*var", rep.sq_mean - rep.two_a_sigma2, rep.sq_se)]


COUPLING_CHECKS = {
    "size_bias_independent": _check_size_bias_independent,
    "size_bias_coupon": _check_size_bias_coupon,
    "zero_bias_rademacher": _check_zero_bias_rademacher,
    "equilibrium_geometric_sum": _check_equilibrium_geometric_sum,
    "discrete_equilibrium_ua": _check_discrete_equilibrium_ua,
    "exch_pair_iid": _check_exch_pair_iid,
    "exch_pair_antivoter": _check_exch_pair_antivoter,
}


def _cmd_coupling_check(args) -> int:
    if args.coupling not in COUPLING_CHECKS:
        raise ConfigError(f"unknown coupling {args.coupling!r}; "
                          f"known: {', '.join(sorted(COUPLING_CHECKS))}")
    rng = RngStream(args.seed).generator()
    checks = COUPLING_CHECKS[args.coupling](args.samples, rng)
    ok = True
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        ok &= c.ok
        print(f"{status}  {c.name}: residual {c.diff:+.3e} "
              f"(se {c.stderr:.3e}, gate {c.threshold_se:.0f} se)")
    print(f"{args.coupling}: {'PASS' if ok else 'FAIL'} "
          f"({len(checks)} checks, {args.samples} draws)")
    return 0 if ok else 1


def _cmd_trend(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rep = trend_report(args.family, sizes, out=args.out)
    print(f"family {rep.family}: slope(bound) = {rep.slope_bound:.4f}, "
          f"slope(distance) = {rep.slope_distance:.4f} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stein",
        description="Distributional approximation bounds with soundness "
                    "certification against exact and Monte Carlo oracles.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate a bound calculator")
    b.add_argument("--theorem", required=True)
    b.add_argument("--params", required=True, help="key=value or JSON file")
    b.set_defaults(fn=_cmd_bound)

    v = sub.add_parser("verify", help="run one experiment and certify it")
    v.add_argument("--experiment", required=True)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--out", required=True)
    v.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("suite", help="run the full experiment catalog")
    s.add_argument("--filter", default="*")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_suite)

    c = sub.add_parser("coupling-check", help="verify coupling identities")
    c.add_argument("--coupling", required=True)
    c.add_argument("--samples", type=int, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.set_defaults(fn=_cmd_coupling_check)

    t = sub.add_parser("trend", help="bound/distance trend over a size grid")
    t.add_argument("--family", required=True)
    t.add_argument("--sizes", required=True, help="comma-separated sizes")
    t.add_argument("--out", required=True)
    t.set_defaults(fn=_cmd_trend)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses exit code 2 for usage errors already
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
