"""Command line interface.

One executable, subcommands per capability:

    roots        leading characteristic root + regime of a drift value
    fundsol      fundamental solution and its delay average as CSV
    simulate     one path as CSV (optionally with retained increments)
    estimate     drift MLE of a path (CSV input or inline simulation)
    limit-sample draws from one of the five limit laws, one per line
    experiment   Monte Carlo experiment from a config file
    report-plot  empirical-vs-limit CDF table from a report JSON

Exit codes: 0 success, 2 usage/configuration error, 3 numerical failure.
Every randomized subcommand requires an explicit ``--seed``; there is no
ambient randomness.  CSV schemas are frozen: ``t,x[,dw]`` for paths,
``replication,a_hat,scaled_error`` for experiments, and
``value,ecdf_scaled,ecdf_limit`` for report-plot.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import (
    DegenerateDenominator,
    EmptySample,
    InvalidGrid,
    InvalidPhase,
    KernelTooShort,
    MissingIncrements,
    NoConvergence,
    NonpositiveInformation,
    UnsupportedRegime,
)
from .fundamental import fisher_limit, fundamental_solution
from .harness import ExperimentConfig, run_experiment
from .inference import mle
from .limits import (
    sample_critical_limit,
    sample_df_limit,
    sample_lamn_limit,
    sample_lan_limit,
    sample_plamn_limit,
)
from .paths import DelayModel, InitialSegment, SamplePath, simulate_path
from .roots import BOUNDARY_ATOL, CRITICAL_A, Regime, classify_regime, leading_root

_NUMERICAL = (NoConvergence, DegenerateDenominator, NonpositiveInformation)
_USAGE = (
    InvalidGrid,
    InvalidPhase,
    UnsupportedRegime,
    KernelTooShort,
    MissingIncrements,
    EmptySample,
    ValueError,
    OSError,
)


def _a_value(args) -> float:
    if getattr(args, "a_critical", False):
        return CRITICAL_A
    if args.a is None:
        raise ValueError("provide --a or --a-critical")
    return float(args.a)


def _cmd_roots(args) -> int:
    a = _a_value(args)
    out = {"a": a, "regime": classify_regime(a).value}
    if abs(a) <= BOUNDARY_ATOL:
        out.update({"v0": None, "kappa0": None, "is_real": None, "multiplicity": None,
                    "residual": None})
    else:
        root = leading_root(a, tol=args.tol)
        out.update(
            {
                "v0": root.v0,
                "kappa0": root.kappa0,
                "is_real": root.is_real,
                "multiplicity": root.multiplicity,
                "residual": root.residual,
            }
        )
    print(json.dumps(out, indent=2))
    return 0


def _cmd_fundsol(args) -> int:
    fs = fundamental_solution(_a_value(args), args.t_max, args.dt)
    print("t,x,y")
    m = round(1.0 / args.dt)
    for j, (xv, yv) in enumerate(zip(fs.x[m:], fs.y)):
        print(f"{j * args.dt!r},{float(xv)!r},{float(yv)!r}")
    return 0


def _emit_path_csv(path: SamplePath, emit_dw: bool) -> None:
    header = "t,x,dw" if emit_dw else "t,x"
    print(header)
    ts = path.times()
    m = path.m
    for i, (t, xv) in enumerate(zip(ts, path.x)):
        row = f"{float(t)!r},{float(xv)!r}"
        if emit_dw:
            k = i - m
            row += f",{float(path.dw[k])!r}" if 0 <= k < len(path.dw) else ","
        print(row)


def _cmd_simulate(args) -> int:
    model = DelayModel(_a_value(args), InitialSegment.constant(args.x0))
    path = simulate_path(model, args.T, args.dt, seed=args.seed, zero_noise=args.zero_noise)
    _emit_path_csv(path, args.emit_dw)
    return 0


def load_path_csv(fname: str) -> SamplePath:
    """Rebuild a path from the frozen ``t,x[,dw]`` schema."""
    with open(fname, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header[:2] != ["t", "x"]:
            raise ValueError(f"unexpected CSV header {header!r}")
        has_dw = len(header) > 2 and header[2] == "dw"
        ts, xs, dws = [], [], []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            if len(parts) < 2 or not parts[0]:
                continue
            ts.append(float(parts[0]))
            xs.append(float(parts[1]))
            if has_dw and len(parts) > 2 and parts[2]:
                dws.append(float(parts[2]))
    t = np.asarray(ts)
    x = np.asarray(xs)
    if len(t) < 3:
        raise ValueError("path CSV needs at least 3 rows")
    steps = np.diff(t)
    dt = float((t[-1] - t[0]) / (len(t) - 1))
    if np.any(np.abs(steps - dt) > 1e-9):
        raise InvalidGrid("path CSV must be on a uniform time grid")
    if abs(t[0] + 1.0) > 1e-9:
        raise InvalidGrid("path CSV must start at t = -1")
    m = round(1.0 / dt)
    n = len(x) - 1 - m
    dw = np.asarray(dws) if has_dw and len(dws) == n else None
    model = DelayModel(float("nan"), InitialSegment.sampled(x[: m + 1]))
    return SamplePath(model=model, dt=dt, T=n * dt, x=x, dw=dw, seed=None)


def _cmd_estimate(args) -> int:
    if args.csv:
        path = load_path_csv(args.csv)
    else:
        if args.seed is None and not args.zero_noise:
            raise ValueError("inline simulation requires --seed (or --zero-noise)")
        model = DelayModel(_a_value(args), InitialSegment.constant(args.x0))
        path = simulate_path(model, args.T, args.dt, seed=args.seed, zero_noise=args.zero_noise)
    est = mle(path)
    print(
        json.dumps(
            {
                "a_hat": est.a_hat,
                "numerator": est.numerator,
                "denominator": est.denominator,
                "T": est.T,
                "dt": est.dt,
            },
            indent=2,
        )
    )
    return 0


def _cmd_limit_sample(args) -> int:
    regime = Regime(args.regime.upper())
    if regime is Regime.LAN:
        j = args.j if args.j is not None else fisher_limit(_a_value(args), rel_tol=1e-6)
        sample = sample_lan_limit(j, args.n, args.seed)
    elif regime is Regime.LAQ_ZERO:
        sample = sample_df_limit(args.n, args.m, args.seed)
    elif regime is Regime.LAQ_CRITICAL:
        sample = sample_critical_limit(args.n, args.m, args.seed)
    elif regime is Regime.LAMN:
        sample = sample_lamn_limit(
            _a_value(args), InitialSegment.constant(args.x0), args.n, args.m_tail, args.seed
        )
    else:
        sample = sample_plamn_limit(
            _a_value(args),
            InitialSegment.constant(args.x0),
            args.d,
            args.n,
            args.m_tail,
            args.seed,
        )
    for v in sample.values:
        print(repr(float(v)))
    return 0


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    if args.out:
        cfg.out = args.out
    report = run_experiment(cfg, jobs=args.jobs)
    print(report.to_json())
    return 0


def _cmd_report_plot(args) -> int:
    with open(args.report, "r", encoding="utf-8") as fh:
        rep = json.load(fh)
    errs = np.sort(np.asarray(rep["scaled_errors"], dtype=float))
    lims = np.sort(np.asarray(rep["limit_values"], dtype=float))
    grid = np.sort(np.concatenate([errs, lims]))
    fe = np.searchsorted(errs, grid, side="right") / len(errs)
    fl = np.searchsorted(lims, grid, side="right") / len(lims)
    print("value,ecdf_scaled,ecdf_limit")
    for v, a, b in zip(grid, fe, fl):
        print(f"{float(v)!r},{float(a)!r},{float(b)!r}")
    return 0


def _add_a_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument("--a", type=float, default=None, help="drift coefficient")
    group.add_argument(
        "--a-critical",
        action="store_true",
        help="use the exact critical drift -pi**2/2",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unidelay",
        description="Uniform-delay SDE: simulation, drift MLE, limit-law Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="leading characteristic root and regime")
    _add_a_flags(p)
    p.add_argument("--tol", type=float, default=1e-10, help="root residual tolerance")
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("fundsol", help="fundamental solution as CSV (t,x,y)")
    _add_a_flags(p)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.set_defaults(func=_cmd_fundsol)

    p = sub.add_parser("simulate", help="simulate one path as CSV (t,x[,dw])")
    _add_a_flags(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.0, help="constant initial segment")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--zero-noise", action="store_true", help="all increments zero")
    p.add_argument("--emit-dw", action="store_true", help="append the increments column")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="drift MLE as JSON")
    p.add_argument("--csv", default=None, help="path CSV produced by `simulate`")
    _add_a_flags(p, required=False)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--zero-noise", action="store_true")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("limit-sample", help="limit-law draws, one value per line")
    p.add_argument(
        "--regime",
        required=True,
        choices=["lan", "laq_zero", "laq_critical", "lamn", "plamn"],
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_a_flags(p, required=False)
    p.add_argument("--j", type=float, default=None, help="information value (lan)")
    p.add_argument("--m", type=int, default=10_000, help="Wiener grid steps (laq regimes)")
    p.add_argument("--m-tail", type=int, default=2000, help="tail quadrature points")
    p.add_argument("--x0", type=float, default=0.0, help="constant initial segment")
    p.add_argument("--d", type=float, default=0.0, help="phase within one period (plamn)")
    p.set_defaults(func=_cmd_limit_sample)

    p = sub.add_parser("experiment", help="Monte Carlo experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (same output)")
    p.add_argument("--out", default=None, help="override the output path prefix")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report-plot", help="CDF table from a report JSON")
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_report_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # the consumer closed the pipe (e.g. `... | head`); not our error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except _USAGE as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
