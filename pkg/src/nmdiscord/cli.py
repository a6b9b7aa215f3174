"""Command-line front end.

    nmdiscord simulate --env common --alpha2 0.3333333 --lambda 0.1 --t-max 50 --dt 0.005 --out common_a13.csv
    nmdiscord sweep --env common --param alpha2 --values 0 0.1 0.2 0.5 --lambda 0.1 --out-dir sweep_alpha/
    nmdiscord validate
    nmdiscord events common_a13.csv

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from nmdiscord.analysis import (
    BIRTH_THRESHOLD,
    CONCURRENCE_TOL,
    DISCORD_ZERO_TOL,
    detect_events,
)
from nmdiscord.errors import DomainError, IntegrationError, InvalidStateError
from nmdiscord.runner import ConfigError, RunConfig, read_records, run_trajectory, with_value, write_events, write_result

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _add_run_flags(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("--env", choices=["independent", "common"], required=True)
    p.add_argument("--alpha2", type=float, required=not sweep, help="population of |00> in the initial state")
    p.add_argument("--lambda", dest="lam", type=float, required=not sweep, help="reservoir width in units of gamma0")
    p.add_argument("--t-max", type=float, default=50.0, help="horizon in units of 1/gamma0 (default 50)")
    p.add_argument("--dt", type=float, default=None, help="step in units of 1/gamma0 (default: 0.01 independent, 0.005 common)")
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default=None, help="default: from the output suffix, else csv")
    p.add_argument("--events", action="store_true", help="run event detection and attach the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmdiscord", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one trajectory")
    _add_run_flags(sim, sweep=False)
    sim.add_argument("--out", required=True)

    sw = sub.add_parser("sweep", help="run one trajectory per parameter value")
    _add_run_flags(sw, sweep=True)
    sw.add_argument("--param", choices=["alpha2", "lambda"], required=True)
    sw.add_argument("--values", type=float, nargs="*", default=[])
    sw.add_argument("--out-dir", required=True)
    sw.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sw.add_argument("--seed", type=int, default=0, help="recorded in the manifest")

    val = sub.add_parser("validate", help="run the oracle suites")
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--samples", type=int, default=500, help="random X states for the discord cross-check")

    ev = sub.add_parser("events", help="re-run event detection on an existing trajectory file")
    ev.add_argument("input")
    ev.add_argument("--out", default=None, help="write the report here instead of stdout")
    ev.add_argument("--zero-tol", type=float, default=DISCORD_ZERO_TOL)
    ev.add_argument("--concurrence-tol", type=float, default=CONCURRENCE_TOL)
    ev.add_argument("--birth-threshold", type=float, default=BIRTH_THRESHOLD)
    return parser


def _fmt_from(args, out: str | None) -> str:
    if args.format:
        return args.format
    return "json" if out and out.lower().endswith(".json") else "csv"


def _config_from(args, alpha2, lam, out) -> RunConfig:
    return RunConfig(
        env=args.env,
        alpha2=alpha2,
        lambda_over_gamma0=lam,
        t_max_gamma0=args.t_max,
        dt_gamma0=args.dt,
        output_path=out,
        format=_fmt_from(args, out),
        events=args.events,
        record_every=args.record_every,
    )


def _simulate_one(cfg: RunConfig) -> str:
    result = run_trajectory(cfg)
    write_result(result, Path(cfg.output_path))
    return cfg.output_path


def cmd_simulate(args) -> int:
    cfg = _config_from(args, args.alpha2, args.lam, args.out)
    _simulate_one(cfg)
    print(f"wrote {cfg.output_path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    values = list(args.values)
    if len(set(values)) != len(values):
        print("error: duplicate sweep values", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if (args.param == "alpha2" and args.lam is None) or (args.param == "lambda" and args.alpha2 is None):
        print("error: the parameter that is not swept must be given", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out_dir)
    fmt = args.format or "csv"
    # the swept field is overwritten per value; any valid placeholder works
    base = _config_from(
        args,
        args.alpha2 if args.alpha2 is not None else 0.5,
        args.lam if args.lam is not None else 1.0,
        None,
    )
    base = replace(base, format=fmt)
    configs = [
        with_value(base, args.param, v, str(out_dir / f"{args.param}_{v:.12g}.{fmt}")) for v in values
    ]
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.jobs == 1 or len(configs) <= 1:
        for c in configs:
            _simulate_one(c)
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            list(pool.map(_simulate_one, configs))
    manifest = {
        "param": args.param,
        "seed": args.seed,
        "base_config": {k: v for k, v in base.echo().items() if k != "output_path"},
        "entries": [{"value": v, "file": Path(c.output_path).name} for v, c in zip(values, configs)],
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    print(f"wrote {len(configs)} trajectories to {out_dir}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from nmdiscord.validation import run_all

    results = run_all(seed=args.seed, n_samples=args.samples)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def cmd_events(args) -> int:
    try:
        records = read_records(Path(args.input))
    except (OSError, KeyError, ValueError) as exc:
        if isinstance(exc, InvalidStateError):
            raise
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = detect_events(records, args.zero_tol, args.concurrence_tol, args.birth_threshold)
    if args.out:
        write_events(report, Path(args.out))
    else:
        json.dump(report.to_dict(), sys.stdout, indent=1)
        sys.stdout.write("\n")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "validate": cmd_validate, "events": cmd_events}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (IntegrationError, InvalidStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
