"""Command-line entry point.

    wishart-appt moments --d 64 --s 256 --p 2,3,4 --trials 2000 --seed 1
    wishart-appt extremal --d 300 --s 30000 --trials 50 --seed 1
    wishart-appt appt-scan --d1 2 --d2 128 --s-grid 2048,5120 --trials 100 --seed 1
    wishart-appt spectrum-containment --d 100 --s 10000 --eps 0.2 --trials 200 --seed 1
    wishart-appt constants
    wishart-appt verdict --d1 2 --d2 3 --spectrum 0.5,0.2,0.1,0.1,0.05,0.05

Reports go to stdout (or --out) as JSON, or as one-row-per-trial CSV with
--format csv. Exit codes: 0 success, 2 configuration error, 3 numerical
failure.
"""
from __future__ import annotations

import argparse
import sys

from . import appt, experiments
from .experiments import (
    ApptScanConfig,
    ConfigError,
    ConstantsConfig,
    ContainmentConfig,
    ExtremalConfig,
    MomentsConfig,
)
from .linalg import LinAlgFailure

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wishart-appt",
        description="Monte Carlo and exact computations for centered Wishart "
        "moments and the absolute-PPT threshold.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")

    p = sub.add_parser("moments", help="exact vs Monte Carlo centered Wishart moments")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=_int_list, default=(2, 3, 4), help="comma-separated moment orders")
    p.add_argument("--trials", type=int, default=2000)
    add_common(p)

    p = sub.add_parser("extremal", help="extremal eigenvalues of the centered matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    add_common(p)

    p = sub.add_parser("appt-scan", help="absolute-PPT verdict frequencies over an s-grid")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--s-grid", type=_int_list, required=True, help="comma-separated s values")
    p.add_argument("--trials", type=int, default=100)
    add_common(p)

    p = sub.add_parser(
        "spectrum-containment", help="induced-state spectrum containment frequency"
    )
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--trials", type=int, default=200)
    add_common(p)

    p = sub.add_parser("constants", help="dump threshold constants and scales")
    p.add_argument("--p", type=_int_list, default=(2, 3, 4, 5, 6, 7, 8))
    p.add_argument("--tau-grid", type=_float_list, default=None)
    p.add_argument("--d1", type=int, default=None, help="add one (d1, d2) shape row")
    p.add_argument("--d2", type=int, default=None)
    add_common(p)

    p = sub.add_parser("verdict", help="absolute-PPT verdict for one explicit spectrum")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument(
        "--spectrum", type=_float_list, required=True, help="comma-separated eigenvalues"
    )
    add_common(p)

    return parser


def _dispatch(args: argparse.Namespace) -> dict:
    if args.command == "moments":
        return experiments.run_moments(
            MomentsConfig(d=args.d, s=args.s, p_list=args.p, trials=args.trials, seed=args.seed)
        )
    if args.command == "extremal":
        return experiments.run_extremal(
            ExtremalConfig(d=args.d, s=args.s, trials=args.trials, seed=args.seed)
        )
    if args.command == "appt-scan":
        return experiments.run_appt_scan(
            ApptScanConfig(
                d1=args.d1, d2=args.d2, s_grid=args.s_grid, trials=args.trials, seed=args.seed
            )
        )
    if args.command == "spectrum-containment":
        return experiments.run_spectrum_containment(
            ContainmentConfig(
                d=args.d, s=args.s, eps=args.eps, trials=args.trials, seed=args.seed
            )
        )
    if args.command == "constants":
        kwargs = {"p_list": args.p}
        if args.tau_grid is not None:
            kwargs["tau_grid"] = args.tau_grid
        if (args.d1 is None) != (args.d2 is None):
            raise ConfigError("--d1 and --d2 must be given together")
        if args.d1 is not None:
            kwargs["shapes"] = ConstantsConfig().shapes + ((args.d1, args.d2),)
        return experiments.run_constants(ConstantsConfig(**kwargs))
    if args.command == "verdict":
        try:
            verdict = appt.appt_verdict(args.spectrum, args.d1, args.d2)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return verdict.to_json_dict()
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _dispatch(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    except LinAlgFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if args.format == "csv":
        if "trials" not in report:
            print("error: --format csv requires a per-trial report", file=sys.stderr)
            return EXIT_CONFIG
        text = experiments.report_to_csv(report)
    else:
        text = experiments.report_to_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
