"""Command line front end for the study harness.

Exit codes: 0 when the study's acceptance check passes, 1 when it fails,
2 for configuration problems, 3 for resolution or parameter problems.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import (
    BandCoverageError,
    ConfigError,
    DimensionError,
    ParameterError,
    ResolutionError,
    SlowDecayError,
)
from .experiments import (
    ExperimentConfig,
    _setup,
    _tail_tv,
    build_measure,
    config_from_dict,
    report_csv,
    run_study,
    write_csv,
)
from .measures import fourier_coefficients
from .metrics import NormRequest, g_norm, truncation_bar

_SUBCOMMANDS = {
    "rate": "rate",
    "converse": "converse",
    "noise": "noise",
    "highpass": "highpass",
    "width": "width_constant",
    "dipole": "dipole",
    "norm": None,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakstar",
        description="Band-limited measure recovery studies on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} study" if name != "norm" else "one-shot norm of a measure literal")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--grid", type=int, help="grid nodes per axis")
        p.add_argument("--beta", type=float, help="kernel order")
        p.add_argument("--p", help="norm exponent, a float or 'inf'")
        p.add_argument("--n-min", type=int, dest="n_min", help="first level")
        p.add_argument("--n-max", type=int, dest="n_max", help="last level")
        p.add_argument(
            "--allow-slow-decay",
            action="store_true",
            help="opt into the empirical truncation policy for beta <= q",
        )
    return parser


def _load_raw(args) -> dict:
    if args.config:
        with open(args.config) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"cannot parse {args.config}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        return raw
    return {}


def _apply_flags(raw: dict, args) -> dict:
    raw = json.loads(json.dumps(raw))  # deep copy, keeps plain types
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if args.grid is not None:
        raw.setdefault("system", {})["grid"] = args.grid
    if args.beta is not None:
        raw.setdefault("kernel", {})["beta"] = args.beta
    if args.allow_slow_decay:
        raw.setdefault("kernel", {})["allow_slow_decay"] = True
    if args.p is not None:
        raw["p"] = args.p
    if args.n_min is not None or args.n_max is not None:
        lo, hi = raw.get("n_range", (None, None))
        lo = args.n_min if args.n_min is not None else lo
        hi = args.n_max if args.n_max is not None else hi
        if lo is None or hi is None:
            raise ConfigError("both ends of n_range are needed; pass --n-min and --n-max")
        raw["n_range"] = [lo, hi]
    if args.out is not None:
        raw["output_path"] = args.out
    return raw


def _run_one_shot_norm(raw: dict, args) -> int:
    if "measure_spec" not in raw or raw["measure_spec"] is None:
        raise ConfigError("the norm command needs a measure_spec in the config")
    raw.setdefault("study", "rate")  # reuse the rate validation path
    raw.setdefault("n_range", [0, 0])
    config = config_from_dict(raw)
    system, grid, kernel = _setup(config)
    mu = build_measure(config.measure_spec, system, grid)
    value = g_norm(
        fourier_coefficients(mu, kernel.lambda_truncation),
        NormRequest(config.p, kernel),
        grid,
    )
    bar = truncation_bar(kernel, _tail_tv(mu, kernel))
    line = f"g_norm={value:.12g} tail_bar={bar:.12g}"
    print(line)
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write("g_norm,tail_bar\n")
            fh.write(f"{value:.12g},{bar:.12g}\n")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        raw = _apply_flags(_load_raw(args), args)
        if args.command == "norm":
            return _run_one_shot_norm(raw, args)
        study = _SUBCOMMANDS[args.command]
        if "study" in raw and raw["study"] != study:
            raise ConfigError(
                f"config file says study={raw['study']!r} but the "
                f"{args.command} command was invoked"
            )
        raw["study"] = study
        config = config_from_dict(raw)
        report = run_study(config)
        if config.output_path:
            write_csv(report, config.output_path)
            summary = report_csv(report).strip().splitlines()[-1]
            print(f"wrote {config.output_path}")
            print(summary)
        else:
            sys.stdout.write(report_csv(report))
        return 0 if report.passed else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (
        ResolutionError,
        ParameterError,
        DimensionError,
        SlowDecayError,
        BandCoverageError,
    ) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
