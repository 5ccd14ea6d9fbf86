"""Command line front end: ``rmtlab <experiment> --config PATH [overrides]``.

Exit codes: 0 success, 2 configuration/validation error, 3 when --assert is
passed and the experiment's summary check fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import EXPERIMENTS, ConfigError, config_from_dict, load_config, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtlab", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file (flags below override it)")
        p.add_argument("--seed", type=int, help="base seed (64-bit)")
        p.add_argument("--trials", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--out", help="output directory")
        p.add_argument("--label", help="output subdirectory label")
        p.add_argument(
            "--assert",
            dest="assert_ok",
            action="store_true",
            help="exit 3 unless the experiment's summary check passes",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
            if cfg.experiment != args.experiment:
                raise ConfigError(
                    f"config is for {cfg.experiment!r}, requested {args.experiment!r}"
                )
        else:
            cfg = config_from_dict({"experiment": args.experiment})
        overrides = {
            "base_seed": args.seed,
            "trials": args.trials,
            "n": args.n,
            "p": args.p,
            "workers": args.workers,
            "out_dir": args.out,
            "label": args.label,
        }
        raw = cfg.to_dict()
        raw.update({k: v for k, v in overrides.items() if v is not None})
        cfg = config_from_dict(raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = run_experiment(cfg)
    print(json.dumps(report.summary, indent=2, sort_keys=True))
    if report.out_path is not None:
        print(f"outputs: {report.out_path}")
    if args.assert_ok and not report.summary.get("ok", False):
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
