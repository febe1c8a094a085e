"""Command-line entry point: run one SNR sweep and write CSV or JSON.

Exit status is 0 on success, 1 for configuration errors and 2 for failures
while running or writing results.
"""
from __future__ import annotations

import argparse
import sys

import yaml

from .errors import ConfigError
from .harness import apply_overrides, emit, load_config, run_sweep, spec_from_dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="riscsm-sweep", description="Monte-Carlo and analytic SNR sweeps for RIS-CSM.")
    p.add_argument("--config", help="YAML file with system/channel/estimation/baseline/sweep sections")
    p.add_argument("--scheme", choices=["ris-csm", "ris-mimo", "ris-gsm", "ris-cim"])
    p.add_argument("--metric")
    p.add_argument("--snr", metavar="START:STOP:STEP")
    p.add_argument("--axis", choices=["snr", "ebno"])
    p.add_argument("--trials", type=int)
    p.add_argument("--min-errors", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.FIELD=VALUE",
        help="override any configuration field, e.g. --set system.N=128",
    )
    return p


def _overrides(args) -> dict:
    out = {}
    for flag, key in [
        ("scheme", "sweep.scheme"),
        ("metric", "sweep.metric"),
        ("snr", "sweep.snr"),
        ("axis", "sweep.axis"),
        ("trials", "sweep.trials"),
        ("min_errors", "sweep.min_errors"),
        ("seed", "sweep.seed"),
        ("threads", "sweep.threads"),
    ]:
        if getattr(args, flag) is not None:
            out[key] = getattr(args, flag)
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError("--set", f"expected SECTION.FIELD=VALUE, got {item!r}")
        out[key] = yaml.safe_load(value)
    return out


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        overrides = _overrides(args)
        if args.config:
            spec = load_config(args.config, overrides)
        else:
            spec = spec_from_dict(apply_overrides({}, overrides))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        result = run_sweep(spec)
        if args.out:
            emit(result, args.format, args.out)
        else:
            emit(result, args.format, sys.stdout)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - any runtime failure maps to exit status 2
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
