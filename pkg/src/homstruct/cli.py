"""Command-line entry point: ``homstruct {verify,solve,tables,group}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields
from typing import Sequence

from .exact import MetricCase, parse_rational
from .lie import DiagonalMetric
from .report import (
    TABLE_IDS,
    Config,
    ConfigError,
    Report,
    emit_tables,
    group_point,
    run_suite,
    solve_point,
    suites_for_tables,
)

SEED_ENV = "HOMSTRUCT_SEED"
CASE_CHOICES = [c.value for c in MetricCase] + ["all"]
GROUP_CHOICES = ("expansion", "connection", "pi0", "pi1", "piplus", "doublecover")
GROUP_SUITES = {
    "expansion": "group.expansion",
    "connection": "group.connection",
    "pi0": "group.hopf",
    "pi1": "group.hopf",
    "piplus": "group.hopf",
    "doublecover": "group.hopf",
}


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _split(values: Sequence[str] | None) -> list[str]:
    out: list[str] = []
    for v in values or ():
        out += [x.strip() for x in v.split(",") if x.strip()]
    return out


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help=f"sampling seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "markdown"), help="report format (default json)")
    p.add_argument("-v", "--verbose", action="store_true", help="log suite timings to stderr")


def _sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with Config fields; flags override it")
    p.add_argument("--case", action="append", help="metric case (repeatable or comma separated)")
    p.add_argument("--samples", type=int, help="parameter samples per case (default 8)")
    p.add_argument("--identity-samples", type=int, help="samples for exact identities (default 16)")
    p.add_argument("--points", type=int, help="group points for the group-model suites (default 16)")
    p.add_argument("--perfect-square", action="store_true",
                   help="sample only rational-square parameters")
    p.add_argument("--unsafe-low-samples", action="store_true",
                   help="allow fewer than 16 identity samples")


def _metric_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--lambda", dest="lam", type=_rational, required=required)
    p.add_argument("--mu", type=_rational, required=required)
    p.add_argument("--nu", type=_rational, required=required)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homstruct", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suites")
    _sampling(p)
    p.add_argument("--suite", action="append", help="restrict to these suite ids")
    _common(p)

    p = sub.add_parser("solve", help="solve the structure equations at one metric")
    _metric_flags(p, True)
    _common(p)

    p = sub.add_parser("tables", help="reproduce selected tables")
    _sampling(p)
    p.add_argument("--which", action="append", help=f"tables among {', '.join(TABLE_IDS)}")
    _common(p)

    p = sub.add_parser("group", help="group-model checks")
    _sampling(p)
    _metric_flags(p, False)
    p.add_argument("--t", type=_rational, help="family parameter for a single-metric run")
    p.add_argument("--which", action="append", help=f"checks among {', '.join(GROUP_CHOICES)}")
    _common(p)
    return parser


def _read_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    return data


def _cases(values: list[str]) -> tuple:
    for v in values:
        if v not in CASE_CHOICES:
            raise ConfigError(f"unknown case {v!r}; choose from {', '.join(CASE_CHOICES)}")
    if "all" in values:
        if len(values) > 1:
            raise ConfigError("'all' conflicts with other --case values")
        return tuple(MetricCase)
    if len(set(values)) != len(values):
        raise ConfigError("a metric case was given twice")
    return tuple(MetricCase(v) for v in values)


RATIONAL_FLAGS = ("--lambda", "--mu", "--nu", "--t")


def _attach_values(argv: Sequence[str]) -> list[str]:
    """Glue rational flag values to their flag so "-2/1" is not read as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in RATIONAL_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def parse_config(argv: Sequence[str] | None = None, file: str | None = None) -> tuple[argparse.Namespace, Config | None]:
    """Parse arguments into (namespace, Config); Config is None for the
    single-point modes.  Flags override values from the config file."""
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    values: dict = {}
    path = file or getattr(args, "config", None)
    if path:
        values.update(_read_config_file(path))
    values.setdefault("seed", _default_seed())
    if args.seed is not None:
        values["seed"] = args.seed
    if args.format is not None:
        values["output_format"] = args.format
    if args.out is not None:
        values["output_path"] = args.out
    if args.command == "solve":
        return args, None
    if args.command == "group" and args.lam is not None:
        return args, None
    if args.case:
        values["cases"] = _cases(_split(args.case))
    if args.samples is not None:
        values["samples_per_case"] = args.samples
    if args.identity_samples is not None:
        values["identity_sample_count"] = args.identity_samples
    if args.points is not None:
        values["group_points"] = args.points
    if args.perfect_square:
        values["perfect_square_only"] = True
    if args.unsafe_low_samples:
        values["unsafe_low_samples"] = True
    if args.command == "verify" and args.suite:
        values["suites"] = tuple(_split(args.suite))
    if args.command == "tables":
        tables = tuple(_split(args.which)) or TABLE_IDS
        bad = [t for t in tables if t not in TABLE_IDS]
        if bad:
            raise ConfigError(f"unknown table(s): {', '.join(bad)}")
        values["tables"] = tables
        values["suites"] = suites_for_tables(tables)
    if args.command == "group":
        which = _group_which(args)
        values["suites"] = tuple(sorted({GROUP_SUITES[w] for w in which}))
    for key in ("cases", "suites", "tables"):
        if key in values:
            values[key] = tuple(values[key])
    return args, Config(**values)


def _group_which(args) -> list[str]:
    which = _split(args.which) or list(GROUP_CHOICES)
    bad = [w for w in which if w not in GROUP_CHOICES]
    if bad:
        raise ConfigError(f"unknown group check(s): {', '.join(bad)}")
    return which


def _metric(args) -> DiagonalMetric:
    if args.lam is None or args.mu is None or args.nu is None:
        raise ConfigError("--lambda, --mu and --nu must be given together")
    return DiagonalMetric.checked(args.lam, args.mu, args.nu)


def _filter_group(report: Report, which: list[str]) -> Report:
    maps = set(which)
    report.suites = [
        r for r in report.suites
        if r["id"] != "group.hopf" or r["details"].get("map") in maps
    ]
    return report


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args, cfg = parse_config(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(message)s", stream=sys.stderr)
        seed = cfg.seed if cfg else (args.seed if args.seed is not None else _default_seed())
        fmt = cfg.output_format if cfg else (args.format or "json")
        if args.command == "solve":
            report = solve_point(_metric(args), seed)
        elif args.command == "group" and cfg is None:
            points = args.points if args.points is not None else 16
            report = group_point(_metric(args), args.t, _group_which(args), points, seed)
        else:
            report = run_suite(cfg)
            if args.command == "group":
                report = _filter_group(report, _group_which(args))
        text = emit_tables(report, fmt, args.out)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"homstruct: error: {exc}", file=sys.stderr)
        return 2
    if args.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        print(f"{report.status}: report written to {args.out}", file=sys.stderr)
    return 0 if report.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
