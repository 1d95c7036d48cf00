"""``debate-lab`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigError, DebateLabError
from .scenarios import list_scenarios, rows_to_csv, rows_to_jsonl, run_scenario

log = logging.getLogger("debate_lab")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="debate-lab", description="Exact feature-debate experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list builtin scenarios")
    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--scenario", help="builtin name; may also come from the config's 'scenario' key")
    run.add_argument("--config", type=Path, help="JSON file with parameter overrides")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", type=Path, help="output file (default: stdout)")
    run.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    run.add_argument("--timing", action="store_true", help="fill runtime_ms (makes output non-reproducible)")
    run.add_argument("-v", "--verbose", action="store_true")
    return p


def _load_config(path: Path) -> dict:
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    return data


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for name, desc in list_scenarios():
            print(f"{name:<20} {desc}")
        return EXIT_OK

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        overrides = _load_config(args.config) if args.config else {}
        name = args.scenario or overrides.pop("scenario", None)
        overrides.pop("scenario", None)
        if not name:
            raise ConfigError("scenario", "no scenario given")
        seed = args.seed if args.seed is not None else overrides.pop("seed", 0)
        overrides.pop("seed", None)
        rows = run_scenario(name, overrides, seed=seed, timing=args.timing)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DebateLabError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    text = rows_to_csv(rows) if args.format == "csv" else rows_to_jsonl(rows)
    if args.out:
        args.out.write_text(text)
        log.info("wrote %d rows to %s", len(rows), args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
