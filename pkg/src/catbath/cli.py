"""Command line entry point: ``catbath run`` and ``catbath validate``.

Exit codes: 0 on success, 2 when the config does not validate, 1 on any
runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .output import emit_plot_script, write_csv
from .scenarios import run_scenario

__all__ = ["run", "main"]

log = logging.getLogger("catbath")

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def run(config: RunConfig, out_dir=".") -> list:
    """Run one scenario; write a CSV and a gnuplot script per table.

    Returns the written paths.
    """
    out = Path(out_dir)
    if not out.is_dir():
        raise FileNotFoundError(f"output directory {out} does not exist")
    paths = []
    for result in run_scenario(config):
        csv = write_csv(result, out, config.output_prefix)
        paths += [csv, emit_plot_script(result, csv)]
    return paths


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="catbath", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario and write CSV tables")
    r.add_argument("--config", required=True, type=Path)
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--out", type=Path, default=Path("."), help="existing output directory")
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("--config", required=True, type=Path)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "run" and args.seed is not None:
            if args.seed < 0:
                raise ConfigError([("--seed", "must be non-negative")])
            cfg = cfg.with_seed(args.seed)
    except ConfigError as exc:
        for path, msg in exc.errors:
            print(f"{args.config}: {path}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.command == "validate":
        print(f"{args.config}: ok ({cfg.scenario})")
        return EXIT_OK
    try:
        for path in run(cfg, args.out):
            log.info("wrote %s", path)
    except Exception as exc:  # any failure past validation is a runtime error
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
