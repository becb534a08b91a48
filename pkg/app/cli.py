"""
Command-line front end.

    tuav-cbf run <config.toml>     run one scenario, emit its log and report
    tuav-cbf suite <manifest.toml> run the canonical (or batch) suite
    tuav-cbf check <log.csv>       re-verify invariants on an emitted log

Exit codes: 0 pass, 1 safety-check failure, 2 config error, 3 runtime fault.
"""

import argparse
import logging
import random
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from app.core import settings
from app.core.exceptions import ConfigError, ExportError, SimulationFault
from app.models import EmitFormat, RunManifest
from app.services.config_loader import apply_overrides, dump_config, load_config, load_manifest
from app.services.export import read_trajectory_csv, write_trajectory
from app.services.simulation import run_scenario, verify_log
from app.services.suite import run_suite
from app.version import __version__

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_SAFETY = 1
EXIT_CONFIG = 2
EXIT_FAULT = 3


class RngTouchedError(SimulationFault):
    """A random number generator was used during a ``--seedless`` run."""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output directory (default: {settings.OUTPUT_DIR})")
    common.add_argument(
        "--format",
        choices=[f.value for f in EmitFormat],
        default=None,
        help=f"trajectory format (default: {settings.DEFAULT_FORMAT})",
    )
    common.add_argument("--no-filter", action="store_true", help="disable the CBF-QP filter")
    common.add_argument(
        "--seedless", action="store_true", help="fail if any random generator is touched"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="more report detail and DEBUG logs"
    )

    parser = argparse.ArgumentParser(
        prog="tuav-cbf", description=settings.APP_DESCRIPTION
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run one scenario")
    run.add_argument("config", help="scenario TOML file")

    suite = sub.add_parser("suite", parents=[common], help="run a scenario suite")
    suite.add_argument(
        "manifest", nargs="?", help="suite manifest TOML file (canonical suite when omitted)"
    )

    check = sub.add_parser("check", parents=[common], help="re-verify an emitted CSV log")
    check.add_argument("csv", help="trajectory CSV")
    check.add_argument("--config", help="scenario TOML the log was produced from")
    return parser


def configure_logging(verbose: int) -> None:
    level = logging.DEBUG if verbose >= 2 else getattr(logging, settings.LOG_LEVEL, logging.INFO)
    logging.basicConfig(format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _verbosity(args: argparse.Namespace) -> int:
    return min(1 + args.verbose, 2)


def _formats(args: argparse.Namespace) -> list[EmitFormat] | None:
    return [EmitFormat(args.format)] if args.format else None


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.no_filter:
        config = apply_overrides(config, {"filter.enabled": False})
    manifest = RunManifest(
        config_path=args.config,
        output_dir=args.out or settings.OUTPUT_DIR,
        formats=_formats(args) or [EmitFormat(settings.DEFAULT_FORMAT)],
        verbosity=_verbosity(args),
        force_no_filter=args.no_filter,
    )

    log = run_scenario(config)
    write_trajectory(log, manifest)
    config_copy = Path(manifest.output_dir) / f"{config.name}.toml"
    try:
        config_copy.write_text(dump_config(config), encoding="utf-8")
    except OSError as exc:
        raise ExportError(str(config_copy), exc.strerror or str(exc)) from exc

    report = verify_log(log, config)
    print(report.render(manifest.verbosity))
    return EXIT_OK if report.safety_passed else EXIT_SAFETY


def cmd_suite(args: argparse.Namespace) -> int:
    cli_fields = {
        "output_dir": args.out,
        "formats": _formats(args),
        "verbosity": _verbosity(args) if args.verbose else None,
        "force_no_filter": args.no_filter or None,
    }
    if args.manifest:
        manifest = load_manifest(args.manifest, **cli_fields)
    else:
        defaults: dict[str, Any] = {
            "output_dir": settings.OUTPUT_DIR,
            "formats": [EmitFormat(settings.DEFAULT_FORMAT)],
        }
        defaults.update({k: v for k, v in cli_fields.items() if v is not None})
        manifest = RunManifest(**defaults)
    suite = run_suite(manifest)
    for entry in suite.entries:
        if entry.report is not None:
            print(entry.report.render(manifest.verbosity))
        if entry.error is not None:
            print(f"[ABORTED] {entry.name}: {entry.error}")

    if not suite.safe:
        return EXIT_SAFETY
    if suite.aborted:
        return EXIT_FAULT
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else None
    log = read_trajectory_csv(args.csv, config)
    report = verify_log(log, config)
    print(report.render(_verbosity(args)))
    return EXIT_OK if report.safety_passed else EXIT_SAFETY


COMMANDS = {"run": cmd_run, "suite": cmd_suite, "check": cmd_check}


def _rng_snapshot() -> tuple[object, tuple]:
    return random.getstate(), np.random.get_state(legacy=True)


def _rng_unchanged(before: tuple[object, tuple]) -> bool:
    py_state, np_state = _rng_snapshot()
    if py_state != before[0]:
        return False
    return all(
        np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
        for a, b in zip(np_state, before[1], strict=True)
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    snapshot = _rng_snapshot() if args.seedless else None
    try:
        status = COMMANDS[args.command](args)
        if snapshot is not None and not _rng_unchanged(snapshot):
            raise RngTouchedError("random generator state changed during a --seedless run")
    except ConfigError as exc:
        logger.error("Configuration error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationFault, ExportError) as exc:
        logger.error("Runtime fault: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAULT
    return status


if __name__ == "__main__":
    sys.exit(main())
