"""tusv command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from tusv import __version__
from tusv.cli.commands import run
from tusv.config import get_settings
from tusv.core.errors import AnchorError, WitnessContradiction
from tusv.schemas.run import RunConfig

logger = logging.getLogger(__name__)

EXIT_MISMATCH = 1
EXIT_USAGE = 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", "-N", type=int, help="Upper end N of the checked range [0, N]")
    common.add_argument("--jobs", "-j", type=int, help="Worker processes (default: CPU count)")
    common.add_argument("--cache-dir", type=Path, help="Mask cache directory")
    common.add_argument("--no-cache", action="store_true", help="Neither read nor write masks")
    common.add_argument("--output", "-o", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", type=Path, help="Write the report here instead of stdout")
    common.add_argument(
        "--strict", action="store_true", help="Reject gp(c,d) with d | c; fail fast on witnesses"
    )
    common.add_argument("--log-level", help="Logging level (default: TUSV_LOG_LEVEL or INFO)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="tusv", description="Representation sets of ternary sums of polygonal-type numbers"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="Evaluate one term at z")
    p.add_argument("term", help='Term, e.g. "3*gp(7,2)" or "1*p(5)@int"')
    p.add_argument("z", type=int)

    p = sub.add_parser("sieve", parents=[common], help="Summarize the value mask of a form")
    p.add_argument("--form", "-f", required=True)

    p = sub.add_parser("witness", parents=[common], help="List the values a form misses")
    p.add_argument("--form", "-f", required=True)
    p.add_argument("--check", type=int, help="Exhaustively decide this single value instead")

    p = sub.add_parser("classify", parents=[common], help="Survey a parameter family")
    p.add_argument("--family", choices=("I", "II", "III", "tri"))
    p.add_argument("--expect", choices=("1.1", "1.2", "1.3i", "1.3ii", "liouville"))
    for name in ("a", "b", "c", "d"):
        p.add_argument(f"--cap-{name}", type=int, dest=f"cap_{name}")
    p.add_argument("--witness-bound", "-W", type=int)

    p = sub.add_parser("verify", parents=[common], help="Run identity and data suites")
    p.add_argument(
        "--suite",
        choices=(
            "euler",
            "gauss-legendre",
            "reductions",
            "tables",
            "s07",
            "thm14",
            "witnesses",
            "anchors",
            "all",
        ),
        default="all",
    )

    p = sub.add_parser("conjectures", parents=[common], help="Bounded universality scans")
    p.add_argument("--which", choices=("remaining-1.1", "1.2", "all"), default="all")

    p = sub.add_parser("cache", parents=[common], help="Inspect or manage the mask cache")
    p.add_argument("action", choices=("info", "build", "clear"))
    p.add_argument("--form", "-f")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Overlay parsed flags on Settings."""
    settings = get_settings()
    caps = {
        name: getattr(args, f"cap_{name}")
        for name in ("a", "b", "c", "d")
        if getattr(args, f"cap_{name}", None) is not None
    }
    return RunConfig(
        command=args.command,
        bound=args.bound,
        jobs=settings.jobs if args.jobs is None else args.jobs,
        cache_dir=args.cache_dir or settings.cache_dir,
        cache_enabled=settings.cache_enabled and not args.no_cache,
        output=args.output,
        out=args.out,
        strict=args.strict,
        max_bound=settings.max_bound,
        witness_stream_threshold=settings.witness_stream_threshold,
        term=getattr(args, "term", None),
        z=getattr(args, "z", None),
        form=getattr(args, "form", None),
        check=getattr(args, "check", None),
        family=getattr(args, "family", None),
        expect=getattr(args, "expect", None),
        caps=caps,
        witness_bound=getattr(args, "witness_bound", None),
        suite=getattr(args, "suite", "all"),
        which=getattr(args, "which", "all"),
        scan_bound=settings.scan_bound,
        parametric_x_max=settings.parametric_x_max,
        action=getattr(args, "action", None),
    )


def _emit(chunks, out: Optional[Path]) -> None:
    if out is None:
        for chunk in chunks:
            sys.stdout.write(chunk)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8") as handle:
        for chunk in chunks:
            handle.write(chunk)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, run, print. Returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = get_settings()
    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        config = config_from_args(args)
        result = run(config, settings.list_witness_bound)
        _emit(result.chunks, config.out)
    except (WitnessContradiction, AnchorError) as e:
        logger.error(f"Mismatch: {e}")
        return EXIT_MISMATCH
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
