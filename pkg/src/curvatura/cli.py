"""Command-line entry point: ``curvatura <command> [options]``."""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import COMMANDS, RunConfig, load_run_config, merge_payloads, parse_int_list, parse_overrides
from .errors import CurvaturaError, UsageError
from .interfaces import ReportWriter
from .parsers import parser_for_path
from .reports import CsvReportWriter, JsonReportWriter, render_json
from .runner import EXIT_FAILED, EXIT_OK, EXIT_USAGE, CheckRunner
from .zoo import zoo

logger = logging.getLogger(__name__)

LIST_ZOO = "list-zoo"
_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

_HELP = {
    "invariants": "higher-order mean curvatures by two routes, intrinsic relation, zoo references",
    "el-check": "general Euler-Lagrange operator against the space-form and CP^N closed forms",
    "first-variation": "finite-difference derivative of the total mean curvature vs the operator",
    "tube": "tube volumes from the totals, with the numeric oracle in Euclidean space",
    "austere": "austerity of the shape operators and the tubular-minimality conditions",
    "cp-check": "Kahler identities of complex submanifolds of CP^N",
    "report-all": "every check that applies to the manifold",
}


def _parameter(text: str) -> Dict[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return {key.strip(): value}


def _radii(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from e


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifold", help="zoo manifold name (see list-zoo)")
    parser.add_argument("--param", action="append", type=_parameter, default=[], metavar="KEY=VALUE",
                        help="manifold parameter, repeatable; values are parsed as JSON when possible")
    parser.add_argument("--config", type=Path, help="TOML or JSON run configuration")
    parser.add_argument("--p", help="orders p as '0,1,2' or '0-2' (default: 0..n/2)")
    parser.add_argument("--resolution", type=int, help="quadrature nodes per parameter axis")
    parser.add_argument("--variation-resolution", type=int,
                        help="quadrature nodes per axis for first-variation meshes")
    parser.add_argument("--seed", type=int, help="seed for deformation fields and normal samples")
    parser.add_argument("--fields", type=int, help="number of seeded deformation fields")
    parser.add_argument("--radii", type=_radii, help="comma-separated tube radii")
    parser.add_argument("--out", type=Path, help="report path (default: JSON on stdout)")
    parser.add_argument("--format", choices=("json", "csv"), help="report format")
    parser.add_argument("--tol-overrides", nargs="+", default=[], metavar="KEY=VALUE",
                        help="tolerance overrides, e.g. el=1e-6 cp=1e-4")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvatura",
        description="Higher-order mean curvatures, Euler-Lagrange operators and tube volumes of submanifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in COMMANDS:
        _add_run_options(sub.add_parser(command, help=_HELP[command]))
    listing = sub.add_parser(LIST_ZOO, help="describe every manifold in the zoo")
    listing.add_argument("--out", type=Path, help="write the table here instead of stdout")
    listing.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Flags override the configuration file, which overrides the defaults."""
    parameters: Dict[str, Any] = {}
    for item in args.param:
        parameters.update(item)
    manifold: Optional[Dict[str, Any]] = None
    if args.manifold is not None:
        manifold = {"name": args.manifold, "parameters": parameters}
    elif parameters:
        manifold = {"parameters": parameters}
    tolerances = parse_overrides(args.tol_overrides)
    overrides = {
        "command": args.command,
        "manifold": manifold,
        "p": parse_int_list(args.p) if args.p is not None else None,
        "resolution": args.resolution,
        "variation_resolution": args.variation_resolution,
        "seed": args.seed,
        "fields": args.fields,
        "radii": args.radii,
        "out": str(args.out) if args.out is not None else None,
        "format": args.format,
        "tolerances": tolerances or None,
    }
    if args.config is None:
        if args.manifold is None:
            raise UsageError("Give a manifold with --manifold or a configuration file with --config")
        return load_run_config(merge_payloads({}, overrides))
    parser = parser_for_path(args.config)
    if args.manifold is not None:
        payload = {key: value for key, value in parser.payload.items() if key != "manifold"}
        return load_run_config(merge_payloads(payload, overrides))
    return parser.initialize(overrides)


def writer_for(config: RunConfig) -> ReportWriter:
    if config.format == "csv":
        return CsvReportWriter(config.out)
    return JsonReportWriter(config.out)


def list_zoo(out: Optional[Path] = None) -> int:
    table = [zoo.get(name).describe() for name in zoo.names()]
    text = render_json(table)
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text + "\n", encoding="utf-8")
        except Exception as e:
            raise RuntimeError(f"Failed to write zoo table {str(out)!r}: {e}") from e
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(
        level=_LOG_LEVELS[min(args.verbose, len(_LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == LIST_ZOO:
            return list_zoo(args.out)
        config = config_from_args(args)
        _, code = asyncio.run(CheckRunner(writer=writer_for(config)).run(config))
        return code
    except UsageError as e:
        logger.error("%s", e)
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"curvatura: error: {e}\n")
        return EXIT_USAGE
    except (CurvaturaError, RuntimeError) as e:
        logger.error("%s failed: %s", args.command, e)
        sys.stderr.write(f"curvatura: {type(e).__name__}: {e}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
