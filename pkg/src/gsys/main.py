"""Top-level CLI entrypoint dispatcher."""

from __future__ import annotations

import argparse
import json
import logging
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import TypeVar

from rich.logging import RichHandler

from .commands import register_builtin_commands
from .config import Settings
from .core import Workbench
from .errors import EXIT_OK, CapExceeded, GSysError, TheoremViolation, ValidationError, exit_code_for
from .explorer import export_dot
from .matrix import ExchangeMatrix
from .notation import parse_arc, parse_arcs, parse_index_sequence, parse_index_set, parse_triangulation, read_matrix
from .render import make_console, render
from .surface import Arc, Polygon, Triangulation

logger = logging.getLogger("gsys")

T = TypeVar("T")


def _flag(flag: str, parse: Callable[..., T], *args: object) -> T:
    """Run a parser, prefixing validation failures with the flag that carried the input."""
    try:
        return parse(*args)
    except ValidationError as exc:
        raise ValidationError(f"{flag}: {exc}") from exc


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("-v", "--verbose", action="store_true", help="log debug traces to stderr")
    common.add_argument("--max-nodes", type=int, help="enumeration node cap")
    common.add_argument("--max-depth", type=int, help="enumeration depth cap")
    common.add_argument("--seed", type=int, help="seed for random evaluation points")
    return common


def _matrix_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--b", help="exchange matrix as JSON rows, e.g. [[0,1],[-1,0]]")
    source.add_argument("--file", help="file holding the exchange matrix as JSON rows")


def _polygon_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, required=True, help="number of polygon vertices")
    parser.add_argument("--tri", required=True, help="triangulation diagonals, e.g. 0-2,2-4,0-4")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="gsys", description="Exact cluster-algebra combinatorics workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", parents=[common], help="seeds along a mutation sequence")
    _matrix_options(trace)
    trace.add_argument("--seq", default="", help="1-based mutation sequence, e.g. 2,3,1,2")
    trace.add_argument("--cluster", action="store_true", help="also print Laurent clusters")

    complete = sub.add_parser("complete", parents=[common], help="co-Bongartz completion")
    _matrix_options(complete)
    complete.add_argument("--seq", default="", help="1-based mutation sequence reaching the target seed")
    complete.add_argument("--u", default="", help="1-based initial positions to complete at")
    complete.add_argument("--cluster", action="store_true", help="also print the completed cluster")

    enumerate_ = sub.add_parser("enumerate", parents=[common], help="exchange graph enumeration")
    _matrix_options(enumerate_)
    enumerate_.add_argument("--dot", help="write the exchange graph as DOT to this path")
    enumerate_.add_argument("--directions", help="order in which mutation directions are explored")

    verify = sub.add_parser("verify", parents=[common], help="check the g-vector clusters form a G-system")
    _matrix_options(verify)

    formula = sub.add_parser("formula", parents=[common], help="check the cluster formula at random points")
    _matrix_options(formula)
    formula.add_argument("--seq", default="", help="1-based mutation sequence reaching the seed")

    surface = sub.add_parser("surface", help="triangulated polygons")
    surface_sub = surface.add_subparsers(dest="surface_command", required=True)
    adjacency = surface_sub.add_parser("adjacency", parents=[common], help="signed adjacency matrix")
    _polygon_options(adjacency)
    flip = surface_sub.add_parser("flip", parents=[common], help="flip one diagonal")
    _polygon_options(flip)
    flip.add_argument("--arc", required=True, help="diagonal to flip, e.g. 0-2")
    gvec = surface_sub.add_parser("gvec", parents=[common], help="g-vector of an arc")
    _polygon_options(gvec)
    gvec.add_argument("--arc", required=True, help="diagonal whose g-vector is computed")
    surface_complete = surface_sub.add_parser("complete", parents=[common], help="co-Bongartz completion of arcs")
    _polygon_options(surface_complete)
    surface_complete.add_argument("--arcs", required=True, help="pairwise compatible diagonals, e.g. 1-3,1-5")

    describe = sub.add_parser("describe", parents=[common], help="describe a command, or list them all")
    describe.add_argument("name", nargs="?", help="command name")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=make_console(stderr=True), show_time=False, show_path=False)],
        force=True,
    )


def _matrix(args: argparse.Namespace) -> ExchangeMatrix:
    flag = "--file" if args.file is not None else "--b"
    return _flag(flag, read_matrix, args.b, args.file)


def _triangulation(args: argparse.Namespace) -> tuple[Triangulation, list[Arc]]:
    """The triangulation and its diagonals in the order they were listed."""
    polygon = _flag("--m", Polygon, args.m)
    tri = _flag("--tri", parse_triangulation, args.tri, args.m)
    return tri, _flag("--tri", parse_arcs, args.tri, polygon)


def dispatch(wb: Workbench, args: argparse.Namespace) -> object:
    """Validate every input of the invocation, then run the matching command."""
    match args.command:
        case "trace":
            b0 = _matrix(args)
            seq = _flag("--seq", parse_index_sequence, args.seq, b0.n)
            return wb.run("trace", b0, seq, args.cluster)
        case "complete":
            b0 = _matrix(args)
            seq = _flag("--seq", parse_index_sequence, args.seq, b0.n)
            u = _flag("--u", parse_index_set, args.u, b0.n)
            return wb.run("complete", b0, seq, u, args.cluster)
        case "enumerate":
            b0 = _matrix(args)
            directions = None
            if args.directions is not None:
                directions = _flag("--directions", parse_index_sequence, args.directions, b0.n)
            graph = wb.run("enumerate", b0, directions)
            if args.dot is not None:
                Path(args.dot).write_text(export_dot(graph) + "\n", encoding="utf-8")
                logger.info("wrote %s", args.dot)
            return graph
        case "verify":
            return wb.run("verify", _matrix(args))
        case "formula":
            b0 = _matrix(args)
            seq = _flag("--seq", parse_index_sequence, args.seq, b0.n)
            return wb.run("cluster-formula", b0, seq)
        case "surface":
            tri, order = _triangulation(args)
            polygon = tri.polygon
            match args.surface_command:
                case "adjacency":
                    return wb.run("surface-adjacency", tri, order)
                case "flip":
                    return wb.run("surface-flip", tri, _flag("--arc", parse_arc, args.arc, polygon))
                case "gvec":
                    return wb.run("surface-gvec", tri, _flag("--arc", parse_arc, args.arc, polygon), order)
                case "complete":
                    return wb.run("surface-complete", tri, _flag("--arcs", parse_arcs, args.arcs, polygon))
        case "describe":
            if args.name is None:
                return wb.run("list-commands")
            return wb.run("describe", args.name)
    raise ValidationError(f"unknown command: {args.command}")


def _report_error(exc: BaseException, as_json: bool) -> None:
    console = make_console(stderr=True)
    message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
    if as_json:
        payload: dict[str, object] = {"error": type(exc).__name__, "message": message}
        if isinstance(exc, TheoremViolation) and exc.witness is not None:
            payload["witness"] = exc.witness
        console.print(json.dumps(payload, indent=2, default=str))
        return
    console.print(f"error: {message}")
    if isinstance(exc, TheoremViolation) and exc.witness is not None:
        console.print(f"witness: {json.dumps(exc.witness, default=str)}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    configure_logging(getattr(args, "verbose", False))
    console = make_console()
    try:
        settings = Settings.from_env().replace(
            max_nodes=args.max_nodes,
            max_depth=args.max_depth,
            seed=args.seed,
        )
        wb = Workbench(settings)
        register_builtin_commands(wb)
        wb.on("before-command", lambda _wb, name, _args: logger.debug("running %s", name))
        result = dispatch(wb, args)
    except CapExceeded as exc:
        if exc.partial is not None:
            console.print(render(exc.partial, as_json=as_json))
        _report_error(exc, as_json)
        return exc.exit_code
    except (GSysError, ValueError, KeyError, IndexError) as exc:
        logger.debug("command failed", exc_info=True)
        _report_error(exc, as_json)
        return exit_code_for(exc)
    console.print(render(result, as_json=as_json))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
