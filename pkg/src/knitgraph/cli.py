"""``knitgraph`` command line: convert, layout, render, eval, gen, preview, bench.

Exit codes: 0 success, 2 invalid input, 3 graph not planar, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from dataclasses import fields
from pathlib import Path

from . import __version__
from .errors import KnitGraphError, NotPlanar, PatternSyntaxError
from .fda import FdaConfig, run
from .geometry import Layout
from .graph import KnitGraph, convert
from .metrics import EvalReport, evaluate
from .pattern import gen_triangle, parse, pretty_print
from .render import RenderStyle, to_svg
from .stitches import EdgeLengthConfig, StitchDictionary, classify_pattern, default_dictionary

EXIT_OK, EXIT_INVALID, EXIT_NOT_PLANAR, EXIT_IO = 0, 2, 3, 4

DICT_ENV = "KNITGRAPH_STITCH_DICT"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- argument groups ----------------------------------------------------


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_fda_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("layout")
    for f in fields(FdaConfig):
        if f.type in (bool, "bool"):
            g.add_argument(_flag(f.name), action="store_true", default=f.default)
        else:
            kind = int if f.type in (int, "int") else float
            g.add_argument(_flag(f.name), type=kind, default=f.default, metavar="N" if kind is int else "X",
                           help=f"default {f.default}")
    g.add_argument("--seed-scale", type=float, default=1.0, help="scale the initial layout (default 1.0)")
    g.add_argument("--outer-node", type=int, default=None, help="put a face through this node outside")
    g.add_argument("--no-timing", action="store_true", help="write 0 seconds in reports (reproducible files)")


def _add_length_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("edge lengths")
    defaults = EdgeLengthConfig()
    for f in fields(EdgeLengthConfig):
        g.add_argument(_flag(f.name), type=float, default=getattr(defaults, f.name), metavar="X")
    g.add_argument("--stitch-dict", type=Path, default=None,
                   help=f"stitch dictionary override file (or set {DICT_ENV})")


def _add_style_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("style")
    for f in fields(RenderStyle):
        if f.name == "orient_rows":
            g.add_argument("--no-orient", dest="orient_rows", action="store_false")
        else:
            g.add_argument(_flag(f.name), type=type(f.default), default=f.default, metavar="V")


def _fda_config(args) -> FdaConfig:
    return FdaConfig(**{f.name: getattr(args, f.name) for f in fields(FdaConfig)})


def _length_config(args) -> EdgeLengthConfig:
    return EdgeLengthConfig(**{f.name: getattr(args, f.name) for f in fields(EdgeLengthConfig)})


def _style(args) -> RenderStyle:
    return RenderStyle(**{f.name: getattr(args, f.name) for f in fields(RenderStyle)})


def _dictionary(args) -> StitchDictionary:
    path = args.stitch_dict or os.environ.get(DICT_ENV)
    if not path:
        return default_dictionary()
    return _io(path, lambda: StitchDictionary.load(path))


# -- I/O helpers --------------------------------------------------------


def _io(path, fn):
    try:
        return fn()
    except KnitGraphError as exc:
        if isinstance(exc, PatternSyntaxError):
            raise CliError(f"{path}:{exc.line}:{exc.col}: {exc.message}", EXIT_INVALID) from None
        code = EXIT_NOT_PLANAR if isinstance(exc, NotPlanar) else EXIT_INVALID
        raise CliError(f"{path}: {exc}", code) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from None
    except UnicodeDecodeError:
        raise CliError(f"{path}: not a UTF-8 text file", EXIT_IO) from None


def _write(path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    _io(path, lambda: Path(path).write_text(text, encoding="utf-8"))


def _read(path) -> str:
    return _io(path, lambda: Path(path).read_text(encoding="utf-8"))


def _convert_file(path, args) -> tuple[KnitGraph, int]:
    dictionary = _dictionary(args)
    text = _read(path)
    pattern = _io(path, lambda: parse(text))
    cls = _io(path, lambda: classify_pattern(pattern, dictionary))
    g = _io(path, lambda: convert(pattern, _length_config(args), dictionary))
    return g, cls


def _layout(g: KnitGraph, args, label):
    cfg = _io(label, lambda: _fda_config(args))
    t0 = time.perf_counter()
    layout, report = _io(label, lambda: run(
        g, cfg, outer_node=args.outer_node, seed_scale=args.seed_scale, timing=not args.no_timing
    ))
    return layout, report, time.perf_counter() - t0


def _summary(label, report) -> str:
    return (f"{label}: final DEL {report.final_del:.6f} (initial {report.initial_del:.6f}), "
            f"{report.iterations} iterations, max crossings {report.max_crossings}")


# -- subcommands --------------------------------------------------------


def cmd_convert(args) -> int:
    g, cls = _convert_file(args.pattern, args)
    if args.output:
        _write(args.output, g.to_json())
    print(f"class {cls}")
    print(f"{g.n} nodes, {len(g.edges)} edges", file=sys.stderr)
    return EXIT_OK


def cmd_layout(args) -> int:
    g = _io(args.graph, lambda: KnitGraph.from_json(_read(args.graph)))
    layout, report, _ = _layout(g, args, args.graph)
    _write(args.output, layout.to_json())
    if args.report:
        _write(args.report, report.to_csv())
    print(_summary(args.graph, report), file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    g = _io(args.graph, lambda: KnitGraph.from_json(_read(args.graph)))
    layout = _io(args.layout, lambda: Layout.from_json(_read(args.layout)))
    svg = _io(args.layout, lambda: to_svg(layout, g, _style(args)))
    _write(args.output, svg)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = _io(args.graph, lambda: KnitGraph.from_json(_read(args.graph)))
    layout = _io(args.layout, lambda: Layout.from_json(_read(args.layout)))
    name = args.name if args.name is not None else Path(args.graph).stem
    rep = _io(args.layout, lambda: evaluate(layout, g, args.seconds, name))
    sys.stdout.write(rep.to_csv(header=not args.no_header))
    return EXIT_OK


def cmd_gen(args) -> int:
    pattern = _io("gen triangle", lambda: gen_triangle(args.rows, args.cast_on, args.increase_every))
    _write(args.output, pretty_print(pattern))
    return EXIT_OK


def cmd_preview(args) -> int:
    g, cls = _convert_file(args.pattern, args)
    if args.graph:
        _write(args.graph, g.to_json())
    layout, report, _ = _layout(g, args, args.pattern)
    if args.layout:
        _write(args.layout, layout.to_json())
    if args.report:
        _write(args.report, report.to_csv())
    _write(args.output, to_svg(layout, g, _style(args)))
    print(_summary(args.pattern, report), file=sys.stderr)
    return EXIT_OK


BENCH_HEADER = EvalReport.header()[:3] + ["initial"] + EvalReport.header()[3:] + ["max_crossings", "iterations"]


def cmd_bench(args) -> int:
    suite = Path(args.suite)
    if not suite.is_dir():
        raise CliError(f"{suite}: not a directory", EXIT_IO)
    paths = sorted(suite.glob("*.knit"))
    if not paths:
        raise CliError(f"{suite}: no .knit patterns found", EXIT_IO)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    status = EXIT_OK
    for path in paths:
        try:
            g, _ = _convert_file(path, args)
            layout, report, elapsed = _layout(g, args, path)
        except CliError as exc:
            print(f"knitgraph: error: {exc}", file=sys.stderr)
            status = max(status, exc.code)
            continue
        rep = evaluate(layout, g, 0.0 if args.no_timing else elapsed, path.stem)
        row = rep.row()
        w.writerow(row[:3] + [f"{report.initial_del:.6f}"] + row[3:] + [report.max_crossings, report.iterations])
        print(_summary(path.name, report), file=sys.stderr)
    _write(args.output, buf.getvalue())
    return status


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knitgraph", description="Knitting patterns to crossing-free graph layouts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="parse a pattern and write its knit graph")
    p.add_argument("pattern")
    p.add_argument("-o", "--output", help="graph JSON path ('-' for stdout)")
    _add_length_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("layout", help="lay out a knit graph")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True, help="layout JSON path")
    p.add_argument("--report", help="per-iteration CSV report path")
    _add_fda_flags(p)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("render", help="draw a layout as SVG")
    p.add_argument("layout")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    _add_style_flags(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("eval", help="print DEL and crossing count as CSV")
    p.add_argument("layout")
    p.add_argument("graph")
    p.add_argument("--name", help="pattern name column (default: graph file stem)")
    p.add_argument("--seconds", type=float, default=0.0, help="runtime to record")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a pattern")
    gen = p.add_subparsers(dest="kind", required=True)
    t = gen.add_parser("triangle", help="top-down triangle shawl")
    t.add_argument("--rows", type=int, required=True)
    t.add_argument("--cast-on", type=int, default=7)
    t.add_argument("--increase-every", type=int, default=2)
    t.add_argument("-o", "--output", default="-")
    t.set_defaults(func=cmd_gen)

    p = sub.add_parser("preview", help="pattern to SVG in one go")
    p.add_argument("pattern")
    p.add_argument("-o", "--output", required=True, help="SVG path")
    p.add_argument("--graph", help="also write the graph JSON here")
    p.add_argument("--layout", help="also write the layout JSON here")
    p.add_argument("--report", help="also write the per-iteration CSV here")
    _add_length_flags(p)
    _add_fda_flags(p)
    _add_style_flags(p)
    p.set_defaults(func=cmd_preview)

    p = sub.add_parser("bench", help="lay out every pattern in a directory")
    p.add_argument("--suite", required=True, help="directory of .knit files")
    p.add_argument("-o", "--output", required=True, help="results CSV path")
    _add_length_flags(p)
    _add_fda_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"knitgraph: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
