"""Command line interface: enumerate, analyze, canon, render and db."""
from __future__ import annotations

import argparse
import os
import sys
import time

from . import invariants as inv
from .dsym import SymbolError, canonical_form, canonical_trace, graph_trace, parse, serialize
from .enumerate import GEOMETRY_CODES, enumerate_all
from .geometry.develop import DevelopmentError
from .geometry.layout import LayoutError
from .geometry.space import GeometryError
from .query import QueryError, eval_query, parse_query
from .records import COLUMNS, make_record
from .render import RenderError, RenderStyle, render_svg
from .store import StoreError, read_tsv, write_db, write_tsv

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dstiling", description="Periodic tilings via Delaney-Dress symbols.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="enumerate geometry-minimal symbols")
    e.add_argument("--max-complexity", type=int, required=True, metavar="N")
    e.add_argument("--geometry", choices=sorted(GEOMETRY_CODES))
    e.add_argument("--jobs", type=int, default=1, metavar="K")
    e.add_argument("--out", metavar="FILE", help="FILE.tdb (SQLite) or FILE.tsv; default: symbols on stdout")
    e.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")

    a = sub.add_parser("analyze", help="print all invariants of a symbol")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("symbol", nargs="?")
    g.add_argument("--file", metavar="F", help="file with one symbol per line")

    c = sub.add_parser("canon", help="print canonical encoding and trace")
    c.add_argument("symbol")

    r = sub.add_parser("render", help="draw a tiling as SVG")
    r.add_argument("symbol")
    r.add_argument("--model", choices=["euclidean", "poincare", "klein", "orthographic"])
    r.add_argument("--radius", type=float)
    r.add_argument("--size", type=int, default=512, metavar="PX")
    r.add_argument("--chambers", action="store_true", help="also draw chamber outlines")
    r.add_argument("-o", "--output", required=True, metavar="OUT.svg")

    d = sub.add_parser("db", help="database tools")
    dsub = d.add_subparsers(dest="db_command", required=True, parser_class=_Parser)
    q = dsub.add_parser("query", help="filter a database")
    q.add_argument("database", metavar="FILE.tdb")
    q.add_argument("-e", "--expr", required=True, metavar="EXPR")
    q.add_argument("--format", choices=["tsv", "symbols"], default="tsv")
    b = dsub.add_parser("build", help="build a database from TSV")
    b.add_argument("--from", dest="source", required=True, metavar="TSV")
    b.add_argument("--out", required=True, metavar="FILE.tdb")
    return p


# ------------------------------------------------------------ commands

def _enumerate(args) -> int:
    if args.max_complexity < 1:
        raise _Usage("--max-complexity must be >= 1")
    if args.jobs < 1:
        raise _Usage("--jobs must be >= 1")
    geometry = GEOMETRY_CODES[args.geometry] if args.geometry else None
    started = time.monotonic()
    if args.out is None:
        count = 0
        for sym in enumerate_all(args.max_complexity, geometry, jobs=args.jobs,
                                 with_records=False, progress=not args.quiet):
            sys.stdout.write(serialize(sym) + "\n")
            count += 1
    else:
        ext = os.path.splitext(args.out)[1].lower()
        if ext not in (".tdb", ".tsv"):
            raise _Usage("--out must end in .tdb or .tsv")
        records = enumerate_all(args.max_complexity, geometry, jobs=args.jobs,
                                with_records=True, progress=not args.quiet)
        count = write_db(records, args.out) if ext == ".tdb" else write_tsv(records, args.out)
    if not args.quiet:
        print(f"{count} symbols in {time.monotonic() - started:.1f} s", file=sys.stderr)
    return EXIT_OK


def analysis_lines(text: str) -> list[str]:
    s = parse(text)
    rec = make_record(s)
    orb = inv.orbifold(s)
    lines = [f"input: {serialize(s)}", f"canonical_trace: {canonical_trace(s)}",
             f"graph_trace: {graph_trace(s)}", f"orbifold_handles: {orb.handles}",
             f"orbifold_crosscaps: {orb.crosscaps}",
             f"geometry_minimal: {str(inv.is_geometry_minimal(s)).lower()}"]
    for col in COLUMNS:
        if col == "id":
            continue
        v = getattr(rec, col)
        lines.append(f"{col}: {str(v).lower() if isinstance(v, bool) else v}")
    return lines


def _analyze(args) -> int:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            texts = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    else:
        texts = [args.symbol]
    for n, text in enumerate(texts):
        if n:
            print()
        print("\n".join(analysis_lines(text)))
    return EXIT_OK


def _canon(args) -> int:
    s = parse(args.symbol)
    print(serialize(canonical_form(s)))
    print(canonical_trace(s))
    return EXIT_OK


def _render(args) -> int:
    if args.size < 16:
        raise _Usage("--size must be at least 16")
    s = parse(args.symbol)
    svg = render_svg(s, args.model, args.radius, RenderStyle(size=args.size, show_chambers=args.chambers))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def _db(args) -> int:
    if args.db_command == "build":
        n = write_db(read_tsv(args.source), args.out, renumber=False)
        print(f"{n} rows written to {args.out}", file=sys.stderr)
        return EXIT_OK
    q = parse_query(args.expr)
    rows = eval_query(q, args.database)
    if args.format == "symbols":
        for rec in rows:
            sys.stdout.write(rec.symbol + "\n")
    else:
        write_tsv(rows, sys.stdout, renumber=False)
    return EXIT_OK


class _Usage(Exception):
    pass


COMMANDS = {"enumerate": _enumerate, "analyze": _analyze, "canon": _canon,
            "render": _render, "db": _db}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _Usage as exc:
        print(f"dstiling: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SymbolError, QueryError, StoreError, RenderError, OSError) as exc:
        print(f"dstiling: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (inv.OrbifoldError, LayoutError, DevelopmentError, GeometryError, RuntimeError) as exc:
        print(f"dstiling: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
