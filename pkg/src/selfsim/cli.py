"""Command-line front end.

Exit status: 0 success, 1 validation failure (including unparsable system
files), 2 usage error, 3 resource guard tripped (a partial report is still
printed).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gallery
from .approximator import (DEFAULT_MAX_CELLS, approximate_space, geometric_realization,
                           parse_stream, stream_equal_up_to)
from .emit import (nondegeneracy_report, realization_svg, stats_csv, touching_dot,
                   validation_report)
from .errors import RealizationError, ResourceLimitError, SystemFileError
from .nondegen import is_valid_system
from .systemfile import emit_system, parse_system

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_system(arg: str):
    """A system file path, or the name of a gallery system."""
    path = Path(arg)
    if path.exists():
        return parse_system(path)
    if arg in gallery.GALLERY:
        return gallery.load(arg)
    raise UsageError(f"{arg!r} is neither a readable file nor a gallery system "
                     f"({', '.join(sorted(gallery.GALLERY))})")


def _object(M, label: str) -> int:
    try:
        return M.base.object_index(label)
    except KeyError:
        raise UsageError(f"unknown object {label!r}; objects are {', '.join(M.base.objects)}") from None


def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_validate(args, out) -> int:
    M, _ = _load_system(args.system)
    report = is_valid_system(M)
    out.write(validation_report(M, report))
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_check_nondegeneracy(args, out) -> int:
    M, _ = _load_system(args.system)
    report = is_valid_system(M)
    out.write(nondegeneracy_report(M, report))
    return EXIT_OK if all(report.slices) else EXIT_INVALID


def cmd_approximate(args, out) -> int:
    M, _ = _load_system(args.system)
    a = _object(M, args.object)
    try:
        approx = approximate_space(M, a, args.depth, max_cells=args.max_cells)
    except ResourceLimitError as exc:
        rows = [m.stats() for m in exc.partial or ()]
        out.write(stats_csv(rows))
        print(f"resource limit: {exc} (partial table up to depth {len(rows) - 1})", file=sys.stderr)
        return EXIT_RESOURCE
    _write(args.out, stats_csv(approx.rows()), out)
    if args.graph:
        Path(args.graph).write_text(touching_dot(M, approx.models[-1]), encoding="utf-8")
    return EXIT_OK


def cmd_equal(args, out) -> int:
    M, _ = _load_system(args.system)
    a = _object(M, args.object)
    try:
        x, y = parse_stream(M, a, args.x), parse_stream(M, a, args.y)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    verdict = stream_equal_up_to(M, a, x, y, args.depth, chain_bound=args.chain_bound)
    out.write(f"{verdict}\n")
    return EXIT_OK


def cmd_render(args, out) -> int:
    M, hints = _load_system(args.system)
    a = _object(M, args.object)
    try:
        real = geometric_realization(M, a, args.depth, hints)
    except RealizationError as exc:
        print(f"cannot render: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _write(args.out, realization_svg(real, size=args.size), out)
    return EXIT_OK


def cmd_gallery(args, out) -> int:
    if args.list:
        out.write("".join(f"{name}\n" for name in gallery.GALLERY))
        return EXIT_OK
    if args.name is None:
        raise UsageError("gallery needs --name or --list")
    try:
        M, hints = gallery.load(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    _write(args.out, emit_system(M, hints), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfsim", description="Self-similarity system engine.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_system(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("system", help="system file or gallery name")
        return sp

    with_system("validate", "check the bimodule laws, finiteness and nondegeneracy").set_defaults(func=cmd_validate)
    with_system("check-nondegeneracy", "per-object nondegeneracy verdicts with witnesses").set_defaults(
        func=cmd_check_nondegeneracy)

    sp = with_system("approximate", "per-depth statistics of the finite approximations")
    sp.add_argument("--object", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--graph", help="write the touching graph at the final depth as DOT")
    sp.add_argument("--out", help="write the table here instead of stdout")
    sp.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    sp.set_defaults(func=cmd_approximate)

    sp = with_system("equal", "decide whether two eventually periodic streams name the same point")
    sp.add_argument("--object", required=True)
    sp.add_argument("--x", required=True, help="stream as prefix:cycle with comma-separated digits")
    sp.add_argument("--y", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--chain-bound", type=int, default=1)
    sp.set_defaults(func=cmd_equal)

    sp = with_system("render", "draw the depth-n cells as SVG using the realization hints")
    sp.add_argument("--object", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--out", help="SVG path (stdout if omitted)")
    sp.add_argument("--size", type=int, default=480)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("gallery", help="write a built-in system in the system file format")
    sp.add_argument("--name")
    sp.add_argument("--out")
    sp.add_argument("--list", action="store_true")
    sp.set_defaults(func=cmd_gallery)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if getattr(args, "depth", 0) is not None and getattr(args, "depth", 0) < 0:
        print("selfsim: error: --depth must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"selfsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemFileError as exc:
        print(f"selfsim: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as exc:
        print(f"selfsim: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
