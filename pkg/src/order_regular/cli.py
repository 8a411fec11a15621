"""Command-line front end: ``python -m order_regular <command> ...``.

Matrices go to standard output in the plain 0/1 text format; statistics and
verdict details go to standard error. Exit codes: 0 success, 1 violated or
target not found, 2 usage error, 3 I/O or format error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .constructions import (
    FIXTURE_FILES,
    BuildingBlock,
    asymptotic_rate,
    bound_table,
    construct,
    embedded_blocks,
)
from .matrix import BinaryMatrix, MatrixFormatError, emit_matrix, parse_matrix
from .regularity import RegularityKind, check, constraint_map
from .search import SearchConfig, branch_search
from .search.beam import beam_search
from .search.backforth import back_and_forth, back_and_forth_restarts
from .search.parallel import default_workers, exhaustive_parallel

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

KIND_CHOICES = [k.value for k in RegularityKind]


class UsageError(Exception):
    pass


def _read_matrix(path: str) -> BinaryMatrix:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return parse_matrix(data)


def _write_matrix(m: BinaryMatrix, out) -> None:
    out.buffer.write(emit_matrix(m))
    out.flush()


def _kind(text: str) -> RegularityKind:
    try:
        return RegularityKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _block(ref: str, scheme: str) -> BuildingBlock:
    """An embedded block by name, or a matrix file checked against the scheme's kind."""
    blocks = embedded_blocks()
    if ref in blocks:
        return blocks[ref]
    if not Path(ref).exists():
        raise UsageError(f"no embedded block or file named {ref!r} (embedded: {', '.join(sorted(blocks))})")
    kind = RegularityKind.PSOR if scheme == "modified" else RegularityKind.SOR
    return BuildingBlock(_read_matrix(ref), kind, ref)


def cmd_verify(args) -> int:
    m = _read_matrix(args.file)
    verdict = check(m, args.kind)
    print(verdict)
    if not verdict and verdict.reason:
        print(f"{args.kind}: {verdict.reason}", file=sys.stderr)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_construct(args) -> int:
    if args.scheme != "simple" and not args.block:
        raise UsageError(f"--block is required for scheme {args.scheme}")
    block = None if args.scheme == "simple" else _block(args.block, args.scheme)
    m = construct(args.scheme, block, args.levels, allow_large=args.allow_large)
    _write_matrix(m, sys.stdout)
    print(f"{m.n_rows}x{m.n_cols}", file=sys.stderr)
    if args.verify:
        verdict = check(m, RegularityKind.OR)
        print(f"or: {verdict}", file=sys.stderr)
        return EXIT_OK if verdict else EXIT_FAIL
    return EXIT_OK


def _search_config(args, **extra) -> SearchConfig:
    root = _read_matrix(args.root) if getattr(args, "root", None) else None
    return SearchConfig(
        kind=args.kind.star,
        n=args.n,
        target_rows=args.target,
        root=root,
        seed=args.seed,
        time_limit=args.time_limit,
        progress_interval=args.progress,
        **extra,
    )


def _report(kind: RegularityKind, out) -> None:
    rows = out.rows
    base = f" ({kind.base}: {rows - 1} rows)" if rows else ""
    print(f"rows={rows}{base} exhausted={str(out.exhausted).lower()} {out.stats}", file=sys.stderr)
    if out.error:
        print(f"error: {out.error}", file=sys.stderr)


def _found(cfg: SearchConfig, out) -> bool:
    if out.error:
        return False
    if cfg.target_rows is not None:
        return out.target_reached
    return True


def cmd_search(args) -> int:
    cfg = _search_config(
        args,
        node_limit=args.node_limit,
        cutting=not args.no_cutting,
        symmetry=not args.no_symmetry,
    )
    out = beam_search(cfg, args.beam) if args.beam else branch_search(cfg)
    _write_matrix(out.best, sys.stdout)
    _report(cfg.kind, out)
    return EXIT_OK if _found(cfg, out) else EXIT_FAIL


def cmd_exhaustive(args) -> int:
    workers = args.workers if args.workers is not None else default_workers()
    cfg = _search_config(args, workers=workers, split_depth=args.split_depth)
    out = exhaustive_parallel(cfg, journal=args.resume)
    print(f"rows={out.rows} exhausted={str(out.exhausted).lower()}")
    if args.output:
        Path(args.output).write_bytes(emit_matrix(out.best))
    _report(cfg.kind, out)
    if out.error:
        return EXIT_FAIL
    if cfg.target_rows is not None:
        return EXIT_OK if out.target_reached else EXIT_FAIL
    return EXIT_OK if out.exhausted else EXIT_FAIL


def cmd_baf(args) -> int:
    cfg = _search_config(args, node_limit=args.node_limit)
    if cfg.kind not in (RegularityKind.SORSTAR, RegularityKind.PSORSTAR):
        raise UsageError("baf needs --kind sor* or psor*")
    if args.restarts is not None or args.target is not None:
        if args.target is None:
            raise UsageError("--restarts needs --target")
        out = back_and_forth_restarts(
            cfg, args.d, args.stall, args.target, restarts=args.restarts, time_limit=args.total_time_limit
        )
    else:
        out = back_and_forth(cfg, args.d, args.stall, max_steps=args.max_steps, time_limit=args.total_time_limit)
    _write_matrix(out.best, sys.stdout)
    print(f"trace={','.join(map(str, out.trace))} fallbacks={out.fallbacks}", file=sys.stderr)
    _report(cfg.kind, out)
    if cfg.target_rows is not None:
        return EXIT_OK if out.target_reached else EXIT_FAIL
    return EXIT_OK


def _save_image(cmap, path: str, columns: int, scale: int = 1) -> None:
    target = Path(path)
    if target.suffix.lower() == ".ppm":
        target.write_bytes(cmap.to_ppm(columns))
        return
    try:
        from PIL import Image
    except ImportError:
        raise UsageError("PNG output needs Pillow; use a .ppm file name instead") from None
    pixels = cmap.pixel_rows(columns)
    height = len(pixels)
    width = len(pixels[0]) if pixels else 0
    img = Image.new("RGB", (max(width, 1), max(height, 1)), (255, 255, 255))
    img.putdata([px for line in pixels for px in line] or [(255, 255, 255)])
    if scale > 1:
        img = img.resize((img.width * scale, img.height * scale), Image.NEAREST)
    img.save(target)


def cmd_map(args) -> int:
    m = _read_matrix(args.file)
    cmap = constraint_map(m)
    columns = -1
    if args.columns:
        columns = 0
        for k in args.columns:
            if not 1 <= k <= m.n_cols:
                raise UsageError(f"column {k} out of range 1..{m.n_cols}")
            columns |= 1 << (m.n_cols - k)
    sys.stdout.write(cmap.to_text(columns))
    if args.png:
        _save_image(cmap, args.png, columns, args.scale)
    verdict = cmap.check(args.kind)
    print(f"{args.kind}: {verdict}", file=sys.stderr)
    return EXIT_OK


def cmd_blocks(args) -> int:
    blocks = embedded_blocks()
    if args.name is None:
        for name in sorted(blocks):
            b = blocks[name]
            print(f"{name}\t{b.M}x{b.N}\t{b.kind}\t{check(b.matrix, b.kind)}")
        return EXIT_OK
    if args.name not in blocks:
        raise UsageError(f"unknown block {args.name!r}; known: {', '.join(sorted(FIXTURE_FILES))}")
    _write_matrix(blocks[args.name].matrix, sys.stdout)
    return EXIT_OK


def cmd_bounds(args) -> int:
    block = None if args.block == "simple" else _block(args.block, "main")
    rate = asymptotic_rate(block)
    label = "simple" if block is None else block.name
    print("level\trows\tcols\trate")
    for rep in bound_table(block, args.levels):
        print(f"{rep.levels}\t{rep.rows}\t{rep.cols}\t{rep.growth_rate:.5f}")
    print(f"asymptotic\t{label}\t{rate:.5f}")
    return EXIT_OK


def _add_search_flags(p: argparse.ArgumentParser, default_kind: str) -> None:
    p.add_argument("--n", type=_positive, required=True, help="number of columns")
    p.add_argument("--kind", type=_kind, default=RegularityKind.parse(default_kind), help="searched as its starred variant")
    p.add_argument("--target", type=_positive, help="stop at this many starred rows")
    p.add_argument("--seed", type=int, default=0, help="0 = sorted child order")
    p.add_argument("--root", help="matrix file used as the search root")
    p.add_argument("--time-limit", type=float, help="seconds")
    p.add_argument("--progress", type=float, help="log progress every N seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="order-regular", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a matrix file")
    p.add_argument("--kind", type=_kind, default=RegularityKind.OR, help=f"one of {', '.join(KIND_CHOICES)}")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build a recursive construction")
    p.add_argument("--scheme", choices=["simple", "main", "modified"], required=True)
    p.add_argument("--block", help="embedded block name or matrix file")
    p.add_argument("--levels", type=_positive, required=True)
    p.add_argument("--verify", action="store_true", help="run the OR verifier on the result")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="single-threaded branch search")
    _add_search_flags(p, "or*")
    p.add_argument("--node-limit", type=_positive)
    p.add_argument("--no-cutting", action="store_true")
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--beam", type=_positive, metavar="WIDTH", help="beam search of this width instead of branch search")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("exhaustive", help="exhaustive search over split subtrees")
    _add_search_flags(p, "or*")
    p.add_argument("--split-depth", type=int, default=2)
    p.add_argument("--workers", type=_positive, help="default from ORDER_REGULAR_WORKERS, else 1")
    p.add_argument("--resume", metavar="JOURNAL", help="append finished subtrees here and skip those already listed")
    p.add_argument("--output", help="write the best matrix to this file")
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser("baf", help="back-and-forth local search")
    _add_search_flags(p, "sor*")
    p.add_argument("--d", type=int, required=True, help="root depth")
    p.add_argument("--stall", type=_positive, required=True, help="stop after this many steps without growth")
    p.add_argument("--restarts", type=_positive, help="restart with fresh seeds until --target is reached")
    p.add_argument("--max-steps", type=_positive)
    p.add_argument("--node-limit", type=_positive, help="per step")
    p.add_argument("--total-time-limit", type=float, help="seconds for the whole run; --time-limit is per step")
    p.set_defaults(func=cmd_baf)

    p = sub.add_parser("map", help="constraint-space grid of a matrix")
    p.add_argument("file")
    p.add_argument("--kind", type=_kind, default=RegularityKind.OR, help="kind reported on standard error")
    p.add_argument("--columns", type=int, nargs="+", help="only count witnesses in these columns (1-based)")
    p.add_argument("--png", metavar="IMAGE", help="also write a pixel map (.png or .ppm)")
    p.add_argument("--scale", type=_positive, default=1, help="pixels per cell in the image")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("blocks", help="list embedded fixtures or print one")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("bounds", help="growth table of a construction")
    p.add_argument("--block", default="simple", help="embedded block name, matrix file, or 'simple'")
    p.add_argument("--levels", type=_positive, default=5)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    if getattr(args, "progress", None):
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, MatrixFormatError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
