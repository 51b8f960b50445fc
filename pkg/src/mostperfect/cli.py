"""Command-line front end.

Exit codes: 0 success (or verified), 1 verified false (``verify`` only),
2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .codec import ConstructionParams, ParamsError
from .construction import build_delta, build_L, build_Lr, build_Ltilde, build_M
from .search import (DEFAULT_BUDGET, MODES, SearchError, SearchResult, SearchSpace, census_parallel,
                     census_partition, find_delta, merge_results)
from .square import FORMATS, SquareError, build_square, deserialize, serialize
from .verifier import VerificationError, verify_full
from .zp import ZpError, ZpMatrix, ZpVector, format_matrix, format_vector, parse_matrix_text

BUDGET_ENV = "MPS_SEARCH_BUDGET"

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

_BUILDERS = {"Lr": build_Lr, "L": build_L, "Ltilde": build_Ltilde, "M": build_M, "delta": build_delta}


class UsageError(Exception):
    pass


def _params(args) -> ConstructionParams:
    return ConstructionParams(args.p, args.r)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(data: bytes, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _dump_json(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode()


def _offset(args) -> int:
    return 1 if args.one_based else 0


def cmd_generate(args) -> int:
    params = _params(args)
    sq = build_square(build_M(params), params)
    _write(serialize(sq, args.format, _offset(args)), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.matrix:
        m = parse_matrix_text(_read(args.matrix).decode())
        if not isinstance(m, ZpMatrix) or not m.is_square or m.rows % 2:
            raise UsageError("--matrix needs a square matrix of even size 2r")
        params = ConstructionParams(m.p, m.rows // 2)
        sq = build_square(m, params)
        p = args.p if args.p is not None else m.p
    else:
        if args.input is None:
            raise UsageError("give a square file or --matrix")
        if args.p is None:
            raise UsageError("--p is required when verifying a square file")
        sq = deserialize(_read(args.input), args.format, _offset(args))
        p = args.p
    report = verify_full(sq, p)
    _write(_dump_json(report.to_dict()), None)
    return EXIT_OK if report.is_type_p_mps else EXIT_FALSE


def cmd_matrix(args) -> int:
    obj = _BUILDERS[args.which](_params(args))
    text = format_vector(obj) if isinstance(obj, ZpVector) else format_matrix(obj)
    _write(text.encode(), None)
    return EXIT_OK


def cmd_delta(args) -> int:
    params = _params(args)
    if args.matrix:
        m = parse_matrix_text(_read(args.matrix).decode())
        if not isinstance(m, ZpMatrix) or m.shape != (params.dim, params.dim) or m.p != params.p:
            raise UsageError(f"--matrix must be {params.dim}x{params.dim} over Z_{params.p}")
    elif args.solve:
        m = _BUILDERS[args.solve](params)
    else:
        _write(format_vector(build_delta(params)).encode(), None)
        return EXIT_OK
    x = find_delta(m, params)
    _write(b"none\n" if x is None else format_vector(x).encode(), None)
    return EXIT_OK


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _emit_census(result: SearchResult, timing: bool) -> None:
    obj = result.to_dict()
    if not timing:
        obj.pop("wall_time")
    _write(_dump_json(obj), None)


def cmd_search(args) -> int:
    space = SearchSpace(_params(args), mode=args.mode, count=args.count, seed=args.seed,
                        budget=_budget(args), max_representatives=args.max_representatives)

    def progress(done, total, partial):
        print(f"progress {done}/{total} nonsingular={partial.nonsingular} mps={partial.mps_count}",
              file=sys.stderr, flush=True)

    if args.workers > 1:
        if args.shards != 1 or args.checkpoint:
            raise UsageError("--workers cannot be combined with --shards or --checkpoint")
        result = census_parallel(space, args.workers)
    else:
        result = census_partition(space, args.shard, args.shards, checkpoint=args.checkpoint,
                                  progress=progress if args.progress_every else None,
                                  progress_every=args.progress_every or 1)
    print(f"census finished in {result.wall_time:.3f}s", file=sys.stderr)
    _emit_census(result, args.timing)
    return EXIT_OK


def cmd_merge(args) -> int:
    parts = []
    for path in args.inputs:
        try:
            parts.append(SearchResult.from_dict(json.loads(_read(path))))
        except (KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"{path} is not a census report: {exc}") from None
    merged = merge_results(parts, args.max_representatives)
    _emit_census(merged, args.timing)
    return EXIT_OK


def cmd_convert(args) -> int:
    sq = deserialize(_read(args.input), getattr(args, "from"), args.input_offset)
    _write(serialize(sq, args.to, _offset(args)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mostperfect",
        description="Generate and verify linear type-p most-perfect magic squares of order p**r.")
    sub = parser.add_subparsers(dest="command", required=True)

    def pr(sp):
        sp.add_argument("--p", type=int, required=True, help="prime p")
        sp.add_argument("--r", type=int, required=True, help="exponent r >= 2; order n = p**r")

    g = sub.add_parser("generate", help="write the constructed square")
    pr(g)
    g.add_argument("--format", choices=FORMATS, default="grid")
    g.add_argument("-o", "--output", help="output path (default stdout)")
    g.add_argument("--one-based", action="store_true", help="display symbols 1..n^2")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check every property; exit 0 iff type-p most-perfect")
    v.add_argument("input", nargs="?", help="square file (grid, csv or json; '-' for stdin)")
    v.add_argument("--p", type=int, help="type p to test (defaults to the matrix modulus with --matrix)")
    v.add_argument("--matrix", help="verify the square of a matrix file instead")
    v.add_argument("--format", choices=FORMATS, help="input format (sniffed if omitted)")
    v.add_argument("--one-based", action="store_true", help="input symbols are 1..n^2")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("matrix", help="print a construction matrix or delta")
    pr(m)
    m.add_argument("--which", choices=tuple(_BUILDERS), default="M")
    m.set_defaults(func=cmd_matrix)

    d = sub.add_parser("delta", help="print delta, or solve for a fully nonzero delta")
    pr(d)
    src = d.add_mutually_exclusive_group()
    src.add_argument("--solve", choices=("M", "Ltilde"), help="solve X x = e_1 + e_{r+1}")
    src.add_argument("--matrix", help="solve against a matrix file")
    d.set_defaults(func=cmd_delta)

    s = sub.add_parser("search", help="census of matrices producing most-perfect squares")
    pr(s)
    s.add_argument("--mode", choices=MODES, default="exhaustive-all")
    s.add_argument("--count", type=int, help="samples for random-sample mode")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--shard", type=int, default=0)
    s.add_argument("--budget", type=int, help=f"max candidates per run (env {BUDGET_ENV})")
    s.add_argument("--checkpoint", help="checkpoint file; resumed if present")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--max-representatives", type=int, default=16)
    s.add_argument("--progress-every", type=int, default=0, help="progress line interval on stderr")
    s.add_argument("--timing", action="store_true", help="include wall_time in the report")
    s.set_defaults(func=cmd_search)

    mg = sub.add_parser("merge", help="merge shard census reports")
    mg.add_argument("inputs", nargs="+")
    mg.add_argument("--max-representatives", type=int)
    mg.add_argument("--timing", action="store_true")
    mg.set_defaults(func=cmd_merge)

    c = sub.add_parser("convert", help="convert a square between formats")
    c.add_argument("input")
    c.add_argument("--to", choices=FORMATS, required=True)
    c.add_argument("--from", choices=FORMATS)
    c.add_argument("--input-offset", type=int, default=0)
    c.add_argument("--one-based", action="store_true", help="write symbols 1..n^2")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParamsError, ZpError, SquareError, VerificationError, SearchError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
