"""Command-line front door for corpus builds, execution, and validation.

Exit codes: 0 success, 1 usage error, 2 data error (bad input files,
schema violations, validation mismatches), 3 internal invariant
violation. The master seed falls back to $POET_FORGE_SEED, then 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from pathlib import Path

from .core import (
    ExampleValidationError,
    SeedSpec,
    ShardFormatError,
    collect_stats,
    emit_shard,
)
from .corpus.build import build_sql_gen, build_sql_sel, obfuscate_examples
from .corpus.flatten import ContextFormatError, FlattenBudgetError
from .corpus.templates import DEFAULT_TEMPLATES, load_templates
from .logicgen import gen_logic
from .mathgen import MathEvalError, gen_math
from .sql.ast import SqlTypeError
from .sql.executor import EmptyResultError, execute, render_result
from .sql.parser import SqlParseError, parse_sql
from .sql.tables import TableFormatError, ingest_wikisql, table_from_wikisql
from .validate import ValidationMismatch, validate_shard

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_DATA_ERRORS = (
    ExampleValidationError,
    ShardFormatError,
    TableFormatError,
    ContextFormatError,
    FlattenBudgetError,
    SqlParseError,
    SqlTypeError,
    EmptyResultError,
    ValidationMismatch,
    MathEvalError,
    OSError,
    json.JSONDecodeError,
    ValueError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's 2
        raise UsageError(message)


def _default_seed() -> int:
    return int(os.environ.get("POET_FORGE_SEED", "0"))


def _add_gen_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--count", type=int, required=True,
                     help="total examples across all shards")
    sub.add_argument("--seed", type=int, default=_default_seed(),
                     help="master seed (default: $POET_FORGE_SEED or 0)")
    sub.add_argument("--out", type=Path, required=True,
                     help="output shard path (suffixed -NNNNN when --shards > 1)")
    sub.add_argument("--shards", type=int, default=1, help="number of shard files")
    sub.add_argument("--jobs", type=int, default=1,
                     help="worker processes for shard generation")


def build_parser() -> _Parser:
    parser = _Parser(prog="poet-forge",
                     description="Deterministic program-execution corpus synthesis")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("gen-math", help="generate the math corpus")
    _add_gen_common(p)
    p.add_argument("--irrelevant-vars", type=int, default=0, choices=range(0, 31),
                   metavar="{0..30}", help="noise bindings per context")

    p = commands.add_parser("gen-logic", help="generate the logic corpus")
    _add_gen_common(p)

    p = commands.add_parser("gen-sql", help="generate the SQL corpora")
    _add_gen_common(p)
    p.add_argument("--tables", type=Path, required=True,
                   help="WikiSQL-format tables JSONL")
    p.add_argument("--templates", type=Path, default=None,
                   help="template JSON file (default: built-in set)")
    p.add_argument("--budget", type=int, default=450,
                   help="flattened-context token budget")
    p.add_argument("--sel-out", type=Path, default=None,
                   help="also derive the selection corpus to this path")
    p.add_argument("--obfuscate", action="store_true",
                   help="replace SQL keywords with rare tokens")

    p = commands.add_parser("exec-sql", help="execute one query against one table")
    p.add_argument("--query", required=True, help="query text in the subset grammar")
    p.add_argument("--table", type=Path, required=True,
                   help="table file: JSON object or WikiSQL JSONL")
    p.add_argument("--table-id", default=None,
                   help="table id to pick from a multi-table JSONL")

    p = commands.add_parser("validate", help="schema-check and re-execute shards")
    p.add_argument("shards", type=Path, nargs="+")
    p.add_argument("--sample", type=float, default=0.1,
                   help="fraction of each shard to re-execute (default 0.1)")
    p.add_argument("--seed", type=int, default=_default_seed(),
                   help="sampling seed")

    p = commands.add_parser("stats", help="print corpus statistics as JSON")
    p.add_argument("shard", type=Path)

    return parser


def _shard_path(out: Path, shard_index: int, shard_count: int) -> Path:
    if shard_count == 1:
        return out
    return out.with_name(f"{out.stem}-{shard_index:05d}{out.suffix}")


def _gen_one_shard(args_tuple) -> tuple[int, int, str, dict]:
    """Worker: build one shard and write it; returns (index, count, path, counters)."""
    command, out, shard_index, options = args_tuple
    spec = SeedSpec(options["seed"], shard_index, options["shards"])
    path = _shard_path(out, shard_index, options["shards"])
    if command == "gen-math":
        examples = gen_math(spec, options["count"], options["irrelevant_vars"])
    elif command == "gen-logic":
        examples = gen_logic(spec, options["count"])
    else:
        tables = ingest_wikisql(options["tables"])
        templates = (
            load_templates(options["templates"])
            if options["templates"]
            else DEFAULT_TEMPLATES
        )
        counters: Counter = Counter()
        examples = build_sql_gen(
            tables,
            options["count"],
            spec,
            templates=templates,
            budget=options["budget"],
            counters=counters,
        )
        if options["sel_out"]:
            selected = build_sql_sel(examples)
            counters["sel_retained"] = len(selected)
            if options["obfuscate"]:
                selected = obfuscate_examples(selected)
            emit_shard(
                selected, _shard_path(options["sel_out"], shard_index, options["shards"])
            )
        if options["obfuscate"]:
            examples = obfuscate_examples(examples)
        n = emit_shard(examples, path)
        return shard_index, n, str(path), dict(counters)
    n = emit_shard(examples, path)
    return shard_index, n, str(path), {}


def _run_gen(args: argparse.Namespace) -> int:
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    if args.shards < 1:
        raise UsageError("--shards must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    options = {
        "seed": args.seed,
        "count": args.count,
        "shards": args.shards,
        "irrelevant_vars": getattr(args, "irrelevant_vars", 0),
        "tables": getattr(args, "tables", None),
        "templates": getattr(args, "templates", None),
        "budget": getattr(args, "budget", 450),
        "sel_out": getattr(args, "sel_out", None),
        "obfuscate": getattr(args, "obfuscate", False),
    }
    work = [
        (args.command, args.out, shard_index, options)
        for shard_index in range(args.shards)
    ]
    if args.jobs == 1 or args.shards == 1:
        results = [_gen_one_shard(item) for item in work]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_gen_one_shard, work))
    totals: Counter = Counter()
    for shard_index, count, path, counters in results:
        totals.update(counters)
        print(f"shard {shard_index}: {count} examples -> {path}", file=sys.stderr)
    if args.command == "gen-sql":
        _write_build_stats(args.out, totals)
    return EXIT_OK


def _write_build_stats(out: Path, totals: Counter) -> None:
    """Sidecar JSON: discard counts, truncation count, selection retention."""
    emitted = totals.get("emitted", 0)
    stats = {
        "emitted": emitted,
        "discards": {
            k.removeprefix("discard:"): v
            for k, v in sorted(totals.items())
            if k.startswith("discard:")
        },
        "truncated_db_count": totals.get("truncated_db", 0),
    }
    if "sel_retained" in totals:
        stats["sel_retained"] = totals["sel_retained"]
        stats["sel_retention_ratio"] = (
            round(totals["sel_retained"] / emitted, 4) if emitted else 0.0
        )
    path = out.with_name(out.stem + ".stats.json")
    path.write_text(
        json.dumps(stats, indent=2, sort_keys=False) + "\n", encoding="utf-8"
    )
    print(f"build stats -> {path}", file=sys.stderr)


def _load_single_table(path: Path, table_id: str | None):
    text = path.read_text(encoding="utf-8").strip()
    if not text:
        raise TableFormatError(f"{path}: empty table file")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = None
    if isinstance(obj, dict):
        return table_from_wikisql(obj, fallback_name=path.stem)
    tables = ingest_wikisql(path)
    if table_id is not None:
        for t in tables:
            if t.name == table_id:
                return t
        raise TableFormatError(f"{path}: no table with id {table_id!r}")
    if len(tables) != 1:
        raise TableFormatError(
            f"{path}: {len(tables)} tables; pick one with --table-id"
        )
    return tables[0]


def _run_exec_sql(args: argparse.Namespace) -> int:
    table = _load_single_table(args.table, args.table_id)
    query = parse_sql(args.query)
    print(render_result(execute(query, table)))
    return EXIT_OK


def _run_validate(args: argparse.Namespace) -> int:
    if not 0.0 <= args.sample <= 1.0:
        raise UsageError("--sample must be in [0, 1]")
    for shard in args.shards:
        seen, rechecked = validate_shard(shard, args.sample, args.seed)
        print(f"{shard}: {seen} examples ok, {rechecked} re-executed",
              file=sys.stderr)
    return EXIT_OK


def _run_stats(args: argparse.Namespace) -> int:
    stats = collect_stats(args.shard)
    print(json.dumps(stats.to_json_dict(), indent=2, ensure_ascii=False))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command in ("gen-math", "gen-logic", "gen-sql"):
            return _run_gen(args)
        if args.command == "exec-sql":
            return _run_exec_sql(args)
        if args.command == "validate":
            return _run_validate(args)
        return _run_stats(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # internal invariant violation
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
