"""End-to-end SQL corpus pipeline.

Generation loop per example: pick a table, flatten it under the token
budget, instantiate a template against the *truncated* table, execute,
and keep only non-empty results — so every emitted context provably
suffices to derive the stored result. The selection variant re-parses
stored contexts, keeps examples whose result values all occur as visible
cells, and tags every occurrence with I (O elsewhere).
"""

from __future__ import annotations

import re
from collections import Counter

from ..core import TAG_IN, TAG_OUT, PretrainExample, SeedSpec
from ..rng import Rng
from ..sql.ast import render_sql
from ..sql.executor import EmptyResultError, execute, render_result
from ..sql.parser import parse_sql
from ..sql.tables import Table, render_cell
from .flatten import DEFAULT_TOKEN_BUDGET, FlattenBudgetError, flatten, parse_flattened
from .templates import (
    DEFAULT_TEMPLATES,
    NoCompatibleColumnsError,
    QueryTemplate,
    instantiate,
)

_DOMAIN_TAG = 4
_MAX_ATTEMPTS_PER_EXAMPLE = 1000

# Reserved words of the subset mapped to fixed rare replacement tokens.
# Replacements contain uppercase letters, which normalized column names
# never do, so the mapping inverts without identifier collisions.
RESERVED_KEYWORDS = (
    "SELECT", "WHERE", "AND", "OR", "IN", "COUNT", "SUM", "AVG", "MAX", "MIN",
)
DEFAULT_OBFUSCATION_MAP = {
    "SELECT": "xZq",
    "WHERE": "vQx",
    "AND": "jQz",
    "OR": "qVj",
    "IN": "zQv",
    "COUNT": "kXq",
    "SUM": "sXz",
    "AVG": "gXv",
    "MAX": "mXq",
    "MIN": "nXz",
}


def _split_on_quotes(program: str) -> list[tuple[bool, str]]:
    """(is_quoted, segment) pieces; quoted segments include their quotes."""
    pieces = []
    plain_start = 0
    i = 0
    n = len(program)
    while i < n:
        if program[i] == "'":
            j = i + 1
            while j < n:
                if program[j] == "'":
                    if j + 1 < n and program[j + 1] == "'":
                        j += 2
                        continue
                    break
                j += 1
            if plain_start < i:
                pieces.append((False, program[plain_start:i]))
            pieces.append((True, program[i : j + 1]))
            i = j + 1
            plain_start = i
        else:
            i += 1
    if plain_start < n:
        pieces.append((False, program[plain_start:]))
    return pieces


def _replace_words(segment: str, mapping: dict[str, str]) -> str:
    pattern = re.compile(
        r"\b(" + "|".join(re.escape(k) for k in sorted(mapping, key=len, reverse=True)) + r")\b"
    )
    return pattern.sub(lambda m: mapping[m.group(1)], segment)


def obfuscate_keywords(program: str, mapping: dict[str, str]) -> str:
    """Replace reserved words outside quoted strings; invertible."""
    missing = [k for k in RESERVED_KEYWORDS if k not in mapping]
    if missing:
        raise ValueError(f"mapping must cover all reserved words, missing {missing}")
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("mapping must be injective")
    return "".join(
        seg if quoted else _replace_words(seg, mapping)
        for quoted, seg in _split_on_quotes(program)
    )


def deobfuscate_keywords(program: str, mapping: dict[str, str]) -> str:
    inverse = {v: k for k, v in mapping.items()}
    return "".join(
        seg if quoted else _replace_words(seg, inverse)
        for quoted, seg in _split_on_quotes(program)
    )


def _shapes_index(templates) -> tuple[tuple[str, ...], dict[str, list[QueryTemplate]]]:
    by_shape: dict[str, list[QueryTemplate]] = {}
    for tpl in templates:
        by_shape.setdefault(tpl.shape, []).append(tpl)
    return tuple(by_shape), by_shape


def build_sql_gen(
    tables: list[Table],
    count: int,
    seed: SeedSpec,
    templates: tuple[QueryTemplate, ...] = DEFAULT_TEMPLATES,
    budget: int = DEFAULT_TOKEN_BUDGET,
    counters: Counter | None = None,
) -> list[PretrainExample]:
    """Generate this shard's slice of a `count`-example sql_gen corpus.

    Each global index runs its own rejection loop inside its own random
    stream, so an emitted example is a pure function of (master_seed,
    index) regardless of how many draws its neighbours discarded.
    Discard reasons land in `counters` when given.
    """
    usable = [t for t in tables if t.rows]
    if not usable:
        raise ValueError("no non-empty tables to build from")
    if not templates:
        raise ValueError("no templates to build from")
    shapes, by_shape = _shapes_index(templates)
    counters = counters if counters is not None else Counter()
    examples = []
    for g in seed.global_indices(count):
        rng = Rng(seed.master_seed, _DOMAIN_TAG, g)
        for _ in range(_MAX_ATTEMPTS_PER_EXAMPLE):
            table = usable[rng.below(len(usable))]
            try:
                fdb = flatten(table, budget, rng)
            except FlattenBudgetError:
                counters["discard:flatten_budget"] += 1
                continue
            truncated = table.take_rows(fdb.kept_rows)
            shape = shapes[rng.below(len(shapes))]
            group = by_shape[shape]
            tpl = group[rng.below(len(group))]
            try:
                query = instantiate(tpl, truncated, rng)
            except NoCompatibleColumnsError:
                counters["discard:no_compatible_columns"] += 1
                continue
            try:
                result = execute(query, truncated)
            except EmptyResultError:
                counters["discard:empty_result"] += 1
                continue
            meta = {
                "seed": str(seed.master_seed),
                "template": tpl.id,
                "dropped_rows": str(fdb.dropped_rows),
            }
            if fdb.dropped_rows:
                counters["truncated_db"] += 1
            if table.renamed_columns:
                meta["renamed_columns"] = "1"
            examples.append(
                PretrainExample(
                    id=f"sql_gen-{seed.master_seed:016x}-{g:08d}",
                    task="sql_gen",
                    context=fdb.text,
                    program=render_sql(query),
                    result=render_result(result),
                    meta=meta,
                )
            )
            counters["emitted"] += 1
            break
        else:
            raise RuntimeError(
                f"no viable example found for index {g} after "
                f"{_MAX_ATTEMPTS_PER_EXAMPLE} attempts; check tables/templates"
            )
    return examples


def selection_tags(
    context: str, result_values: set[str]
) -> tuple[str, ...] | None:
    """I/O tags for `context`, or None when a result value is not on view.

    Tags every token of every cell whose rendered value is in
    `result_values`; requires each result value to match at least one
    cell.
    """
    _, spans = parse_flattened(context)
    tokens = context.split()
    tags = [TAG_OUT] * len(tokens)
    seen: set[str] = set()
    for span in spans:
        cell_text = " ".join(tokens[span.token_start : span.token_end])
        if cell_text and cell_text in result_values:
            seen.add(cell_text)
            for i in range(span.token_start, span.token_end):
                tags[i] = TAG_IN
    if seen != result_values:
        return None
    return tuple(tags)


def build_sql_sel(gen_examples: list[PretrainExample]) -> list[PretrainExample]:
    """Derive the selection-task corpus from generation-task examples.

    Re-executes each program against the table reconstructed from the
    stored context, retains the example iff every result value occurs as
    a visible cell, and attaches the I/O tag alignment.
    """
    selected = []
    for ex in gen_examples:
        if ex.task != "sql_gen":
            raise ValueError(f"example {ex.id!r} has task {ex.task!r}, need sql_gen")
        table, _ = parse_flattened(ex.context)
        result = execute(parse_sql(ex.program), table)
        values = {render_cell(v) for v in result.values}
        tags = selection_tags(ex.context, values)
        if tags is None:
            continue
        meta = dict(ex.meta)
        meta["source"] = ex.id
        selected.append(
            PretrainExample(
                id="sql_sel" + ex.id.removeprefix("sql_gen"),
                task="sql_sel",
                context=ex.context,
                program=ex.program,
                result=ex.result,
                tags=tags,
                meta=meta,
            )
        )
    return selected


def obfuscate_examples(
    examples: list[PretrainExample], mapping: dict[str, str] | None = None
) -> list[PretrainExample]:
    """Unnatural-program variant: reserved words swapped for rare tokens."""
    label = "custom"
    if mapping is None:
        mapping = DEFAULT_OBFUSCATION_MAP
        label = "default"
    out = []
    for ex in examples:
        meta = dict(ex.meta)
        meta["obfuscation"] = label
        out.append(
            PretrainExample(
                id=ex.id,
                task=ex.task,
                context=ex.context,
                program=obfuscate_keywords(ex.program, mapping),
                result=ex.result,
                tags=ex.tags,
                meta=meta,
            )
        )
    return out
