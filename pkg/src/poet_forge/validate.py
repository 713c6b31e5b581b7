"""Shard validation: schema checks plus result re-derivation.

Every line is schema-validated; a deterministic sample of each shard is
re-executed — the program is parsed back, run against the context, and
the stored result (and tag alignment, for selection examples) must
reproduce exactly.
"""

from __future__ import annotations

from .core import PretrainExample, iter_shard, validate_example
from .corpus.build import (
    DEFAULT_OBFUSCATION_MAP,
    deobfuscate_keywords,
    selection_tags,
)
from .corpus.flatten import parse_flattened
from .logicgen import entailed, parse_premises, parse_stmt
from .mathgen import MathContext, eval_math, parse_math_bindings, parse_math_program
from .rng import Rng
from .sql.executor import EmptyResultError, execute, render_result
from .sql.parser import parse_sql
from .sql.tables import render_cell

_DOMAIN_TAG = 5


class ValidationMismatch(ValueError):
    """Stored example disagrees with re-execution; carries the id."""

    def __init__(self, example_id: str, message: str) -> None:
        super().__init__(f"example {example_id!r}: {message}")
        self.example_id = example_id


def _recheck_math(ex: PretrainExample) -> None:
    expr = parse_math_program(ex.program)
    bindings = parse_math_bindings(ex.context)
    needed = len({name for _, name in expr.terms})
    ctx = MathContext(
        bindings=bindings,
        necessary_count=needed,
        irrelevant_count=len(bindings) - needed,
    )
    derived = eval_math(expr, ctx).render()
    if derived != ex.result:
        raise ValidationMismatch(ex.id, f"re-evaluation gives {derived!r}")


def _recheck_logic(ex: PretrainExample) -> None:
    premises = parse_premises(ex.context)
    conclusion = parse_stmt(ex.program)
    derived = "True" if entailed(premises, conclusion) else "False"
    if derived != ex.result:
        raise ValidationMismatch(ex.id, f"re-evaluation gives {derived!r}")


def _recheck_sql(ex: PretrainExample) -> None:
    program = ex.program
    if ex.meta.get("obfuscation") == "default":
        program = deobfuscate_keywords(program, DEFAULT_OBFUSCATION_MAP)
    elif ex.meta.get("obfuscation"):
        raise ValidationMismatch(
            ex.id, "cannot re-execute custom-obfuscated program"
        )
    table, _ = parse_flattened(ex.context)
    query = parse_sql(program)
    result = execute(query, table)
    derived = render_result(result)
    if derived != ex.result:
        raise ValidationMismatch(ex.id, f"re-execution gives {derived!r}")
    if ex.task == "sql_sel":
        values = {render_cell(v) for v in result.values}
        tags = selection_tags(ex.context, values)
        if tags is None:
            raise ValidationMismatch(ex.id, "result values not all visible in context")
        if tags != ex.tags:
            raise ValidationMismatch(ex.id, "tag alignment does not reproduce")


def recheck_example(ex: PretrainExample) -> None:
    """Re-derive the stored result; raises ValidationMismatch on any drift.

    Parse or execution failures on corrupted data surface as mismatches
    too, always naming the offending id.
    """
    try:
        if ex.task == "math":
            _recheck_math(ex)
        elif ex.task == "logic":
            _recheck_logic(ex)
        elif ex.task in ("sql_gen", "sql_sel"):
            _recheck_sql(ex)
        else:
            raise ValidationMismatch(ex.id, f"unknown task {ex.task!r}")
    except ValidationMismatch:
        raise
    except (ValueError, TypeError, KeyError, EmptyResultError) as exc:
        raise ValidationMismatch(ex.id, f"cannot re-derive: {exc}") from exc


def validate_shard(
    path, sample_fraction: float = 0.1, sample_seed: int = 0
) -> tuple[int, int]:
    """Validate one shard file; returns (examples_seen, examples_rechecked).

    Schema invariants are checked on every line. Re-execution runs on a
    deterministic sample: line i is picked when a stream keyed by
    (sample_seed, i) draws below the fraction.
    """
    seen = rechecked = 0
    ids: set[str] = set()
    for line_number, ex in iter_shard(path):
        validate_example(ex)
        if ex.id in ids:
            raise ValidationMismatch(ex.id, f"duplicate id at line {line_number}")
        ids.add(ex.id)
        seen += 1
        if sample_fraction >= 1.0 or Rng(
            sample_seed, _DOMAIN_TAG, line_number
        ).chance(sample_fraction):
            recheck_example(ex)
            rechecked += 1
    return seen, rechecked
