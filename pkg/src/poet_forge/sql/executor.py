"""Exact executor for the SQL subset.

Semantics (the contract the differential oracle is coded against):

- WHERE filters rows; no WHERE keeps all rows, in order.
- Empty cells fail every comparison (including !=) and are skipped by
  aggregates, bare-column selection, and element-wise arithmetic.
- Numeric comparisons (>, <, >=, <=, numeric =/!=) compare exact values.
  Equality against a quoted string compares the cell's canonical rendered
  form; IN membership likewise compares rendered forms.
- COUNT counts non-empty cells of the surviving rows; SUM/AVG/MAX/MIN
  fold the numeric cells; AVG is the exact rational mean rounded
  half-even to at most 4 decimal places.
- Column arithmetic is element-wise over rows where both cells are
  non-empty; aggregate arithmetic is scalar.
- EmptyResult: any selection producing zero values, any non-COUNT
  aggregate with zero numeric cells, and any aggregate whose WHERE
  matched zero rows. Bare COUNT with no WHERE always yields a value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ast import (
    Agg,
    And,
    Arith,
    Cmp,
    Col,
    Condition,
    In,
    Or,
    SqlQuery,
    check_query,
)
from .tables import Table, format_number, render_cell


class EmptyResultError(Exception):
    """Execution produced zero values; generators discard such examples."""


@dataclass(frozen=True)
class QueryResult:
    values: tuple


def render_result(r: QueryResult) -> str:
    return ", ".join(render_cell(v) for v in r.values)


def _quantize_avg(value: Fraction) -> Fraction:
    return Fraction(round(value * 10000), 10000)


def _make_predicate(cond: Condition, table: Table):
    """Compile a condition into row -> bool (subqueries evaluated once)."""
    if isinstance(cond, Cmp):
        idx = table.column_index(cond.col)
        op, value = cond.op, cond.value
        if isinstance(value, str):
            # canonical rendered-form equality; only =/!= typecheck
            if op == "=":
                return lambda row: row[idx] is not None and render_cell(row[idx]) == value
            return lambda row: row[idx] is not None and render_cell(row[idx]) != value

        def numeric(row, idx=idx, op=op, value=value):
            cell = row[idx]
            if not isinstance(cell, Fraction):
                return False
            if op == "=":
                return cell == value
            if op == "!=":
                return cell != value
            if op == ">":
                return cell > value
            if op == "<":
                return cell < value
            if op == ">=":
                return cell >= value
            return cell <= value

        return numeric
    if isinstance(cond, In):
        idx = table.column_index(cond.col)
        try:
            members = {render_cell(v) for v in execute(cond.sub, table).values}
        except EmptyResultError:
            members = set()
        return lambda row: row[idx] is not None and render_cell(row[idx]) in members
    if isinstance(cond, And):
        left = _make_predicate(cond.left, table)
        right = _make_predicate(cond.right, table)
        return lambda row: left(row) and right(row)
    if isinstance(cond, Or):
        left = _make_predicate(cond.left, table)
        right = _make_predicate(cond.right, table)
        return lambda row: left(row) or right(row)
    raise AssertionError(f"unreachable condition node {cond!r}")


def _agg_value(agg: Agg, rows, table: Table, where_present: bool):
    if where_present and not rows:
        raise EmptyResultError(f"{agg.fn}({agg.col}): WHERE matched no rows")
    idx = table.column_index(agg.col)
    if agg.fn == "COUNT":
        return Fraction(sum(1 for row in rows if row[idx] is not None))
    cells = [row[idx] for row in rows if isinstance(row[idx], Fraction)]
    if not cells:
        raise EmptyResultError(f"{agg.fn}({agg.col}): no numeric cells")
    if agg.fn == "SUM":
        return sum(cells)
    if agg.fn == "AVG":
        return _quantize_avg(Fraction(sum(cells), len(cells)))
    if agg.fn == "MAX":
        return max(cells)
    return min(cells)


def execute(q: SqlQuery, table: Table) -> QueryResult:
    """Run a well-typed query; raises SqlTypeError / EmptyResultError."""
    check_query(q, table)
    if q.where is None:
        rows = list(table.rows)
    else:
        predicate = _make_predicate(q.where, table)
        rows = [row for row in table.rows if predicate(row)]
    where_present = q.where is not None
    select = q.select
    if isinstance(select, Col):
        idx = table.column_index(select.name)
        values = [row[idx] for row in rows if row[idx] is not None]
    elif isinstance(select, Agg):
        values = [_agg_value(select, rows, table, where_present)]
    elif isinstance(select, Arith) and isinstance(select.left, Col):
        li = table.column_index(select.left.name)
        ri = table.column_index(select.right.name)
        sign = 1 if select.op == "+" else -1
        values = [
            row[li] + sign * row[ri]
            for row in rows
            if isinstance(row[li], Fraction) and isinstance(row[ri], Fraction)
        ]
    else:
        left = _agg_value(select.left, rows, table, where_present)
        right = _agg_value(select.right, rows, table, where_present)
        values = [left + right if select.op == "+" else left - right]
    if not values:
        raise EmptyResultError("zero surviving values")
    return QueryResult(tuple(values))


__all__ = [
    "EmptyResultError",
    "QueryResult",
    "execute",
    "format_number",
    "render_result",
]
