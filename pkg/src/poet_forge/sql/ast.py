"""Query AST for the supported SQL subset, with canonical rendering.

The subset covers single-table selection of one expression (bare column,
aggregate, or two-operand arithmetic) under an optional condition tree of
comparisons, AND/OR, and one level of IN-subquery. Canonical text form:
uppercase keywords, single spaces, string values single-quoted with ''
escaping, grouping parentheses spaced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .tables import NUMBER, Table, format_number

AGG_FNS = ("COUNT", "SUM", "AVG", "MAX", "MIN")
CMP_OPS = ("=", "!=", ">", "<", ">=", "<=")
ORDER_OPS = (">", "<", ">=", "<=")
ARITH_OPS = ("+", "-")


class SqlTypeError(TypeError):
    """Query is not well-typed against the table schema."""


@dataclass(frozen=True)
class Col:
    name: str


@dataclass(frozen=True)
class Agg:
    fn: str
    col: str

    def __post_init__(self) -> None:
        if self.fn not in AGG_FNS:
            raise ValueError(f"unknown aggregate {self.fn!r}")


@dataclass(frozen=True)
class Arith:
    op: str
    left: "Col | Agg"
    right: "Col | Agg"

    def __post_init__(self) -> None:
        if self.op not in ARITH_OPS:
            raise ValueError(f"unknown arithmetic op {self.op!r}")


@dataclass(frozen=True)
class Cmp:
    col: str
    op: str
    value: "str | Fraction"

    def __post_init__(self) -> None:
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison op {self.op!r}")


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class In:
    col: str
    sub: "SqlQuery"


@dataclass(frozen=True)
class SqlQuery:
    select: "Col | Agg | Arith"
    where: "Condition | None" = None


Condition = Cmp | And | Or | In
SelectExpr = Col | Agg | Arith


def quote_string(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def render_value(value) -> str:
    if isinstance(value, Fraction):
        return format_number(value)
    return quote_string(value)


def _render_select(expr: SelectExpr) -> str:
    if isinstance(expr, Col):
        return expr.name
    if isinstance(expr, Agg):
        return f"{expr.fn}({expr.col})"
    return f"{_render_select(expr.left)} {expr.op} {_render_select(expr.right)}"


# condition precedence: OR binds loosest, AND tighter, atoms tightest
def _cond_precedence(cond: Condition) -> int:
    if isinstance(cond, Or):
        return 1
    if isinstance(cond, And):
        return 2
    return 3


def _render_cond(cond: Condition) -> str:
    if isinstance(cond, Cmp):
        return f"{cond.col} {cond.op} {render_value(cond.value)}"
    if isinstance(cond, In):
        return f"{cond.col} IN ( {render_sql(cond.sub)} )"
    word = "AND" if isinstance(cond, And) else "OR"
    prec = _cond_precedence(cond)
    left = _render_cond(cond.left)
    if _cond_precedence(cond.left) < prec:
        left = f"( {left} )"
    right = _render_cond(cond.right)
    # parenthesize equal precedence on the right so rendering is
    # unambiguous for right-nested trees (parser folds left)
    if _cond_precedence(cond.right) <= prec:
        right = f"( {right} )"
    return f"{left} {word} {right}"


def render_sql(q: SqlQuery) -> str:
    text = f"SELECT {_render_select(q.select)}"
    if q.where is not None:
        text += f" WHERE {_render_cond(q.where)}"
    return text


def _check_agg(agg: Agg, table: Table) -> None:
    if agg.fn != "COUNT" and table.column_type(agg.col) != NUMBER:
        raise SqlTypeError(f"{agg.fn} requires a number column, got {agg.col!r}")


def _check_select(expr: SelectExpr, table: Table) -> None:
    if isinstance(expr, Col):
        table.column_index(expr.name)
    elif isinstance(expr, Agg):
        table.column_index(expr.col)
        _check_agg(expr, table)
    elif isinstance(expr, Arith):
        operands = (expr.left, expr.right)
        if not (
            all(isinstance(o, Col) for o in operands)
            or all(isinstance(o, Agg) for o in operands)
        ):
            raise SqlTypeError("arithmetic operands must be both columns or both aggregates")
        for operand in operands:
            if isinstance(operand, Col):
                if table.column_type(operand.name) != NUMBER:
                    raise SqlTypeError(
                        f"arithmetic requires number columns, got {operand.name!r}"
                    )
            else:
                table.column_index(operand.col)
                _check_agg(operand, table)
    else:
        raise SqlTypeError(f"bad select expression {expr!r}")


def _check_cond(cond: Condition, table: Table, depth: int) -> None:
    if isinstance(cond, Cmp):
        ctype = table.column_type(cond.col)
        if cond.op in ORDER_OPS:
            if ctype != NUMBER:
                raise SqlTypeError(f"{cond.op} requires a number column, got {cond.col!r}")
            if not isinstance(cond.value, Fraction):
                raise SqlTypeError(f"{cond.op} requires a numeric value")
        elif isinstance(cond.value, Fraction) and ctype != NUMBER:
            # string equality is legal on any column (compares canonical
            # rendered form); numeric equality needs a number column
            raise SqlTypeError(f"numeric equality on text column {cond.col!r}")
    elif isinstance(cond, In):
        if depth > 0:
            raise SqlTypeError("IN subqueries cannot nest")
        table.column_index(cond.col)
        if not isinstance(cond.sub.select, Col):
            raise SqlTypeError("IN subquery must select a single bare column")
        check_query(cond.sub, table, _depth=depth + 1)
    elif isinstance(cond, (And, Or)):
        _check_cond(cond.left, table, depth)
        _check_cond(cond.right, table, depth)
    else:
        raise SqlTypeError(f"bad condition {cond!r}")


def check_query(q: SqlQuery, table: Table, _depth: int = 0) -> None:
    """Raise SqlTypeError unless q is well-typed against the table."""
    try:
        _check_select(q.select, table)
        if q.where is not None:
            _check_cond(q.where, table, _depth)
    except KeyError as exc:
        raise SqlTypeError(f"unknown column {exc.args[0]!r}") from exc
