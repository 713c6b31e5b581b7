"""SQL-subset engine: tables, query AST, parser, and exact executor."""

from .ast import (
    AGG_FNS,
    ARITH_OPS,
    CMP_OPS,
    Agg,
    And,
    Arith,
    Cmp,
    Col,
    Condition,
    In,
    Or,
    SelectExpr,
    SqlQuery,
    SqlTypeError,
    check_query,
    render_sql,
)
from .executor import EmptyResultError, QueryResult, execute, render_result
from .parser import SqlParseError, parse_sql
from .tables import (
    NUMBER,
    TEXT,
    Column,
    Table,
    TableFormatError,
    format_number,
    ingest_wikisql,
    normalize_column_name,
    parse_number,
    render_cell,
    sanitize_text,
    table_from_wikisql,
)

__all__ = [
    "AGG_FNS",
    "ARITH_OPS",
    "CMP_OPS",
    "Agg",
    "And",
    "Arith",
    "Cmp",
    "Col",
    "Column",
    "Condition",
    "EmptyResultError",
    "In",
    "NUMBER",
    "Or",
    "QueryResult",
    "SelectExpr",
    "SqlParseError",
    "SqlQuery",
    "SqlTypeError",
    "TEXT",
    "Table",
    "TableFormatError",
    "check_query",
    "execute",
    "format_number",
    "ingest_wikisql",
    "normalize_column_name",
    "parse_number",
    "parse_sql",
    "render_cell",
    "render_result",
    "render_sql",
    "sanitize_text",
    "table_from_wikisql",
]
