"""Typed in-memory tables and WikiSQL-format ingestion.

Number cells are `fractions.Fraction`, parsed from decimal strings
(thousands commas stripped), so aggregation is exact. Text cells are
whitespace-collapsed and pipe-free at ingestion: the flattening grammar
uses whitespace tokens and " | " separators, and keeping cells canonical
makes a flattened context reconstruct to exactly the table the executor
saw.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

NUMBER, TEXT = "number", "text"

Cell = "str | Fraction | None"


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Column:
    name: str
    ctype: str

    def __post_init__(self) -> None:
        if self.ctype not in (NUMBER, TEXT):
            raise ValueError(f"bad column type {self.ctype!r}")


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...]
    renamed_columns: bool = False

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"table {self.name!r}: duplicate column names")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table {self.name!r}: row {i} has {len(row)} cells, "
                    f"expected {len(self.columns)}"
                )

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise KeyError(name)

    def column_type(self, name: str) -> str:
        return self.columns[self.column_index(name)].ctype

    def take_rows(self, indices) -> "Table":
        return Table(
            name=self.name,
            columns=self.columns,
            rows=tuple(self.rows[i] for i in indices),
            renamed_columns=self.renamed_columns,
        )


def parse_number(text: str) -> Fraction | None:
    """Decimal string to Fraction; commas stripped; None when unparseable."""
    s = text.strip().replace(",", "")
    if not s:
        return None
    try:
        return Fraction(Decimal(s))
    except (InvalidOperation, ValueError, OverflowError):
        return None


def format_number(x: Fraction) -> str:
    """Canonical decimal rendering: no trailing '.0', minimal digits.

    Non-terminating fractions (only AVG can produce them) are rounded
    half-even to 4 decimal places first.
    """
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return format_number(Fraction(round(x * 10000), 10000))
    places = max(twos, fives)
    digits = str(abs(int(x * 10**places))).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def render_cell(cell) -> str:
    """Cell as it appears in flattened text and results ('' for empty)."""
    if cell is None:
        return ""
    if isinstance(cell, Fraction):
        return format_number(cell)
    return cell


def is_canonical_number(text: str) -> bool:
    """True when text is exactly the canonical rendering of some number."""
    value = parse_number(text)
    return value is not None and format_number(value) == text


def sanitize_text(raw: str) -> str | None:
    """Canonical text-cell form: collapsed whitespace, '|' defused."""
    cleaned = " ".join(raw.replace("|", "/").split())
    return cleaned or None


def normalize_column_name(raw: str) -> str:
    """Lowercase identifier form: non-alphanumeric runs become '_'."""
    name = re.sub(r"[^a-z0-9]+", "_", raw.strip().lower()).strip("_")
    if not name:
        return "col"
    if name[0].isdigit():
        name = "c_" + name
    return name


def _coerce_cell(raw, ctype: str):
    if raw is None:
        return None
    text = raw if isinstance(raw, str) else str(raw)
    if ctype == NUMBER:
        return parse_number(text)
    return sanitize_text(text)


def table_from_wikisql(obj: dict, fallback_name: str = "table") -> Table:
    """Build a Table from one WikiSQL tables-file record.

    Schema: {id?, header: [str], types: [str], rows: [[cell]]}; type
    "real" maps to number, "text" to text. Duplicate normalized column
    names get numeric suffixes (flagged via `renamed_columns`); numeric
    cells that fail coercion become empty.
    """
    if not isinstance(obj, dict):
        raise TableFormatError("table record must be a JSON object")
    name = str(obj.get("id", fallback_name))
    try:
        header = obj["header"]
        types = obj["types"]
        rows = obj["rows"]
    except KeyError as exc:
        raise TableFormatError(f"table {name!r}: missing field {exc}") from exc
    if not isinstance(header, list) or not header:
        raise TableFormatError(f"table {name!r}: header must be a non-empty list")
    if len(types) != len(header):
        raise TableFormatError(
            f"table {name!r}: {len(types)} types for {len(header)} columns"
        )
    columns = []
    seen: dict[str, int] = {}
    renamed = False
    for raw_name, raw_type in zip(header, types):
        if raw_type == "real":
            ctype = NUMBER
        elif raw_type == "text":
            ctype = TEXT
        else:
            raise TableFormatError(f"table {name!r}: unknown column type {raw_type!r}")
        base = normalize_column_name(str(raw_name))
        if base in seen:
            seen[base] += 1
            base = f"{base}_{seen[base]}"
            renamed = True
        seen.setdefault(base, 1)
        columns.append(Column(base, ctype))
    coerced_rows = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(columns):
            raise TableFormatError(
                f"table {name!r}: row {i} has {len(row) if isinstance(row, list) else '?'}"
                f" cells, expected {len(columns)}"
            )
        coerced_rows.append(
            tuple(_coerce_cell(cell, col.ctype) for cell, col in zip(row, columns))
        )
    return Table(
        name=name,
        columns=tuple(columns),
        rows=tuple(coerced_rows),
        renamed_columns=renamed,
    )


def ingest_wikisql(path: str | Path) -> list[Table]:
    """Read a WikiSQL-format tables JSONL file."""
    tables = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TableFormatError(f"line {line_number}: {exc}") from exc
            try:
                tables.append(table_from_wikisql(obj, fallback_name=f"line{line_number}"))
            except TableFormatError as exc:
                raise TableFormatError(f"line {line_number}: {exc}") from exc
    return tables
