"""Table linearization under a whitespace-token budget.

Grammar (bit-exact, one space between tokens):

    HEAD : col1 | col2 | ... ROW 1 : cell | cell | ... ROW 2 : ...

Empty cells contribute zero tokens. Oversized tables lose uniformly
random rows until the token count fits the budget; survivors keep their
order and are renumbered 1..n. `parse_flattened` inverts the rendering,
re-inferring column types conservatively (a column is numeric only if
every non-empty cell is a canonical number rendering), which is exactly
the information the text preserves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from ..core import SeedSpec
from ..rng import Rng
from ..sql.tables import (
    NUMBER,
    TEXT,
    Column,
    Table,
    is_canonical_number,
    parse_number,
    render_cell,
)

DEFAULT_TOKEN_BUDGET = 450

_DOMAIN_TAG = 3


class FlattenBudgetError(ValueError):
    """Budget cannot fit the header plus a single row."""


class ContextFormatError(ValueError):
    """Flattened text does not match the linearization grammar."""


class CellSpan(NamedTuple):
    row: int
    col: int
    token_start: int
    token_end: int


@dataclass(frozen=True)
class FlattenedDb:
    text: str
    cell_spans: tuple[CellSpan, ...]
    token_count: int
    dropped_rows: int
    kept_rows: tuple[int, ...]


@lru_cache(maxsize=4096)
def _prep(table: Table):
    """Per-table render units: header tokens and per-row cell token lists."""
    header = ["HEAD", ":"]
    for i, col in enumerate(table.columns):
        if i:
            header.append("|")
        header.extend(col.name.split())
    row_cells = []
    for row in table.rows:
        row_cells.append(tuple(tuple(render_cell(cell).split()) for cell in row))
    n_seps = len(table.columns) - 1
    row_costs = [
        3 + n_seps + sum(len(cell) for cell in cells) for cells in row_cells
    ]
    return header, row_cells, row_costs


def flatten(table: Table, budget: int = DEFAULT_TOKEN_BUDGET, rng=None) -> FlattenedDb:
    """Linearize `table` to at most `budget` whitespace tokens.

    `rng` may be an Rng stream or a SeedSpec (for standalone calls); it is
    consumed only when rows must be dropped.
    """
    if isinstance(rng, SeedSpec):
        rng = Rng(rng.master_seed, _DOMAIN_TAG, rng.shard_index)
    header, row_cells, row_costs = _prep(table)
    survivors = list(range(len(table.rows)))
    total = len(header) + sum(row_costs)
    dropped = 0
    while total > budget and len(survivors) > 1:
        if rng is None:
            raise ValueError("row dropping required but no rng given")
        victim = rng.below(len(survivors))
        total -= row_costs[survivors.pop(victim)]
        dropped += 1
    if total > budget:
        raise FlattenBudgetError(
            f"table {table.name!r}: header plus one row needs {total} tokens, "
            f"budget is {budget}"
        )
    tokens = list(header)
    spans = []
    for out_row, orig_row in enumerate(survivors):
        tokens.extend(("ROW", str(out_row + 1), ":"))
        for col, cell_tokens in enumerate(row_cells[orig_row]):
            if col:
                tokens.append("|")
            start = len(tokens)
            tokens.extend(cell_tokens)
            spans.append(CellSpan(out_row, col, start, len(tokens)))
    return FlattenedDb(
        text=" ".join(tokens),
        cell_spans=tuple(spans),
        token_count=len(tokens),
        dropped_rows=dropped,
        kept_rows=tuple(survivors),
    )


def _split_cells(tokens: list[str], start: int, end: int):
    """Token range into per-cell (text, span) groups split on '|'."""
    cells = []
    cell_start = start
    for i in range(start, end + 1):
        if i == end or tokens[i] == "|":
            cells.append((" ".join(tokens[cell_start:i]), (cell_start, i)))
            cell_start = i + 1
    return cells


def parse_flattened(text: str) -> tuple[Table, tuple[CellSpan, ...]]:
    """Reconstruct the table a flattened context renders, with cell spans."""
    tokens = text.split()
    if tokens[:2] != ["HEAD", ":"]:
        raise ContextFormatError("context must start with 'HEAD :'")

    def find_marker(row_number: int, from_pos: int) -> int:
        pattern = ["ROW", str(row_number), ":"]
        for i in range(from_pos, len(tokens) - 2):
            if tokens[i : i + 3] == pattern:
                return i
        return -1

    first_row = find_marker(1, 2)
    header_end = first_row if first_row != -1 else len(tokens)
    names = [cell for cell, _ in _split_cells(tokens, 2, header_end)]
    if any(not name for name in names):
        raise ContextFormatError("empty column name in header")
    n_cols = len(names)

    raw_rows: list[list[tuple[str, tuple[int, int]]]] = []
    pos = first_row
    row_number = 1
    while pos != -1:
        next_pos = find_marker(row_number + 1, pos + 3)
        cell_end = next_pos if next_pos != -1 else len(tokens)
        cells = _split_cells(tokens, pos + 3, cell_end)
        if len(cells) != n_cols:
            raise ContextFormatError(
                f"row {row_number} has {len(cells)} cells, expected {n_cols}"
            )
        raw_rows.append(cells)
        pos = next_pos
        row_number += 1

    numeric_col = [
        all(not cell or is_canonical_number(cell) for cell, _ in (row[c] for row in raw_rows))
        for c in range(n_cols)
    ]
    columns = tuple(
        Column(name, NUMBER if numeric_col[c] else TEXT)
        for c, name in enumerate(names)
    )
    rows = []
    spans = []
    for r, row in enumerate(raw_rows):
        cells = []
        for c, (cell_text, (start, end)) in enumerate(row):
            if not cell_text:
                cells.append(None)
            elif numeric_col[c]:
                cells.append(parse_number(cell_text))
            else:
                cells.append(cell_text)
            spans.append(CellSpan(r, c, start, end))
        rows.append(tuple(cells))
    table = Table(name="context", columns=columns, rows=tuple(rows))
    return table, tuple(spans)
