"""Randomized fixtures: tables, queries, and WikiSQL-format files.

Uses plain `random.Random` — fixtures only need intra-test repeatability,
not the cross-platform byte stability the package RNG provides.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

from poet_forge.sql.ast import Agg, And, Arith, Cmp, Col, In, Or, SqlQuery, check_query
from poet_forge.sql.tables import NUMBER, TEXT, Column, Table, format_number

WORDS = (
    "athens", "oslo", "lima", "quito", "cairo", "perth", "turin", "osaka",
    "red", "blue", "green", "gold", "east", "west", "north", "south",
)

TWO_TOKEN_WORDS = ("new york", "rio grande", "los angeles", "cape town")

ORDER_OPS = (">", "<", ">=", "<=")
EQ_OPS = ("=", "!=")
AGG_FNS = ("COUNT", "SUM", "AVG", "MAX", "MIN")


def random_number(rnd: random.Random) -> Fraction:
    # small range on purpose: duplicates and boundary hits matter
    base = rnd.randint(-30, 30)
    if rnd.random() < 0.4:
        return Fraction(base * 10 + rnd.randint(0, 9), 10)
    return Fraction(base)


def random_text(rnd: random.Random) -> str:
    if rnd.random() < 0.2:
        return rnd.choice(TWO_TOKEN_WORDS)
    return rnd.choice(WORDS)


def random_table(rnd: random.Random, max_rows: int = 8, max_cols: int = 5) -> Table:
    n_cols = rnd.randint(1, max_cols)
    n_rows = rnd.randint(1, max_rows)
    columns = tuple(
        Column(f"c{i}", NUMBER if rnd.random() < 0.55 else TEXT)
        for i in range(n_cols)
    )
    rows = []
    for _ in range(n_rows):
        row = []
        for col in columns:
            if rnd.random() < 0.12:
                row.append(None)
            elif col.ctype == NUMBER:
                row.append(random_number(rnd))
            else:
                row.append(random_text(rnd))
        rows.append(tuple(row))
    return Table(name="t", columns=columns, rows=tuple(rows))


def _cols_of(table: Table, ctype: str | None = None) -> list[str]:
    return [c.name for c in table.columns if ctype is None or c.ctype == ctype]


def _value_for(rnd: random.Random, table: Table, col: str):
    """A comparison value: usually a real cell, sometimes fresh."""
    idx = table.column_index(col)
    cells = [r[idx] for r in table.rows if r[idx] is not None]
    if cells and rnd.random() < 0.7:
        return rnd.choice(cells)
    if table.column_type(col) == NUMBER:
        return random_number(rnd)
    return random_text(rnd)


def random_cmp(rnd: random.Random, table: Table) -> Cmp | None:
    number_cols = _cols_of(table, NUMBER)
    if number_cols and rnd.random() < 0.5:
        col = rnd.choice(number_cols)
        op = rnd.choice(ORDER_OPS + EQ_OPS)
        value = _value_for(rnd, table, col)
        if not isinstance(value, Fraction):
            value = random_number(rnd)
        return Cmp(col, op, value)
    col = rnd.choice(_cols_of(table))
    value = _value_for(rnd, table, col)
    if isinstance(value, Fraction) and rnd.random() < 0.3:
        # string-form equality against a number column is legal
        value = format_number(value)
    op = rnd.choice(EQ_OPS)
    return Cmp(col, op, value)


def random_condition(rnd: random.Random, table: Table, allow_in: bool = True, depth: int = 0):
    roll = rnd.random()
    if depth < 2 and roll < 0.25:
        ctor = And if rnd.random() < 0.5 else Or
        return ctor(
            random_condition(rnd, table, allow_in, depth + 1),
            random_condition(rnd, table, allow_in, depth + 1),
        )
    if allow_in and roll < 0.4:
        outer = rnd.choice(_cols_of(table))
        inner_select = rnd.choice(_cols_of(table))
        inner_where = random_cmp(rnd, table) if rnd.random() < 0.8 else None
        return In(outer, SqlQuery(Col(inner_select), inner_where))
    return random_cmp(rnd, table)


def random_query(rnd: random.Random, table: Table, shape: str) -> SqlQuery | None:
    """A well-typed random query of the given shape, or None if infeasible."""
    number_cols = _cols_of(table, NUMBER)
    any_cols = _cols_of(table)
    if shape == "arithmetic":
        if rnd.random() < 0.3:
            if not number_cols:
                return None
            fns = [rnd.choice(AGG_FNS) for _ in range(2)]
            cols = [
                rnd.choice(any_cols) if fn == "COUNT" else rnd.choice(number_cols)
                for fn in fns
            ]
            select = Arith(rnd.choice("+-"), Agg(fns[0], cols[0]), Agg(fns[1], cols[1]))
        else:
            if len(number_cols) < 2:
                return None
            a, b = rnd.sample(number_cols, 2)
            select = Arith(rnd.choice("+-"), Col(a), Col(b))
        where = random_cmp(rnd, table) if rnd.random() < 0.3 else None
        return SqlQuery(select, where)
    if shape == "superlative":
        if not number_cols:
            return None
        select = Agg(rnd.choice(("MAX", "MIN")), rnd.choice(number_cols))
        where = random_cmp(rnd, table) if rnd.random() < 0.3 else None
        return SqlQuery(select, where)
    if shape == "comparative":
        if not number_cols:
            return None
        value = _value_for(rnd, table, rnd.choice(number_cols))
        col2 = rnd.choice(number_cols)
        if not isinstance(value, Fraction):
            value = random_number(rnd)
        return SqlQuery(
            Col(rnd.choice(any_cols)), Cmp(col2, rnd.choice(ORDER_OPS), value)
        )
    if shape == "aggregation":
        fn = rnd.choice(AGG_FNS)
        pool = any_cols if fn == "COUNT" else number_cols
        if not pool:
            return None
        where = random_cmp(rnd, table) if rnd.random() < 0.4 else None
        return SqlQuery(Agg(fn, rnd.choice(pool)), where)
    if shape == "union":
        left = random_cmp(rnd, table)
        right = random_cmp(rnd, table)
        return SqlQuery(Col(rnd.choice(any_cols)), Or(left, right))
    if shape == "nested":
        cond = random_condition(rnd, table, allow_in=True)
        if not isinstance(cond, In):
            inner_where = random_cmp(rnd, table) if rnd.random() < 0.8 else None
            cond = In(
                rnd.choice(any_cols),
                SqlQuery(Col(rnd.choice(any_cols)), inner_where),
            )
        return SqlQuery(Col(rnd.choice(any_cols)), cond)
    if shape == "plain_select":
        where = random_cmp(rnd, table) if rnd.random() < 0.6 else None
        return SqlQuery(Col(rnd.choice(any_cols)), where)
    raise ValueError(f"unknown shape {shape!r}")


def checked_random_query(rnd: random.Random, table: Table, shape: str) -> SqlQuery | None:
    q = random_query(rnd, table, shape)
    if q is not None:
        check_query(q, table)  # fixture bug if this ever raises
    return q


# ---------------------------------------------------------------------------
# WikiSQL-format fixture files


_HEADER_POOL = (
    "Host City", "Year", "No. of episodes", "Casualties", "Team (A)",
    "Attendance", "Country", "Notes", "Score", "Rank", "Player name",
    "Height (m)", "Date", "Result",
)


def _raw_number_cell(rnd: random.Random) -> object:
    roll = rnd.random()
    value = rnd.randint(-2000, 9999)
    if roll < 0.15:
        return ""  # becomes empty
    if roll < 0.3:
        return f"{abs(value):,}"  # thousands comma form
    if roll < 0.45:
        return round(rnd.uniform(0, 500), 1)
    if roll < 0.5:
        return "n/a"  # non-parsing numeric -> empty
    return value


def _raw_text_cell(rnd: random.Random) -> str:
    n = rnd.randint(1, 3)
    words = [rnd.choice(WORDS) for _ in range(n)]
    if rnd.random() < 0.05:
        words.insert(1 if n > 1 else 0, "|")  # ingest must defuse pipes
    if rnd.random() < 0.1:
        return str(rnd.randint(1900, 2030))  # numeric-looking text cell
    return " ".join(words)


def random_wikisql_record(rnd: random.Random, index: int, big: bool = False) -> dict:
    n_cols = rnd.randint(2, 6)
    n_rows = rnd.randint(12, 60) if big else rnd.randint(1, 12)
    header = rnd.sample(_HEADER_POOL, n_cols)
    types = [rnd.choice(("real", "text")) for _ in range(n_cols)]
    if "real" not in types:
        types[rnd.randrange(n_cols)] = "real"
    rows = []
    for _ in range(n_rows):
        row = []
        for t in types:
            row.append(_raw_number_cell(rnd) if t == "real" else _raw_text_cell(rnd))
        rows.append(row)
    return {"id": f"fixture-{index}", "header": header, "types": types, "rows": rows}


def write_wikisql_fixture(
    path: Path, n_tables: int, seed: int, big_fraction: float = 0.3
) -> None:
    rnd = random.Random(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(n_tables):
            record = random_wikisql_record(rnd, i, big=rnd.random() < big_fraction)
            fh.write(json.dumps(record) + "\n")
