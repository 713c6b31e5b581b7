"""Query templates: the seven reasoning shapes with [COL]/[VAL] slots.

A template is data (id, shape, slots, choices) plus a shape-specific
assembly rule. COL slots bind distinct table columns of a required type;
VAL slots draw a non-empty cell of the column bound by their source COL
slot; `choices` picks function/operator variants. Templates load from a
JSON list of records (see README for the schema).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..rng import Rng
from ..sql.ast import Agg, Arith, Cmp, Col, Or, In, SqlQuery
from ..sql.tables import NUMBER, Table

SHAPES = (
    "arithmetic",
    "superlative",
    "comparative",
    "aggregation",
    "union",
    "nested",
    "plain_select",
)

ANY = "any"


class NoCompatibleColumnsError(Exception):
    """The table cannot fill this template's slots."""


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: str  # "col" or "val"
    ctype: str = ANY  # col slots: required column type
    source: str = ""  # val slots: name of the col slot the value comes from

    def __post_init__(self) -> None:
        if self.kind not in ("col", "val"):
            raise ValueError(f"bad slot kind {self.kind!r}")
        if self.kind == "col" and self.ctype not in (ANY, NUMBER, "text"):
            raise ValueError(f"bad slot ctype {self.ctype!r}")
        if self.kind == "val" and not self.source:
            raise ValueError(f"val slot {self.name!r} needs a source col slot")


@dataclass(frozen=True)
class QueryTemplate:
    id: str
    shape: str
    slots: tuple[SlotSpec, ...]
    choices: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self) -> None:
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")


def _tpl(tpl_id, shape, slots, choices=()):
    return QueryTemplate(tpl_id, shape, tuple(SlotSpec(*s) for s in slots), choices)


DEFAULT_TEMPLATES: tuple[QueryTemplate, ...] = (
    _tpl("arith-1", "arithmetic",
         [("COL1", "col", NUMBER), ("COL2", "col", NUMBER)],
         (("op", ("-", "+")),)),
    _tpl("sup-1", "superlative",
         [("COL1", "col", NUMBER)],
         (("fn", ("MAX", "MIN")),)),
    _tpl("cmp-1", "comparative",
         [("COL1", "col", ANY), ("COL2", "col", NUMBER), ("VAL2", "val", ANY, "COL2")],
         (("op", (">",)),)),
    _tpl("agg-count", "aggregation", [("COL1", "col", ANY)]),
    _tpl("agg-sum", "aggregation", [("COL1", "col", NUMBER)],
         (("fn", ("SUM",)),)),
    _tpl("agg-avg", "aggregation", [("COL1", "col", NUMBER)],
         (("fn", ("AVG",)),)),
    _tpl("union-1", "union",
         [("COL1", "col", ANY), ("COL2", "col", ANY), ("VAL2", "val", ANY, "COL2"),
          ("COL3", "col", ANY), ("VAL3", "val", ANY, "COL3")]),
    _tpl("nested-1", "nested",
         [("COL1", "col", ANY), ("COL2", "col", ANY), ("COL3", "col", ANY),
          ("VAL3", "val", ANY, "COL3")]),
    _tpl("select-1", "plain_select",
         [("COL1", "col", ANY), ("COL2", "col", ANY), ("VAL2", "val", ANY, "COL2")]),
)


def _bind_slots(tpl: QueryTemplate, table: Table, rng: Rng) -> dict:
    """Fill slots in declared order; raises NoCompatibleColumnsError."""
    bound: dict[str, object] = {}
    used_columns: set[str] = set()
    for slot in tpl.slots:
        if slot.kind == "col":
            candidates = [
                c.name
                for c in table.columns
                if c.name not in used_columns
                and (slot.ctype == ANY or c.ctype == slot.ctype)
            ]
            if not candidates:
                raise NoCompatibleColumnsError(
                    f"{tpl.id}: no column fits slot {slot.name}"
                )
            name = candidates[rng.below(len(candidates))]
            used_columns.add(name)
            bound[slot.name] = name
        else:
            col_name = bound[slot.source]
            idx = table.column_index(col_name)
            cells = [row[idx] for row in table.rows if row[idx] is not None]
            if not cells:
                raise NoCompatibleColumnsError(
                    f"{tpl.id}: column {col_name!r} has no usable values"
                )
            bound[slot.name] = cells[rng.below(len(cells))]
    for key, options in tpl.choices:
        bound[f"choice:{key}"] = options[rng.below(len(options))]
    return bound


def _assemble(tpl: QueryTemplate, b: dict) -> SqlQuery:
    shape = tpl.shape
    if shape == "arithmetic":
        return SqlQuery(Arith(b["choice:op"], Col(b["COL1"]), Col(b["COL2"])))
    if shape == "superlative":
        return SqlQuery(Agg(b["choice:fn"], b["COL1"]))
    if shape == "comparative":
        return SqlQuery(Col(b["COL1"]), Cmp(b["COL2"], b["choice:op"], b["VAL2"]))
    if shape == "aggregation":
        return SqlQuery(Agg(b.get("choice:fn", "COUNT"), b["COL1"]))
    if shape == "union":
        return SqlQuery(
            Col(b["COL1"]),
            Or(Cmp(b["COL2"], "=", b["VAL2"]), Cmp(b["COL3"], "=", b["VAL3"])),
        )
    if shape == "nested":
        inner = SqlQuery(Col(b["COL2"]), Cmp(b["COL3"], "=", b["VAL3"]))
        return SqlQuery(Col(b["COL1"]), In(b["COL2"], inner))
    return SqlQuery(Col(b["COL1"]), Cmp(b["COL2"], "=", b["VAL2"]))


def instantiate(tpl: QueryTemplate, table: Table, rng: Rng) -> SqlQuery:
    """Sample a well-typed query for `table` from the template."""
    return _assemble(tpl, _bind_slots(tpl, table, rng))


def template_from_record(record: dict) -> QueryTemplate:
    slots = tuple(
        SlotSpec(
            name=s["name"],
            kind=s["kind"],
            ctype=s.get("ctype", ANY),
            source=s.get("source", ""),
        )
        for s in record.get("slots", ())
    )
    choices = tuple(
        (key, tuple(options)) for key, options in record.get("choices", {}).items()
    )
    return QueryTemplate(record["id"], record["shape"], slots, choices)


def template_to_record(tpl: QueryTemplate) -> dict:
    return {
        "id": tpl.id,
        "shape": tpl.shape,
        "slots": [
            {
                "name": s.name,
                "kind": s.kind,
                **({"ctype": s.ctype} if s.kind == "col" else {"source": s.source}),
            }
            for s in tpl.slots
        ],
        "choices": {key: list(options) for key, options in tpl.choices},
    }


def load_templates(path: str | Path) -> tuple[QueryTemplate, ...]:
    """Read a JSON file holding a list of template records."""
    with open(path, "r", encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list) or not records:
        raise ValueError("template file must hold a non-empty JSON list")
    templates = tuple(template_from_record(r) for r in records)
    ids = [t.id for t in templates]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate template ids")
    return templates
