"""Template instantiation and the template-file interface."""

import json
from fractions import Fraction

import pytest

from poet_forge.corpus.templates import (
    DEFAULT_TEMPLATES,
    SHAPES,
    NoCompatibleColumnsError,
    instantiate,
    load_templates,
    template_from_record,
    template_to_record,
)
from poet_forge.rng import Rng
from poet_forge.sql import Agg, Arith, Cmp, Col, In, Or, check_query, render_sql
from poet_forge.sql.tables import Column, Table


def table(cols, rows, name="t"):
    return Table(
        name=name,
        columns=tuple(Column(n, t) for n, t in cols),
        rows=tuple(tuple(r) for r in rows),
    )


WIDE = table(
    [("city", "text"), ("year", "number"), ("score", "number"), ("team", "text")],
    [
        ("athens", Fraction(2004), Fraction(9), "red"),
        ("oslo", Fraction(2008), Fraction(7), "blue"),
        ("lima", Fraction(2012), Fraction(8), "red"),
    ],
)

BY_SHAPE = {tpl.shape: tpl for tpl in DEFAULT_TEMPLATES if tpl.shape != "aggregation"}


def test_default_set_covers_all_shapes():
    assert {tpl.shape for tpl in DEFAULT_TEMPLATES} == set(SHAPES)


def test_superlative_on_single_number_column():
    t = table([("score", "number")], [(Fraction(1),), (Fraction(2),)])
    q = instantiate(BY_SHAPE["superlative"], t, Rng(1))
    assert isinstance(q.select, Agg)
    assert q.select.fn in ("MAX", "MIN")
    assert q.select.col == "score"


def test_arithmetic_needs_two_number_columns():
    t = table([("a", "number"), ("b", "text")], [(Fraction(1), "x")])
    with pytest.raises(NoCompatibleColumnsError):
        instantiate(BY_SHAPE["arithmetic"], t, Rng(1))


def test_arithmetic_distinct_columns():
    for trial in range(30):
        q = instantiate(BY_SHAPE["arithmetic"], WIDE, Rng(trial))
        assert isinstance(q.select, Arith)
        assert q.select.left.name != q.select.right.name


def test_comparative_surface_form():
    for trial in range(30):
        q = instantiate(BY_SHAPE["comparative"], WIDE, Rng(trial))
        text = render_sql(q)
        assert isinstance(q.where, Cmp) and q.where.op == ">"
        # value drawn from the bound column's cells
        idx = WIDE.column_index(q.where.col)
        assert q.where.value in {r[idx] for r in WIDE.rows}
        assert text.startswith("SELECT ")
        assert " WHERE " in text and " > " in text


def test_union_and_nested_shapes():
    q = instantiate(BY_SHAPE["union"], WIDE, Rng(3))
    assert isinstance(q.where, Or)
    q2 = instantiate(BY_SHAPE["nested"], WIDE, Rng(3))
    assert isinstance(q2.where, In)
    assert q2.where.sub.select == Col(q2.where.col)


def test_instantiations_always_well_typed():
    for trial in range(200):
        rng = Rng(1000 + trial)
        tpl = DEFAULT_TEMPLATES[trial % len(DEFAULT_TEMPLATES)]
        try:
            q = instantiate(tpl, WIDE, rng)
        except NoCompatibleColumnsError:
            continue
        check_query(q, WIDE)


def test_value_slots_skip_empty_cells():
    # column b holds only empty cells: binding COL2=b must be infeasible,
    # and successful draws must take their value from column a
    t = table([("a", "text"), ("b", "text")], [("x", None), ("y", None)])
    outcomes = {"ok": 0, "infeasible": 0}
    for trial in range(50):
        try:
            q = instantiate(BY_SHAPE["plain_select"], t, Rng(trial))
        except NoCompatibleColumnsError:
            outcomes["infeasible"] += 1
            continue
        assert q.where.col == "a"
        assert q.where.value in ("x", "y")
        outcomes["ok"] += 1
    assert outcomes["ok"] > 0 and outcomes["infeasible"] > 0


def test_template_records_round_trip(tmp_path):
    records = [template_to_record(tpl) for tpl in DEFAULT_TEMPLATES]
    path = tmp_path / "templates.json"
    path.write_text(json.dumps(records), encoding="utf-8")
    loaded = load_templates(path)
    assert loaded == DEFAULT_TEMPLATES


def test_load_rejects_duplicates(tmp_path):
    records = [template_to_record(DEFAULT_TEMPLATES[0])] * 2
    path = tmp_path / "templates.json"
    path.write_text(json.dumps(records), encoding="utf-8")
    with pytest.raises(ValueError):
        load_templates(path)


def test_template_from_record_validates_shape():
    with pytest.raises(ValueError):
        template_from_record({"id": "x", "shape": "join", "slots": []})
