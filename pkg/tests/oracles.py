"""Independent reference implementations used only for differential tests.

Nothing here shares logic with the package: the math oracle evaluates
rendered text with Fraction arithmetic, the entailment oracle is CNF +
DPLL, and the SQL oracle is a naive per-row scan coded straight from the
documented executor semantics.
"""

from __future__ import annotations

from fractions import Fraction

from poet_forge.sql.ast import Agg, And, Arith, Cmp, Col, In, Or

# ---------------------------------------------------------------------------
# math: arbitrary-precision rational evaluation of the rendered strings


def rational_eval_math(program: str, context: str) -> Fraction:
    """Evaluate a rendered math program against a rendered context."""
    bindings = {}
    tokens = context.split()
    for i in range(0, len(tokens), 4):
        name, eq, value, semi = tokens[i : i + 4]
        assert eq == "=" and semi == ";"
        bindings[name] = Fraction(value)
    parts = program.split()
    total = bindings[parts[0]]
    for i in range(1, len(parts), 2):
        operand = bindings[parts[i + 1]]
        total = total + operand if parts[i] == "+" else total - operand
    return total


# ---------------------------------------------------------------------------
# logic: CNF + DPLL


def _clause_literal(lit, negate: bool = False) -> int:
    magnitude = lit.var + 1
    return -magnitude if (lit.negated ^ negate) else magnitude


def _dpll_sat(clauses: list[list[int]]) -> bool:
    clauses = [list(c) for c in clauses]
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        reduced = []
        for clause in clauses:
            if unit in clause:
                continue
            remaining = [l for l in clause if l != -unit]
            if not remaining:
                return False
            reduced.append(remaining)
        clauses = reduced
        if not clauses:
            return True
    if not clauses:
        return True
    branch = abs(clauses[0][0])
    return _dpll_sat(clauses + [[branch]]) or _dpll_sat(clauses + [[-branch]])


def dpll_entailed(premises, conclusion) -> bool:
    """Premises entail conclusion iff premises + negated conclusion is UNSAT."""
    clauses = [
        [_clause_literal(p.antecedent, negate=True), _clause_literal(p.consequent)]
        for p in premises
    ]
    clauses.append([_clause_literal(conclusion.antecedent)])
    clauses.append([_clause_literal(conclusion.consequent, negate=True)])
    return not _dpll_sat(clauses)


# ---------------------------------------------------------------------------
# SQL: naive row scan


class OracleEmpty(Exception):
    pass


def oracle_render_value(value) -> str:
    if isinstance(value, str):
        return value
    n, d = value.numerator, value.denominator
    if d == 1:
        return str(n)
    twos = fives = 0
    rest = d
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    assert rest == 1, "oracle only renders terminating decimals"
    places = max(twos, fives)
    scaled = abs(n) * 10**places // d
    digits = str(scaled).rjust(places + 1, "0")
    return ("-" if n < 0 else "") + digits[:-places] + "." + digits[-places:]


def _round_half_even_4(value: Fraction) -> Fraction:
    n, d = value.numerator, value.denominator
    q, r = divmod(n * 10000, d)
    if 2 * r > d or (2 * r == d and q % 2 == 1):
        q += 1
    return Fraction(q, 10000)


def _cell_matches(cell, op: str, ref) -> bool:
    if cell is None:
        return False
    if isinstance(ref, str):
        return (oracle_render_value(cell) == ref) == (op == "=")
    if not isinstance(cell, Fraction):
        return False
    if op == "=":
        return cell == ref
    if op == "!=":
        return cell != ref
    if op == ">":
        return cell > ref
    if op == "<":
        return cell < ref
    if op == ">=":
        return cell >= ref
    return cell <= ref


def _row_satisfies(cond, row, table) -> bool:
    if isinstance(cond, Cmp):
        return _cell_matches(row[table.column_index(cond.col)], cond.op, cond.value)
    if isinstance(cond, And):
        return _row_satisfies(cond.left, row, table) and _row_satisfies(
            cond.right, row, table
        )
    if isinstance(cond, Or):
        return _row_satisfies(cond.left, row, table) or _row_satisfies(
            cond.right, row, table
        )
    assert isinstance(cond, In)
    cell = row[table.column_index(cond.col)]
    if cell is None:
        return False
    try:
        members = oracle_execute(cond.sub, table)
    except OracleEmpty:
        return False
    rendered = {oracle_render_value(v) for v in members}
    return oracle_render_value(cell) in rendered


def _oracle_agg(fn: str, col: str, rows, table, where_present: bool) -> Fraction:
    if where_present and len(rows) == 0:
        raise OracleEmpty(f"{fn}: filter matched nothing")
    idx = table.column_index(col)
    if fn == "COUNT":
        return Fraction(len([r for r in rows if r[idx] is not None]))
    numbers = [r[idx] for r in rows if isinstance(r[idx], Fraction)]
    if not numbers:
        raise OracleEmpty(f"{fn}: no numeric cells")
    if fn == "SUM":
        total = Fraction(0)
        for x in numbers:
            total += x
        return total
    if fn == "AVG":
        total = Fraction(0)
        for x in numbers:
            total += x
        return _round_half_even_4(total / len(numbers))
    if fn == "MAX":
        best = numbers[0]
        for x in numbers[1:]:
            if x > best:
                best = x
        return best
    best = numbers[0]
    for x in numbers[1:]:
        if x < best:
            best = x
    return best


def oracle_execute(q, table) -> list:
    """Naive reference execution; raises OracleEmpty on zero values."""
    if q.where is None:
        rows = list(table.rows)
        where_present = False
    else:
        rows = [r for r in table.rows if _row_satisfies(q.where, r, table)]
        where_present = True
    sel = q.select
    if isinstance(sel, Col):
        idx = table.column_index(sel.name)
        values = [r[idx] for r in rows if r[idx] is not None]
    elif isinstance(sel, Agg):
        values = [_oracle_agg(sel.fn, sel.col, rows, table, where_present)]
    elif isinstance(sel, Arith) and isinstance(sel.left, Col):
        li = table.column_index(sel.left.name)
        ri = table.column_index(sel.right.name)
        values = []
        for r in rows:
            if isinstance(r[li], Fraction) and isinstance(r[ri], Fraction):
                values.append(r[li] + r[ri] if sel.op == "+" else r[li] - r[ri])
    else:
        a = _oracle_agg(sel.left.fn, sel.left.col, rows, table, where_present)
        b = _oracle_agg(sel.right.fn, sel.right.col, rows, table, where_present)
        values = [a + b if sel.op == "+" else a - b]
    if not values:
        raise OracleEmpty("no values")
    return values
