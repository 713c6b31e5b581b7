"""Recursive-descent parser for the SQL subset; inverse of render_sql.

parse_sql(render_sql(q)) == q (AST equality) holds for every valid query;
errors carry the byte offset and the expected-token set.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import AGG_FNS, Agg, And, Arith, Col, Cmp, In, Or, SqlQuery

_KEYWORDS = frozenset({"SELECT", "WHERE", "AND", "OR", "IN", *AGG_FNS})
_CMP_STARTS = "=!<>"


class SqlParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()) -> None:
        detail = f"offset {offset}: {message}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class _Token:
    __slots__ = ("kind", "value", "offset")

    def __init__(self, kind: str, value, offset: int) -> None:
        self.kind = kind  # KEYWORD, IDENT, NUMBER, STRING, PUNCT, END
        self.value = value
        self.offset = offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "'":
            j = i + 1
            parts = []
            while True:
                if j >= n:
                    raise SqlParseError("unterminated string", i)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        parts.append("'")
                        j += 2
                        continue
                    break
                parts.append(text[j])
                j += 1
            tokens.append(_Token("STRING", "".join(parts), i))
            i = j + 1
            continue
        if ch.isdigit() or (
            ch == "-"
            and i + 1 < n
            and text[i + 1].isdigit()
            and (not tokens or tokens[-1].kind not in ("IDENT", "NUMBER") and tokens[-1].value != ")")
        ):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            literal = text[i:j]
            try:
                value = Fraction(literal)
            except (ValueError, ZeroDivisionError) as exc:
                raise SqlParseError(f"bad number {literal!r}", i) from exc
            tokens.append(_Token("NUMBER", value, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KEYWORD" if word in _KEYWORDS else "IDENT"
            tokens.append(_Token(kind, word, i))
            i = j
            continue
        if ch in _CMP_STARTS:
            if text[i : i + 2] in ("!=", ">=", "<="):
                tokens.append(_Token("PUNCT", text[i : i + 2], i))
                i += 2
                continue
            if ch == "!":
                raise SqlParseError("lone '!'", i, expected=("!=",))
            tokens.append(_Token("PUNCT", ch, i))
            i += 1
            continue
        if ch in "()+-":
            tokens.append(_Token("PUNCT", ch, i))
            i += 1
            continue
        raise SqlParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("END", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value=None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            expected = (value,) if value is not None else (kind,)
            raise SqlParseError(f"got {tok.value!r}", tok.offset, expected=expected)
        return self.advance()

    def parse_query(self) -> SqlQuery:
        self.expect("KEYWORD", "SELECT")
        select = self.parse_select()
        where = None
        if self.peek().kind == "KEYWORD" and self.peek().value == "WHERE":
            self.advance()
            where = self.parse_or()
        return SqlQuery(select=select, where=where)

    def parse_select(self):
        left = self.parse_term()
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.value in ("+", "-"):
            self.advance()
            right = self.parse_term()
            return Arith(tok.value, left, right)
        return left

    def parse_term(self):
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.value in AGG_FNS:
            self.advance()
            self.expect("PUNCT", "(")
            col = self.expect("IDENT")
            self.expect("PUNCT", ")")
            return Agg(tok.value, col.value)
        if tok.kind == "IDENT":
            return Col(self.advance().value)
        raise SqlParseError(
            f"got {tok.value!r}", tok.offset, expected=("column", *AGG_FNS)
        )

    def parse_or(self):
        cond = self.parse_and()
        while self.peek().kind == "KEYWORD" and self.peek().value == "OR":
            self.advance()
            cond = Or(cond, self.parse_and())
        return cond

    def parse_and(self):
        cond = self.parse_atom()
        while self.peek().kind == "KEYWORD" and self.peek().value == "AND":
            self.advance()
            cond = And(cond, self.parse_atom())
        return cond

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.value == "(":
            self.advance()
            cond = self.parse_or()
            self.expect("PUNCT", ")")
            return cond
        col = self.expect("IDENT")
        op_tok = self.peek()
        if op_tok.kind == "KEYWORD" and op_tok.value == "IN":
            self.advance()
            self.expect("PUNCT", "(")
            sub = self.parse_query()
            self.expect("PUNCT", ")")
            return In(col.value, sub)
        if op_tok.kind == "PUNCT" and op_tok.value in ("=", "!=", ">", "<", ">=", "<="):
            self.advance()
            value_tok = self.peek()
            if value_tok.kind == "NUMBER":
                return Cmp(col.value, op_tok.value, self.advance().value)
            if value_tok.kind == "STRING":
                return Cmp(col.value, op_tok.value, self.advance().value)
            raise SqlParseError(
                f"got {value_tok.value!r}", value_tok.offset,
                expected=("number", "string"),
            )
        raise SqlParseError(
            f"got {op_tok.value!r}", op_tok.offset,
            expected=("=", "!=", ">", "<", ">=", "<=", "IN"),
        )


def parse_sql(text: str) -> SqlQuery:
    parser = _Parser(_tokenize(text))
    query = parser.parse_query()
    end = parser.peek()
    if end.kind != "END":
        raise SqlParseError(f"trailing input {end.value!r}", end.offset)
    return query
