"""A small boolean query language over the tilings table.

    expr       := conj {"or" conj}
    conj       := term {"and" term}
    term       := ["not"] (comparison | "(" expr ")")
    comparison := ident op literal
    op         := "=" | "!=" | "<" | "<=" | ">" | ">="
    literal    := integer | 'single quoted string'

"and" binds tighter than "or", as in SQL.  Queries are checked against the
column types and compiled to a parameterized SQL WHERE clause; ``matches``
evaluates the same tree directly on a record.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .records import BOOL_COLUMNS, COLUMN_TYPES, COLUMNS, TilingRecord

OPS = ("=", "!=", "<", "<=", ">", ">=")
NUMERIC_COLUMNS = [c for c in COLUMNS if COLUMN_TYPES[c].split()[0] in ("INTEGER", "REAL")]
TEXT_COLUMNS = [c for c in COLUMNS if COLUMN_TYPES[c] == "TEXT"]
KEYWORDS = ("and", "or", "not")

_PY_OPS = {"=": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le,
           ">": operator.gt, ">=": operator.ge}


class QueryError(ValueError):
    pass


class QuerySyntaxError(QueryError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class QueryColumnError(QueryError):
    pass


class QueryTypeError(QueryError):
    pass


@dataclass(frozen=True)
class Compare:
    column: str
    op: str
    value: Union[int, str]


@dataclass(frozen=True)
class And:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Or:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Not:
    arg: "Query"


Query = Union[Compare, And, Or, Not]


# ------------------------------------------------------------ lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><=|>=|!=|=|<|>)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<int>-?\d+)
  | (?P<str>'(?:[^']|'')*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos] == "'":
                raise QuerySyntaxError("unterminated string", pos)
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word.lower() in KEYWORDS:
                kind = word.lower()
            out.append(_Tok(kind, word, pos))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


# ------------------------------------------------------------ parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            what = "end of query" if tok.kind == "end" else repr(tok.text)
            raise QuerySyntaxError(f"expected {kind}, found {what}", tok.pos)
        self.i += 1
        return tok

    def expr(self) -> Query:
        node = self.conj()
        while self.peek().kind == "or":
            self.i += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Query:
        node = self.term()
        while self.peek().kind == "and":
            self.i += 1
            node = And(node, self.term())
        return node

    def term(self) -> Query:
        if self.peek().kind == "not":
            self.i += 1
            return Not(self.operand())
        return self.operand()

    def operand(self) -> Query:
        if self.peek().kind == "lpar":
            self.i += 1
            node = self.expr()
            self.take("rpar")
            return node
        return self.comparison()

    def comparison(self) -> Compare:
        tok = self.take("ident")
        col = tok.text
        if col not in COLUMNS:
            raise QueryColumnError(
                f"unknown column {col!r} at position {tok.pos}; valid columns: {', '.join(COLUMNS)}")
        op = self.take("op").text
        lit = self.peek()
        if lit.kind == "int":
            value = int(lit.text)
        elif lit.kind == "str":
            value = lit.text[1:-1].replace("''", "'")
        else:
            what = "end of query" if lit.kind == "end" else repr(lit.text)
            raise QuerySyntaxError(f"expected literal, found {what}", lit.pos)
        self.i += 1
        node = Compare(col, op, value)
        _typecheck(node, lit.pos)
        return node


def _typecheck(node: Compare, pos: int) -> None:
    col, op, value = node.column, node.op, node.value
    if col in BOOL_COLUMNS:
        if value not in ("true", "false"):
            raise QueryTypeError(f"boolean column {col} compares only with 'true' or 'false' "
                                 f"(position {pos})")
        if op not in ("=", "!="):
            raise QueryTypeError(f"boolean column {col} supports only = and != (position {pos})")
    elif col in NUMERIC_COLUMNS:
        if not isinstance(value, int):
            raise QueryTypeError(f"numeric column {col} compared with text (position {pos})")
    elif not isinstance(value, str):
        raise QueryTypeError(f"text column {col} compared with number (position {pos})")


def parse_query(text: str) -> Query:
    p = _Parser(text)
    node = p.expr()
    tok = p.peek()
    if tok.kind != "end":
        raise QuerySyntaxError(f"unexpected {tok.text!r}", tok.pos)
    return node


def format_query(q: Query) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(q, Compare):
        v = q.value if isinstance(q.value, int) else "'" + q.value.replace("'", "''") + "'"
        return f"{q.column} {q.op} {v}"
    if isinstance(q, Not):
        return f"not ({format_query(q.arg)})"
    word = "and" if isinstance(q, And) else "or"
    return f"({format_query(q.left)}) {word} ({format_query(q.right)})"


# ------------------------------------------------------------ evaluation

def to_sql(q: Query) -> tuple[str, list]:
    """WHERE clause text and its parameters."""
    params: list = []

    def emit(node) -> str:
        if isinstance(node, Compare):
            params.append(node.value)
            return f"{node.column} {'<>' if node.op == '!=' else node.op} ?"
        if isinstance(node, Not):
            return f"NOT ({emit(node.arg)})"
        word = "AND" if isinstance(node, And) else "OR"
        return f"({emit(node.left)}) {word} ({emit(node.right)})"

    return emit(q), params


def matches(q: Query, rec: TilingRecord) -> bool:
    if isinstance(q, Compare):
        v = getattr(rec, q.column)
        if q.column in BOOL_COLUMNS:
            v = "true" if v else "false"
        return _PY_OPS[q.op](v, q.value)
    if isinstance(q, Not):
        return not matches(q.arg, rec)
    if isinstance(q, And):
        return matches(q.left, rec) and matches(q.right, rec)
    return matches(q.left, rec) or matches(q.right, rec)


def eval_query(q: Query | str, db_path: str) -> Iterator[TilingRecord]:
    """Matching rows of the database at ``db_path`` in id order."""
    from .store import iter_db
    if isinstance(q, str):
        q = parse_query(q)
    where, params = to_sql(q)
    return iter_db(db_path, where, tuple(params))
