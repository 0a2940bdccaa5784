"""SQLite and TSV persistence of tiling records (table "tilings")."""
from __future__ import annotations

import csv
import io
import os
import sqlite3
from typing import Iterable, Iterator, TextIO

from .records import BOOL_COLUMNS, COLUMN_TYPES, COLUMNS, INT_COLUMNS, TilingRecord

TABLE = "tilings"


class StoreError(RuntimeError):
    pass


def create_sql() -> str:
    cols = ",\n  ".join(f"{c} {COLUMN_TYPES[c]}" for c in COLUMNS)
    return f"CREATE TABLE {TABLE} (\n  {cols}\n)"


def _to_row(rec: TilingRecord) -> tuple:
    # booleans are kept as 'true'/'false' so that queries such as
    # normal = 'true' also work in any external SQLite client
    return tuple(("true" if v else "false") if c in BOOL_COLUMNS else v
                 for c, v in zip(COLUMNS, rec.as_tuple()))


def _from_row(row) -> TilingRecord:
    vals = {}
    for c, v in zip(COLUMNS, row):
        if c in BOOL_COLUMNS:
            v = v == "true"
        elif c == "euler":
            v = float(v)
        elif c in INT_COLUMNS:
            v = int(v)
        vals[c] = v
    return TilingRecord(**vals)


def _check_schema(conn: sqlite3.Connection) -> None:
    info = conn.execute(f"PRAGMA table_info({TABLE})").fetchall()
    found = [(r[1], r[2]) for r in info]
    want = [(c, COLUMN_TYPES[c].replace(" PRIMARY KEY", "")) for c in COLUMNS]
    if found != want:
        raise StoreError(f"schema mismatch in table {TABLE}: {found}")


def write_db(records: Iterable[TilingRecord], path: str, append: bool = False,
             renumber: bool = True, batch: int = 5000) -> int:
    """Write records to ``path``; ids are assigned in stream order unless ``renumber`` is off."""
    if not append and os.path.exists(path):
        os.remove(path)
    conn = sqlite3.connect(path)
    try:
        exists = conn.execute("SELECT name FROM sqlite_master WHERE type='table' AND name=?",
                              (TABLE,)).fetchone()
        if exists:
            _check_schema(conn)
            start = conn.execute(f"SELECT COALESCE(MAX(id), 0) FROM {TABLE}").fetchone()[0]
        else:
            conn.execute(create_sql())
            start = 0
        sql = f"INSERT INTO {TABLE} VALUES ({', '.join('?' * len(COLUMNS))})"
        count = 0
        pending = []
        for rec in records:
            count += 1
            if renumber:
                rec = rec.with_id(start + count)
            pending.append(_to_row(rec))
            if len(pending) >= batch:
                conn.executemany(sql, pending)
                pending.clear()
        if pending:
            conn.executemany(sql, pending)
        conn.commit()
        return count
    finally:
        conn.close()


def read_db(path: str) -> list[TilingRecord]:
    return list(iter_db(path))


def iter_db(path: str, where: str = "", params: tuple = ()) -> Iterator[TilingRecord]:
    if not os.path.exists(path):
        raise StoreError(f"no such database: {path}")
    conn = sqlite3.connect(path)
    try:
        _check_schema(conn)
        sql = f"SELECT {', '.join(COLUMNS)} FROM {TABLE}"
        if where:
            sql += f" WHERE {where}"
        sql += " ORDER BY id"
        for row in conn.execute(sql, params):
            yield _from_row(row)
    finally:
        conn.close()


# ------------------------------------------------------------ TSV

def _tsv_value(col: str, v) -> str:
    if col in BOOL_COLUMNS:
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def write_tsv(records: Iterable[TilingRecord], out: TextIO | str, renumber: bool = True) -> int:
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            return write_tsv(records, fh, renumber)
    out.write("\t".join(COLUMNS) + "\n")
    count = 0
    for rec in records:
        count += 1
        if renumber:
            rec = rec.with_id(count)
        out.write("\t".join(_tsv_value(c, v) for c, v in zip(COLUMNS, rec.as_tuple())) + "\n")
    return count


def read_tsv(src: TextIO | str) -> list[TilingRecord]:
    if isinstance(src, str):
        with open(src, encoding="utf-8", newline="") as fh:
            return read_tsv(fh)
    reader = csv.reader(src, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header != COLUMNS:
        raise StoreError(f"unexpected TSV header: {header}")
    return [_from_row(row) for row in reader if row]


def tsv_text(records: Iterable[TilingRecord], renumber: bool = True) -> str:
    buf = io.StringIO()
    write_tsv(records, buf, renumber)
    return buf.getvalue()
