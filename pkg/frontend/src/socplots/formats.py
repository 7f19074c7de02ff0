"""Readers for the CLI's CSV tables, result records and binary field files.

These parse the documented formats independently; nothing here imports the
simulation package or recomputes any physical quantity.
"""
import csv
import struct

import numpy as np

from .errors import EmptyInputError, SchemaError

FIELD_MAGIC = b"SOV2"
_FIELD_HEADER = struct.Struct("<4sid ii")


def read_table(path, expected_columns):
    """CSV with a header row; returns a dict of float columns."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: empty file") from None
        missing = [c for c in expected_columns if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {missing}; found {header}")
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    idx = {c: header.index(c) for c in expected_columns}
    out = {}
    for c in expected_columns:
        try:
            out[c] = np.array([float(row[idx[c]]) for row in rows])
        except ValueError as exc:
            raise SchemaError(f"{path}: non-numeric value in column {c!r}: "
                              f"{exc}") from exc
    return out


def read_string_table(path, expected_columns):
    """Like read_table but keeps every cell as text (mixed-type tables)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: empty file") from None
        missing = [c for c in expected_columns if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {missing}; found {header}")
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    idx = {c: header.index(c) for c in expected_columns}
    return {c: [row[idx[c]] for row in rows] for c in expected_columns}


def read_records(path, kind=None):
    """Line-oriented key=value records; values stay verbatim strings."""
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = {}
            for item in line.split(" "):
                k, eq, v = item.partition("=")
                if not eq:
                    raise SchemaError(f"{path}: malformed record item {item!r}")
                rec[k] = v
            if kind is None or rec.get("record") == kind:
                records.append(rec)
    if not records:
        what = f"records of kind {kind!r}" if kind else "records"
        raise EmptyInputError(f"{path}: no {what}")
    return records


def read_field(path):
    """Binary two-component field: returns (half_length, psi_plus, psi_minus)."""
    with open(path, "rb") as fh:
        header = fh.read(_FIELD_HEADER.size)
        if len(header) < _FIELD_HEADER.size:
            raise EmptyInputError(f"{path}: truncated field header")
        magic, n, half_length, _, _ = _FIELD_HEADER.unpack(header)
        if magic != FIELD_MAGIC:
            raise SchemaError(f"{path}: bad magic {magic!r}, expected "
                              f"{FIELD_MAGIC!r}")
        count = n * n
        data = np.frombuffer(fh.read(2 * count * 8), dtype="<c8")
    if data.size != 2 * count:
        raise SchemaError(f"{path}: expected {2 * count} complex entries, "
                          f"got {data.size}")
    plus = data[:count].reshape(n, n)
    minus = data[count:].reshape(n, n)
    return half_length, plus, minus
