"""File ingestion: CSV tables, JSONL records, signal tables.

Column typing is inferred per column: a column is numeric when at least 90%
of its non-missing cells parse as numbers (the stragglers become missing),
otherwise it is categorical. Explicit empty cells are always missing. A
schema mapping can override the inferred kind per column.
"""

from __future__ import annotations

import csv
import json
import logging

from ballast.core.dataset import (
    CATEGORICAL,
    NUMERIC,
    TEXT,
    Dataset,
    categorical_column,
    numeric_column,
    text_column,
)
from ballast.core.signals import SIGNAL_KINDS, SignalTable
from ballast.errors import ConfigError, DataError

log = logging.getLogger(__name__)

NUMERIC_MAJORITY = 0.90

LIST_POLICIES = ("join_tokens", "count", "drop")


def _try_float(token: str) -> float | None:
    try:
        v = float(token)
    except ValueError:
        return None
    return v if v == v and abs(v) != float("inf") else None


def _build_column(name: str, cells: list[str | None], kind: str | None):
    """Infer a column from raw string cells (None or "" = missing)."""
    missing = [c is None or c == "" for c in cells]
    present = [c for c, m in zip(cells, missing) if not m]
    if kind is None:
        if not present:
            kind = CATEGORICAL
        else:
            parsed = sum(_try_float(c) is not None for c in present)
            kind = NUMERIC if parsed >= NUMERIC_MAJORITY * len(present) else CATEGORICAL
    if kind == NUMERIC:
        values, mask = [], []
        for c, m in zip(cells, missing):
            v = None if m else _try_float(c)
            values.append(0.0 if v is None else v)
            mask.append(v is None)
        return numeric_column(name, values, mask)
    if kind == CATEGORICAL:
        return categorical_column(name, ["" if m else c for c, m in zip(cells, missing)], missing)
    if kind == TEXT:
        return text_column(name, ["" if m else c for c, m in zip(cells, missing)], missing)
    raise ConfigError(f"unknown column kind {kind!r} for {name!r}")


def load_csv(path, schema: dict[str, str] | None = None) -> Dataset:
    """Load an RFC-4180-style CSV with a header row into a Dataset."""
    schema = schema or {}
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: no header") from None
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise DataError(f"{path}: duplicate header names {dupes}")
        cells: list[list[str]] = [[] for _ in header]
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            for j, cell in enumerate(row):
                cells[j].append(cell)
    unknown = set(schema) - set(header)
    if unknown:
        raise ConfigError(f"schema names unknown columns: {sorted(unknown)}")
    n_rows = len(cells[0]) if header else 0
    columns = tuple(_build_column(name, cells[j], schema.get(name)) for j, name in enumerate(header))
    return Dataset(columns, n_rows)


def _flatten_record(obj, prefix: str, out: dict, list_policy: str, joined_keys: set):
    for key, value in obj.items():
        dotted = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict):
            _flatten_record(value, dotted, out, list_policy, joined_keys)
        elif isinstance(value, list):
            if list_policy == "drop":
                continue
            if list_policy == "count":
                out[dotted] = str(len(value))
            else:  # join_tokens
                out[dotted] = " ".join(
                    x if isinstance(x, str) else json.dumps(x, sort_keys=True) for x in value
                )
                joined_keys.add(dotted)
        elif value is None:
            out[dotted] = None
        elif isinstance(value, bool):
            out[dotted] = "1" if value else "0"
        else:
            out[dotted] = str(value)


def flatten_jsonl(path, list_policy: str = "join_tokens", strict: bool = True) -> Dataset:
    """Flatten one-JSON-object-per-line records into dotted-path columns.

    Column order is the first-appearance order of dotted keys. Keys absent
    from a record yield missing cells. Malformed lines raise when `strict`,
    otherwise they are reported and skipped.
    """
    if list_policy not in LIST_POLICIES:
        raise ConfigError(f"list_policy must be one of {LIST_POLICIES}")
    records: list[dict] = []
    key_order: list[str] = []
    joined_keys: set[str] = set()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                if strict:
                    raise DataError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
                log.warning("%s:%d: malformed JSON skipped (%s)", path, lineno, exc.msg)
                continue
            if not isinstance(obj, dict):
                if strict:
                    raise DataError(f"{path}:{lineno}: record is not an object")
                log.warning("%s:%d: non-object record skipped", path, lineno)
                continue
            flat: dict[str, str | None] = {}
            _flatten_record(obj, "", flat, list_policy, joined_keys)
            for k in flat:
                if k not in key_order:
                    key_order.append(k)
            records.append(flat)
    if not records:
        raise DataError(f"{path}: no records")
    columns = []
    for name in key_order:
        cells = [rec.get(name) for rec in records]
        kind = TEXT if name in joined_keys else None
        columns.append(_build_column(name, cells, kind))
    return Dataset(tuple(columns), len(records))


def write_csv(dataset: Dataset, path) -> None:
    """Write a dataset back to CSV; missing cells become empty fields."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.feature_names)
        for i in range(dataset.n_rows):
            row = []
            for col in dataset.columns:
                if col.missing_mask[i]:
                    row.append("")
                elif col.kind == NUMERIC:
                    row.append(format(float(col.values[i]), ".10g"))
                elif col.kind == CATEGORICAL:
                    row.append(col.categories[int(col.values[i])])
                else:
                    row.append(str(col.values[i]))
            writer.writerow(row)


def ingest_signals(path) -> SignalTable:
    """Load an external signal table CSV: feature_id,signal,kind,value."""
    expected = ["feature_id", "signal", "kind", "value"]
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    table = SignalTable()
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: no header") from None
        if [h.strip() for h in header] != expected:
            raise DataError(f"{path}: expected header {','.join(expected)}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            feature_id, signal, kind, value = (c.strip() for c in row)
            if kind not in SIGNAL_KINDS:
                raise DataError(f"{path}:{lineno}: unknown kind {kind!r}")
            v = _try_float(value)
            if v is None:
                raise DataError(f"{path}:{lineno}: bad value {value!r}")
            if (feature_id, signal) in table:
                raise DataError(f"{path}:{lineno}: duplicate entry ({feature_id}, {signal})")
            table.add(feature_id, signal, kind, v)
    return table
