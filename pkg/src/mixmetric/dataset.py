"""Typed dataset storage and CSV ingestion.

Cell values are plain Python objects: a finite float for numeric cells, a
string token for categorical/ordinal cells, and None for missing. CSV input
is RFC-4180 style (first row header, comma separator, '.' decimal point);
empty cells and the literal `NA` are missing, everything else in a numeric
column must parse as a decimal real or the parse fails loudly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DataError
from .schema import MISSING_TOKENS, AttributeSpec, Kind, Schema

Value = Union[float, str, None]


def _check_cell(spec: AttributeSpec, value: Value, where: str) -> Value:
    if value is None:
        return None
    if spec.kind == Kind.NUMERIC:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DataError(f"{where}: numeric attribute {spec.name!r} got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise DataError(f"{where}: numeric attribute {spec.name!r} got non-finite {value!r}")
        return value
    if not isinstance(value, str):
        raise DataError(f"{where}: attribute {spec.name!r} expects a token, got {value!r}")
    if value in MISSING_TOKENS:
        raise DataError(
            f"{where}: attribute {spec.name!r} token {value!r} collides with a missing marker"
        )
    if spec.kind == Kind.ORDINAL and value not in spec.levels:
        raise DataError(
            f"{where}: attribute {spec.name!r} token {value!r} is not one of the declared levels"
        )
    return value


@dataclass(frozen=True)
class Dataset:
    """Columns of validated values, aligned with the schema's attribute order."""

    schema: Schema
    columns: tuple[tuple[Value, ...], ...]

    def __post_init__(self) -> None:
        if len(self.columns) != len(self.schema.attributes):
            raise DataError(
                f"expected {len(self.schema.attributes)} columns, got {len(self.columns)}"
            )
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise DataError(f"columns have unequal lengths: {sorted(lengths)}")
        if not self.columns or len(self.columns[0]) == 0:
            raise DataError("dataset needs at least one row")
        checked = []
        for spec, col in zip(self.schema.attributes, self.columns):
            checked.append(
                tuple(_check_cell(spec, v, f"column {spec.name!r}, row {i + 1}") for i, v in enumerate(col))
            )
        object.__setattr__(self, "columns", tuple(checked))

    @property
    def n_rows(self) -> int:
        return len(self.columns[0])

    def column(self, name: str) -> tuple[Value, ...]:
        return self.columns[self.schema.index_of(name)]

    def row(self, i: int) -> tuple[Value, ...]:
        return tuple(col[i] for col in self.columns)

    def feature_row(self, i: int) -> tuple[Value, ...]:
        """Row `i` restricted to the non-target attributes, in schema order."""
        target = self.schema.target
        return tuple(
            col[i]
            for spec, col in zip(self.schema.attributes, self.columns)
            if spec.name != target
        )

    def feature_rows(self) -> list[tuple[Value, ...]]:
        return [self.feature_row(i) for i in range(self.n_rows)]

    def target_column(self) -> tuple[Value, ...]:
        if self.schema.target is None:
            raise DataError("schema declares no target attribute")
        return self.column(self.schema.target)

    def select_rows(self, indices: Sequence[int]) -> "Dataset":
        cols = tuple(tuple(col[i] for i in indices) for col in self.columns)
        return Dataset(schema=self.schema, columns=cols)


def _convert_cell(spec: AttributeSpec, raw: str, where: str) -> Value:
    if raw in MISSING_TOKENS:
        return None
    if spec.kind == Kind.NUMERIC:
        try:
            value = float(raw.strip())
        except ValueError:
            raise DataError(
                f"{where}: cannot parse {raw!r} as a number for attribute {spec.name!r}"
            ) from None
        if not math.isfinite(value):
            raise DataError(f"{where}: non-finite number {raw!r} for attribute {spec.name!r}")
        return value
    if spec.kind == Kind.ORDINAL and raw not in spec.levels:
        raise DataError(
            f"{where}: token {raw!r} for attribute {spec.name!r} is not one of the declared levels"
        )
    return raw


def _read_records(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text, newline=""))]


def parse_csv(text: str, schema: Schema) -> Dataset:
    """Parse a CSV document against `schema`.

    The header must contain every schema attribute exactly once, in any
    order; the target column alone may be omitted (its values then read as
    missing). Columns come back reordered to schema order.
    """
    records = _read_records(text)
    if not records:
        raise DataError("empty CSV document")
    header = records[0]
    names = schema.names()
    required = set(names)
    if schema.target is not None and schema.target not in header:
        required = required - {schema.target}
    if len(set(header)) != len(header):
        raise DataError("header mismatch: duplicate column names in header")
    if set(header) != required:
        missing = sorted(required - set(header))
        extra = sorted(set(header) - set(names))
        parts = []
        if missing:
            parts.append(f"missing columns: {', '.join(missing)}")
        if extra:
            parts.append(f"unknown columns: {', '.join(extra)}")
        raise DataError(f"header mismatch ({'; '.join(parts)})")

    rows = records[1:]
    if not rows:
        raise DataError("CSV document has a header but no data rows")
    width = len(header)
    for r, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DataError(f"data row {r}: expected {width} cells, got {len(row)} (ragged row)")

    position = {name: header.index(name) for name in header}
    columns: list[tuple[Value, ...]] = []
    for spec in schema.attributes:
        if spec.name not in position:
            columns.append(tuple([None] * len(rows)))
            continue
        j = position[spec.name]
        columns.append(
            tuple(
                _convert_cell(spec, row[j], f"data row {r}, column {spec.name!r}")
                for r, row in enumerate(rows, start=1)
            )
        )
    return Dataset(schema=schema, columns=tuple(columns))


def parse_row(text: str, schema: Schema) -> tuple[Value, ...]:
    """Parse one headerless CSV record into a feature record.

    Cells are positional, in schema order. The record may carry values for
    every attribute (the target cell is then ignored) or for just the
    non-target attributes.
    """
    records = [r for r in _read_records(text) if r]
    if len(records) != 1:
        raise DataError(f"expected exactly one CSV record, got {len(records)}")
    cells = records[0]
    feature_specs = schema.feature_specs()
    if len(cells) == len(schema.attributes):
        specs: Sequence[AttributeSpec] = schema.attributes
    elif len(cells) == len(feature_specs):
        specs = feature_specs
    else:
        raise DataError(
            f"record has {len(cells)} cells; expected {len(feature_specs)}"
            + (
                f" or {len(schema.attributes)} (with target)"
                if schema.target is not None
                else ""
            )
        )
    values = [
        _convert_cell(spec, raw, f"cell {i + 1}") for i, (spec, raw) in enumerate(zip(specs, cells))
    ]
    return tuple(v for spec, v in zip(specs, values) if spec.name != schema.target)


def _render_cell(value: Value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def render_csv(data: Dataset) -> str:
    """Debug rendering: schema-ordered header plus one line per row.

    Floats use their shortest round-trip form, so parse_csv(render_csv(d))
    reproduces `d` exactly.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(data.schema.names())
    for i in range(data.n_rows):
        writer.writerow([_render_cell(v) for v in data.row(i)])
    return out.getvalue()
