"""Attribute and schema declarations, plus the JSON schema-document parser.

A schema is always declared in its own document, never inferred from data:
the order of ordinal levels cannot be recovered from a CSV file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import SchemaError

# Cell contents that parse as "missing". Case-sensitive, by design: anything
# else in a numeric column is an error, not a silent missing.
MISSING_TOKENS = ("", "NA")


class Kind(str, Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"
    ORDINAL = "ordinal"


class Mode(str, Enum):
    GOWER = "gower"
    PROB_GAUSSIAN = "prob_gaussian"
    PROB_EMPIRICAL = "prob_empirical"
    PROB_ORDINAL = "prob_ordinal"
    EXACT_MATCH = "exact_match"


# Which attribute kinds each distance mode can be applied to.
MODE_KINDS: dict[Mode, frozenset[Kind]] = {
    Mode.GOWER: frozenset({Kind.NUMERIC}),
    Mode.PROB_GAUSSIAN: frozenset({Kind.NUMERIC}),
    Mode.PROB_EMPIRICAL: frozenset({Kind.NUMERIC}),
    Mode.PROB_ORDINAL: frozenset({Kind.ORDINAL}),
    Mode.EXACT_MATCH: frozenset({Kind.CATEGORICAL, Kind.ORDINAL}),
}


def _check_token(token: Any, what: str) -> str:
    if not isinstance(token, str) or token == "":
        raise SchemaError(f"{what} must be a non-empty string, got {token!r}")
    if token in MISSING_TOKENS:
        raise SchemaError(f"{what} {token!r} collides with a missing-value marker")
    return token


@dataclass(frozen=True)
class AttributeSpec:
    """One column: its kind, distance mode, weight, and distance exponent.

    `levels` is the declared order of an ordinal attribute and must be empty
    for the other kinds. `weight` scales the attribute's contribution to the
    record distance; `exponent` is the power applied to the per-attribute
    distance before aggregation.
    """

    name: str
    kind: Kind
    mode: Mode
    levels: tuple[str, ...] = ()
    weight: float = 1.0
    exponent: float = 1.0

    def __post_init__(self) -> None:
        _check_token(self.name, "attribute name")
        for attr in ("weight", "exponent"):
            v = getattr(self, attr)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, attr, float(v))
        if not isinstance(self.kind, Kind):
            raise SchemaError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if not isinstance(self.mode, Mode):
            raise SchemaError(f"attribute {self.name!r}: unknown mode {self.mode!r}")
        if self.kind == Kind.ORDINAL:
            if not self.levels:
                raise SchemaError(
                    f"attribute {self.name!r}: ordinal kind requires non-empty levels"
                )
            if len(set(self.levels)) != len(self.levels):
                raise SchemaError(f"attribute {self.name!r}: duplicate ordinal levels")
            for lv in self.levels:
                _check_token(lv, f"attribute {self.name!r}: level")
        elif self.levels:
            raise SchemaError(
                f"attribute {self.name!r}: levels are only allowed for ordinal kind"
            )
        if self.kind not in MODE_KINDS[self.mode]:
            raise SchemaError(
                f"attribute {self.name!r}: mode/kind mismatch "
                f"(mode {self.mode.value!r} cannot apply to kind {self.kind.value!r})"
            )
        if not isinstance(self.weight, float) or not math.isfinite(self.weight) or self.weight < 0:
            raise SchemaError(
                f"attribute {self.name!r}: weight must be a finite non-negative number"
            )
        if (
            not isinstance(self.exponent, float)
            or not math.isfinite(self.exponent)
            or self.exponent <= 0
        ):
            raise SchemaError(
                f"attribute {self.name!r}: exponent must be a finite positive number"
            )


@dataclass(frozen=True)
class Schema:
    """Ordered attribute declarations plus an optional prediction target."""

    attributes: tuple[AttributeSpec, ...]
    target: str | None = None

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate attribute names: {', '.join(dupes)}")
        if self.target is not None:
            if self.target not in names:
                raise SchemaError(f"target {self.target!r} is not a declared attribute")
            if self.attribute(self.target).kind != Kind.CATEGORICAL:
                raise SchemaError(f"target {self.target!r} must be a categorical attribute")
        if not self.feature_specs():
            raise SchemaError("schema needs at least one non-target attribute")

    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def attribute(self, name: str) -> AttributeSpec:
        for a in self.attributes:
            if a.name == name:
                return a
        raise SchemaError(f"no attribute named {name!r}")

    def index_of(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise SchemaError(f"no attribute named {name!r}")

    def feature_specs(self) -> tuple[AttributeSpec, ...]:
        """Attributes that take part in distances (everything but the target)."""
        return tuple(a for a in self.attributes if a.name != self.target)


_ATTRIBUTE_KEYS = {"name", "kind", "mode", "levels", "weight", "exponent"}
_SCHEMA_KEYS = {"attributes", "target"}


def _as_float(value: Any, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{context} must be a number, got {value!r}")
    return float(value)


def attribute_from_dict(obj: Any) -> AttributeSpec:
    if not isinstance(obj, dict):
        raise SchemaError(f"attribute entry must be an object, got {type(obj).__name__}")
    unknown = set(obj) - _ATTRIBUTE_KEYS
    if unknown:
        raise SchemaError(f"attribute entry has unknown keys: {', '.join(sorted(unknown))}")
    for req in ("name", "kind", "mode"):
        if req not in obj:
            raise SchemaError(f"attribute entry is missing required key {req!r}")
    name = obj["name"]
    if not isinstance(name, str):
        raise SchemaError(f"attribute name must be a string, got {name!r}")
    try:
        kind = Kind(obj["kind"])
    except ValueError:
        raise SchemaError(f"attribute {name!r}: unknown kind token {obj['kind']!r}") from None
    try:
        mode = Mode(obj["mode"])
    except ValueError:
        raise SchemaError(f"attribute {name!r}: unknown mode token {obj['mode']!r}") from None
    levels = obj.get("levels", [])
    if not isinstance(levels, list) or not all(isinstance(lv, str) for lv in levels):
        raise SchemaError(f"attribute {name!r}: levels must be a list of strings")
    weight = _as_float(obj.get("weight", 1.0), f"attribute {name!r}: weight")
    exponent = _as_float(obj.get("exponent", 1.0), f"attribute {name!r}: exponent")
    return AttributeSpec(
        name=name,
        kind=kind,
        mode=mode,
        levels=tuple(levels),
        weight=weight,
        exponent=exponent,
    )


def schema_from_dict(obj: Any) -> Schema:
    if not isinstance(obj, dict):
        raise SchemaError("schema document must be a JSON object")
    unknown = set(obj) - _SCHEMA_KEYS
    if unknown:
        raise SchemaError(f"schema document has unknown keys: {', '.join(sorted(unknown))}")
    if "attributes" not in obj or not isinstance(obj["attributes"], list):
        raise SchemaError("schema document needs an 'attributes' list")
    target = obj.get("target")
    if target is not None and not isinstance(target, str):
        raise SchemaError(f"target must be a string or null, got {target!r}")
    attributes = tuple(attribute_from_dict(a) for a in obj["attributes"])
    return Schema(attributes=attributes, target=target)


def schema_to_dict(schema: Schema) -> dict[str, Any]:
    attrs = []
    for a in schema.attributes:
        entry: dict[str, Any] = {"name": a.name, "kind": a.kind.value, "mode": a.mode.value}
        if a.levels:
            entry["levels"] = list(a.levels)
        entry["weight"] = a.weight
        entry["exponent"] = a.exponent
        attrs.append(entry)
    return {"attributes": attrs, "target": schema.target}


def parse_schema(text: str) -> Schema:
    """Parse a JSON schema document. See docs/format.md for the field list."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed schema document: {exc}") from None
    return schema_from_dict(obj)
