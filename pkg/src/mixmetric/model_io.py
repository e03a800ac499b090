"""Versioned JSON serialization of fitted metrics.

The document is plain JSON with floats in shortest round-trip form, so
load_model(save_model(m)) reproduces every numeric parameter bit for bit.
Field names are frozen in docs/format.md.
"""

from __future__ import annotations

import json
from typing import Any

from .distributions import (
    EmpiricalCdfModel,
    GaussianModel,
    OrdinalCdfModel,
    RangeModel,
)
from .errors import FitError, MetricError, ModelFormatError
from .metric import AttributeModel, CategoricalMarker, FittedMetric
from .schema import schema_from_dict, schema_to_dict

FORMAT_NAME = "mixmetric-model"
FORMAT_VERSION = 1


def _model_to_dict(model: AttributeModel) -> dict[str, Any]:
    if isinstance(model, GaussianModel):
        return {"type": "gaussian", "mu": model.mu, "sigma": model.sigma}
    if isinstance(model, EmpiricalCdfModel):
        return {"type": "empirical", "samples": list(model.samples)}
    if isinstance(model, OrdinalCdfModel):
        return {"type": "ordinal", "levels": list(model.levels), "pmf": list(model.pmf)}
    if isinstance(model, RangeModel):
        return {"type": "range", "min": model.min, "max": model.max}
    if isinstance(model, CategoricalMarker):
        return {"type": "categorical"}
    raise ModelFormatError(f"cannot serialize model of type {type(model).__name__}")


def _require_number(obj: dict[str, Any], key: str, context: str) -> float:
    if key not in obj:
        raise ModelFormatError(f"{context}: missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ModelFormatError(f"{context}: field {key!r} must be a number, got {v!r}")
    return float(v)


def _number_list(obj: dict[str, Any], key: str, context: str) -> list[float]:
    if key not in obj or not isinstance(obj[key], list):
        raise ModelFormatError(f"{context}: missing or non-list field {key!r}")
    out = []
    for v in obj[key]:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ModelFormatError(f"{context}: {key!r} entries must be numbers, got {v!r}")
        out.append(float(v))
    return out


_MODEL_FIELDS = {
    "gaussian": {"type", "mu", "sigma"},
    "empirical": {"type", "samples"},
    "ordinal": {"type", "levels", "pmf"},
    "range": {"type", "min", "max"},
    "categorical": {"type"},
}


def _model_from_dict(obj: Any, context: str) -> AttributeModel:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ModelFormatError(f"{context}: model entry must be an object with a 'type'")
    kind = obj["type"]
    allowed = _MODEL_FIELDS.get(kind)
    if allowed is not None:
        extra = sorted(set(obj) - allowed)
        if extra:
            raise ModelFormatError(f"{context}: unknown fields {', '.join(extra)}")
    try:
        if kind == "gaussian":
            return GaussianModel(
                mu=_require_number(obj, "mu", context),
                sigma=_require_number(obj, "sigma", context),
            )
        if kind == "empirical":
            return EmpiricalCdfModel(samples=tuple(_number_list(obj, "samples", context)))
        if kind == "ordinal":
            levels = obj.get("levels")
            if not isinstance(levels, list) or not all(isinstance(lv, str) for lv in levels):
                raise ModelFormatError(f"{context}: 'levels' must be a list of strings")
            return OrdinalCdfModel(
                levels=tuple(levels), pmf=tuple(_number_list(obj, "pmf", context))
            )
        if kind == "range":
            return RangeModel(
                min=_require_number(obj, "min", context),
                max=_require_number(obj, "max", context),
            )
        if kind == "categorical":
            return CategoricalMarker()
    except FitError as exc:
        raise ModelFormatError(f"{context}: corrupted model parameters ({exc})") from None
    raise ModelFormatError(f"{context}: unknown model type {kind!r}")


def save_model(fm: FittedMetric) -> str:
    """Render a fitted metric as a versioned JSON document."""
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "schema": schema_to_dict(fm.schema),
        "models": [_model_to_dict(m) for m in fm.models],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_model(text: str) -> FittedMetric:
    """Parse a model document, checking the format tag and version."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"corrupted model document: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    if doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document (format={doc.get('format')!r})")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model document version {doc.get('version')!r} "
            f"(expected {FORMAT_VERSION})"
        )
    extra = sorted(set(doc) - {"format", "version", "schema", "models"})
    if extra:
        raise ModelFormatError(f"model document has unknown fields: {', '.join(extra)}")
    if "schema" not in doc or "models" not in doc or not isinstance(doc["models"], list):
        raise ModelFormatError("model document needs 'schema' and a 'models' list")
    schema = schema_from_dict(doc["schema"])
    models = tuple(
        _model_from_dict(entry, f"model {i}") for i, entry in enumerate(doc["models"])
    )
    try:
        return FittedMetric(schema=schema, models=models)
    except MetricError as exc:
        raise ModelFormatError(f"model document does not match its schema: {exc}") from None
