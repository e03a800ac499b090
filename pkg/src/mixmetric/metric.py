"""Per-attribute distances and their weighted aggregation into a record
distance.

Every per-attribute distance lands in [0, 1], is symmetric, and is zero on
equal inputs. The probabilistic family measures the probability mass of the
interval between the two compared values under the attribute's fitted
distribution; the classic alternatives are range-normalized absolute
difference (numeric) and exact match (tokens). A per-attribute exponent
reshapes each distance before the Gower-style weighted mean combines them.

Implementation note on exactness: the empirical route subtracts the two
integer sample counts before the single division by n, so the result is the
correctly rounded fraction of samples in the half-open interval. Evaluating
the two CDF values first and subtracting can be off by one ulp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .dataset import Dataset, Value
from .distributions import (
    EmpiricalCdfModel,
    GaussianModel,
    OrdinalCdfModel,
    RangeModel,
    fit_empirical,
    fit_gaussian,
    fit_ordinal,
    fit_range,
)
from .errors import FitError, MetricError
from .schema import AttributeSpec, Kind, Mode, Schema


@dataclass(frozen=True)
class CategoricalMarker:
    """Placeholder model for exact-match attributes; they carry no fitted state."""


AttributeModel = Union[
    GaussianModel, EmpiricalCdfModel, OrdinalCdfModel, RangeModel, CategoricalMarker
]

_MODE_MODEL = {
    Mode.GOWER: RangeModel,
    Mode.PROB_GAUSSIAN: GaussianModel,
    Mode.PROB_EMPIRICAL: EmpiricalCdfModel,
    Mode.PROB_ORDINAL: OrdinalCdfModel,
    Mode.EXACT_MATCH: CategoricalMarker,
}


@dataclass(frozen=True)
class FittedMetric:
    """A schema plus one fitted model per non-target attribute.

    This is the serializable unit of the system; see model_io for the
    document format.
    """

    schema: Schema
    models: tuple[AttributeModel, ...]

    def __post_init__(self) -> None:
        specs = self.schema.feature_specs()
        if len(self.models) != len(specs):
            raise MetricError(
                f"expected {len(specs)} models for the non-target attributes, "
                f"got {len(self.models)}"
            )
        for spec, model in zip(specs, self.models):
            expected = _MODE_MODEL[spec.mode]
            if not isinstance(model, expected):
                raise MetricError(
                    f"attribute {spec.name!r}: mode {spec.mode.value!r} needs a "
                    f"{expected.__name__}, got {type(model).__name__}"
                )
            if isinstance(model, OrdinalCdfModel) and model.levels != spec.levels:
                raise MetricError(
                    f"attribute {spec.name!r}: ordinal model levels do not match the schema"
                )

    @property
    def feature_specs(self) -> tuple[AttributeSpec, ...]:
        return self.schema.feature_specs()


def fit_metric(data: Dataset) -> FittedMetric:
    """Fit one model per non-target attribute from the dataset's columns.

    Missing values are excluded per attribute; an attribute with no
    non-missing values at all cannot be fitted and raises.
    """
    target = data.schema.target
    models: list[AttributeModel] = []
    for spec, column in zip(data.schema.attributes, data.columns):
        if spec.name == target:
            continue
        present = [v for v in column if v is not None]
        if not present:
            raise FitError(f"attribute {spec.name!r} has no non-missing values")
        if spec.mode == Mode.GOWER:
            models.append(fit_range(present))
        elif spec.mode == Mode.PROB_GAUSSIAN:
            models.append(fit_gaussian(present))
        elif spec.mode == Mode.PROB_EMPIRICAL:
            models.append(fit_empirical(present))
        elif spec.mode == Mode.PROB_ORDINAL:
            models.append(fit_ordinal(column, spec.levels))
        else:
            models.append(CategoricalMarker())
    return FittedMetric(schema=data.schema, models=tuple(models))


def prob_distance_cdf(cdf: Callable[[float], float], x1: float, x2: float) -> float:
    """|F(x1) - F(x2)| for any CDF: the probability mass of the interval
    between the two values."""
    return abs(cdf(x1) - cdf(x2))


def prob_distance_empirical(model: EmpiricalCdfModel, x1: float, x2: float) -> float:
    """Interval mass under the empirical step CDF.

    Exactly the fraction of stored samples in (min(x1, x2), max(x1, x2)]:
    integer counts are subtracted before the one division by n.
    """
    return abs(model.count_le(x1) - model.count_le(x2)) / model.n


def prob_distance_gaussian(model: GaussianModel, x1: float, x2: float) -> float:
    """Interval mass under the fitted Gaussian, as half the absolute
    difference of the two erf terms.

    A degenerate model (sigma = 0) is the point-mass limit: 0 on equal
    inputs, 1 otherwise.
    """
    if model.degenerate:
        return 0.0 if x1 == x2 else 1.0
    return 0.5 * abs(model.erf_term(x1) - model.erf_term(x2))


def prob_distance_ordinal(model: OrdinalCdfModel, l1: str, l2: str) -> float:
    """Mass of the levels strictly above the lower of the two, up to and
    including the higher: |F(i) - F(j)| on the binned CDF."""
    d = abs(model.cdf_at(l1) - model.cdf_at(l2))
    # The running F can exceed 1 by an ulp when the pmf entries are inexact.
    return d if d <= 1.0 else 1.0


def gower_numeric(model: RangeModel, x1: float, x2: float) -> float:
    """Range-normalized absolute difference, clamped to [0, 1].

    Queries outside the fitted range clamp at 1 rather than exceeding it.
    A degenerate range (max = min) degrades to an equality test.
    """
    if model.degenerate:
        return 0.0 if x1 == x2 else 1.0
    d = abs(x1 - x2) / model.width
    return d if d <= 1.0 else 1.0


def match_distance(c1: str, c2: str) -> float:
    """0 on equal tokens, 1 otherwise."""
    return 0.0 if c1 == c2 else 1.0


def power_transform(d: float, gamma: float) -> float:
    """d raised to gamma, for d in [0, 1] and gamma > 0.

    Monotone in d with fixed points 0 and 1. The common exponents 1, 2 and
    0.5 use plain multiply/sqrt so scalar and vectorized evaluations agree
    bit for bit.
    """
    if gamma == 1.0:
        return d
    if gamma == 2.0:
        return d * d
    if gamma == 0.5:
        return math.sqrt(d)
    return d ** gamma


def _as_number(v: Value, spec: AttributeSpec) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MetricError(
            f"attribute {spec.name!r} is numeric but got value {v!r}"
        )
    return float(v)


def _as_token(v: Value, spec: AttributeSpec) -> str:
    if not isinstance(v, str):
        raise MetricError(f"attribute {spec.name!r} expects a token but got value {v!r}")
    return v


def attribute_distance(
    spec: AttributeSpec, model: AttributeModel, v1: Value, v2: Value
) -> Optional[float]:
    """Distance between two values of one attribute, or None when either
    value is missing. Applies the attribute's exponent."""
    if v1 is None or v2 is None:
        return None
    if spec.mode == Mode.GOWER:
        d = gower_numeric(model, _as_number(v1, spec), _as_number(v2, spec))
    elif spec.mode == Mode.PROB_GAUSSIAN:
        d = prob_distance_gaussian(model, _as_number(v1, spec), _as_number(v2, spec))
    elif spec.mode == Mode.PROB_EMPIRICAL:
        d = prob_distance_empirical(model, _as_number(v1, spec), _as_number(v2, spec))
    elif spec.mode == Mode.PROB_ORDINAL:
        d = prob_distance_ordinal(model, _as_token(v1, spec), _as_token(v2, spec))
    else:
        d = match_distance(_as_token(v1, spec), _as_token(v2, spec))
    return power_transform(d, spec.exponent)


def record_distance(fm: FittedMetric, r1: Sequence[Value], r2: Sequence[Value]) -> float:
    """Weighted mean of the per-attribute distances over the attributes
    comparable in both records.

    Attributes where either record is missing drop out and the weights
    renormalize (pairwise deletion). Accumulation follows schema order, so
    repeated evaluations are bit-identical no matter who calls.
    """
    specs = fm.feature_specs
    if len(r1) != len(specs) or len(r2) != len(specs):
        raise MetricError(
            f"records must have {len(specs)} values, got {len(r1)} and {len(r2)}"
        )
    num = 0.0
    den = 0.0
    any_present = False
    for spec, model, v1, v2 in zip(specs, fm.models, r1, r2):
        d = attribute_distance(spec, model, v1, v2)
        if d is None:
            continue
        any_present = True
        if spec.weight == 0.0:
            continue
        num += spec.weight * d
        den += spec.weight
    if not any_present:
        raise MetricError("no comparable attributes")
    if den == 0.0:
        raise MetricError("total weight is zero over the comparable attributes")
    return num / den


def record_similarity(fm: FittedMetric, r1: Sequence[Value], r2: Sequence[Value]) -> float:
    """Complement of record_distance: 1 is identical, 0 maximally dissimilar."""
    return 1.0 - record_distance(fm, r1, r2)
