"""Mixed-data distances, pairwise matrices, and nearest-neighbor prediction."""

from .dataset import Dataset, parse_csv, parse_row, render_csv
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
from .errors import (
    DataError,
    FitError,
    MetricError,
    MixMetricError,
    ModelFormatError,
    SchemaError,
)
from .matrix import (
    CondensedMatrix,
    condensed_index,
    pairwise_matrix,
    read_matrix_binary,
    read_matrix_text,
    serial_pairwise_matrix,
    write_matrix_binary,
    write_matrix_text,
)
from .metric import (
    FittedMetric,
    attribute_distance,
    fit_metric,
    power_transform,
    record_distance,
    record_similarity,
)
from .model_io import load_model, save_model
from .predictor import (
    PredictionResult,
    TrainedPredictor,
    loo_accuracy,
    predict,
    predictor_from_fitted,
    train,
)
from .schema import AttributeSpec, Kind, Mode, Schema, parse_schema

__version__ = "0.1.0"

__all__ = [
    "AttributeSpec",
    "CondensedMatrix",
    "DataError",
    "Dataset",
    "EmpiricalCdfModel",
    "FitError",
    "FittedMetric",
    "GaussianModel",
    "Kind",
    "MetricError",
    "MixMetricError",
    "Mode",
    "ModelFormatError",
    "OrdinalCdfModel",
    "PredictionResult",
    "RangeModel",
    "Schema",
    "SchemaError",
    "TrainedPredictor",
    "attribute_distance",
    "condensed_index",
    "fit_empirical",
    "fit_gaussian",
    "fit_metric",
    "fit_ordinal",
    "fit_range",
    "loo_accuracy",
    "pairwise_matrix",
    "parse_csv",
    "parse_row",
    "parse_schema",
    "power_transform",
    "predict",
    "predictor_from_fitted",
    "read_matrix_binary",
    "read_matrix_text",
    "record_distance",
    "record_similarity",
    "render_csv",
    "save_model",
    "serial_pairwise_matrix",
    "train",
    "write_matrix_binary",
    "write_matrix_text",
]
