"""Exception hierarchy. Every failure raised by this package derives from
MixMetricError so callers (and the CLI) can catch one base class."""


class MixMetricError(Exception):
    """Base class for all mixmetric errors."""


class SchemaError(MixMetricError):
    """Invalid schema document or attribute declaration."""


class DataError(MixMetricError):
    """Malformed CSV input or a dataset that violates its schema."""


class ModelFormatError(MixMetricError):
    """Unreadable, corrupted, or wrong-version model document."""


class FitError(MixMetricError):
    """Model fitting failed (for example, no usable samples)."""


class MetricError(MixMetricError):
    """Distance evaluation failed (for example, no comparable attributes)."""
