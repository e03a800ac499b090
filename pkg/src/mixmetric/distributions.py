"""Per-attribute distribution models and their fitting routines.

Four model families back the distances: a Gaussian (mean and unbiased
standard deviation), an empirical step CDF (the sorted sample itself), a
binned ordinal CDF (relative level frequencies), and a min-max range used
by the classic range-normalized numeric distance.

All models are immutable once fitted and safe to evaluate concurrently.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import FitError, MetricError

SQRT2 = math.sqrt(2.0)

# Tolerance on an ordinal PMF summing to one. Relative frequencies of counts
# accumulate at most a few ulps of drift.
PMF_SUM_TOL = 1e-12


def erf(x: float) -> float:
    """Gauss error function.

    Odd, strictly increasing, bounded in (-1, 1). Accuracy contract:
    absolute error at most 1e-12 (the platform implementation is far
    better, about 1 ulp).
    """
    return math.erf(x)


def std_normal_cdf(z: float) -> float:
    """Standard normal CDF via (1 + erf(z / sqrt(2))) / 2."""
    return 0.5 * (1.0 + math.erf(z / SQRT2))


@dataclass(frozen=True)
class GaussianModel:
    """Normal distribution with mean `mu` and standard deviation `sigma`.

    `sigma` may be zero (single sample or constant column); the model is
    then degenerate and downstream distances fall back to an equality test.
    """

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise FitError("Gaussian parameters must be finite")
        if self.sigma < 0.0:
            raise FitError("Gaussian sigma must be non-negative")

    @property
    def degenerate(self) -> bool:
        return self.sigma == 0.0

    def erf_term(self, x: float) -> float:
        """erf of the z-score over sqrt(2); the building block of the
        half-difference distance. Requires a non-degenerate model."""
        z = (x - self.mu) / self.sigma
        return math.erf(z / SQRT2)

    def cdf(self, x: float) -> float:
        if self.degenerate:
            return 0.0 if x < self.mu else 1.0
        return std_normal_cdf((x - self.mu) / self.sigma)


@dataclass(frozen=True)
class EmpiricalCdfModel:
    """Empirical step CDF: F(x) = (#samples <= x) / n, no smoothing."""

    samples: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.samples:
            raise FitError("empirical model needs at least one sample")
        prev = None
        for s in self.samples:
            if not isinstance(s, float) or not math.isfinite(s):
                raise FitError(f"empirical sample {s!r} is not a finite number")
            if prev is not None and s < prev:
                raise FitError("empirical samples must be non-decreasing")
            prev = s

    @property
    def n(self) -> int:
        return len(self.samples)

    def count_le(self, x: float) -> int:
        """Number of stored samples <= x (right-continuous counting)."""
        return bisect_right(self.samples, x)

    def cdf(self, x: float) -> float:
        return self.count_le(x) / self.n


@dataclass(frozen=True)
class OrdinalCdfModel:
    """Binned ordinal distribution: one probability mass per declared level.

    `cdf` is derived from `pmf` by a running sum at construction time, so
    equal `pmf` inputs always produce bit-equal `cdf` vectors.
    """

    levels: tuple[str, ...]
    pmf: tuple[float, ...]
    cdf: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not self.levels:
            raise FitError("ordinal model needs at least one level")
        if len(set(self.levels)) != len(self.levels):
            raise FitError("ordinal levels must be unique")
        if len(self.pmf) != len(self.levels):
            raise FitError(
                f"pmf length {len(self.pmf)} does not match {len(self.levels)} levels"
            )
        for p in self.pmf:
            if not isinstance(p, float) or not math.isfinite(p) or p < 0.0:
                raise FitError(f"pmf entry {p!r} is not a non-negative finite number")
        if abs(math.fsum(self.pmf) - 1.0) > PMF_SUM_TOL:
            raise FitError(f"pmf entries sum to {math.fsum(self.pmf)!r}, not 1")
        running = []
        acc = 0.0
        for p in self.pmf:
            acc += p
            running.append(acc)
        object.__setattr__(self, "cdf", tuple(running))
        object.__setattr__(self, "_index", {lv: i for i, lv in enumerate(self.levels)})

    def index(self, level: str) -> int:
        try:
            return self._index[level]  # type: ignore[attr-defined]
        except KeyError:
            raise MetricError(f"unknown ordinal level {level!r}") from None

    def cdf_at(self, level: str) -> float:
        return self.cdf[self.index(level)]


@dataclass(frozen=True)
class RangeModel:
    """Observed min and max of a numeric column; the normalizer of the
    classic range-scaled numeric distance."""

    min: float
    max: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise FitError("range bounds must be finite")
        if self.min > self.max:
            raise FitError(f"range min {self.min!r} exceeds max {self.max!r}")

    @property
    def degenerate(self) -> bool:
        return self.min == self.max

    @property
    def width(self) -> float:
        return self.max - self.min


def _finite_samples(samples: Iterable[float], what: str) -> list[float]:
    out = []
    for s in samples:
        if isinstance(s, bool) or not isinstance(s, (int, float)):
            raise FitError(f"{what}: sample {s!r} is not a number")
        s = float(s)
        if not math.isfinite(s):
            raise FitError(f"{what}: sample {s!r} is not finite")
        out.append(s)
    return out


def fit_gaussian(samples: Sequence[float]) -> GaussianModel:
    """Mean and unbiased (n-1) standard deviation of `samples`.

    A single sample, or an all-equal sample, fits sigma = 0 and the model
    is flagged degenerate.
    """
    xs = _finite_samples(samples, "fit_gaussian")
    if not xs:
        raise FitError("fit_gaussian: no samples")
    n = len(xs)
    mu = math.fsum(xs) / n
    if n == 1:
        return GaussianModel(mu=mu, sigma=0.0)
    var = math.fsum((x - mu) ** 2 for x in xs) / (n - 1)
    return GaussianModel(mu=mu, sigma=math.sqrt(var))


def fit_empirical(samples: Sequence[float]) -> EmpiricalCdfModel:
    """Store a sorted copy of `samples` (duplicates kept)."""
    xs = _finite_samples(samples, "fit_empirical")
    if not xs:
        raise FitError("fit_empirical: no samples")
    return EmpiricalCdfModel(samples=tuple(sorted(xs)))


def fit_ordinal(column: Sequence[Optional[str]], levels: Sequence[str]) -> OrdinalCdfModel:
    """Relative level frequencies over the non-missing entries of `column`.

    Levels that never occur get zero mass; there is no smoothing.
    """
    levels = tuple(levels)
    level_pos = {lv: i for i, lv in enumerate(levels)}
    counts = [0] * len(levels)
    n = 0
    for tok in column:
        if tok is None:
            continue
        if tok not in level_pos:
            raise FitError(f"fit_ordinal: token {tok!r} is not one of the declared levels")
        counts[level_pos[tok]] += 1
        n += 1
    if n == 0:
        raise FitError("fit_ordinal: no non-missing entries")
    pmf = tuple(c / n for c in counts)
    return OrdinalCdfModel(levels=levels, pmf=pmf)


def fit_range(samples: Sequence[float]) -> RangeModel:
    """Min and max of `samples`."""
    xs = _finite_samples(samples, "fit_range")
    if not xs:
        raise FitError("fit_range: no samples")
    return RangeModel(min=min(xs), max=max(xs))


def empirical_cdf(model: EmpiricalCdfModel, x: float) -> float:
    """F(x) = (#samples <= x) / n for the fitted empirical model."""
    return model.cdf(x)
