"""Condensed pairwise record-distance matrices.

Only the strict upper triangle is stored, row-major: entry (i, j) with
i < j lives at index i*n - i*(i+1)/2 + (j - i - 1).

The engine is vectorized per outer row and threaded over disjoint row
blocks, and still reproduces a plain record_distance double loop bit for
bit at any thread count. That works because every per-row profile value is
computed by the same scalar code the record path uses, and the pairwise
combination steps (subtract, abs, multiply, divide, sqrt) are elementary
IEEE operations that numpy and the scalar path perform identically, in the
same schema-order accumulation sequence. The one non-elementary step, a
general power, falls back to scalar evaluation inside the kernel.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Optional

import numpy as np

from .dataset import Dataset
from .errors import DataError, MetricError
from .metric import FittedMetric, record_distance
from .schema import Kind, Mode

MAGIC = b"MIXMAT01"

# Rows per parallel task. Small enough to balance the shrinking row lengths,
# large enough to amortize task overhead.
_BLOCK_ROWS = 128


def condensed_index(n: int, i: int, j: int) -> int:
    """Flat index of pair (i, j), i < j, in a condensed matrix of n records."""
    if not (0 <= i < j < n):
        raise ValueError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    return i * n - (i * (i + 1)) // 2 + (j - i - 1)


@dataclass(frozen=True, eq=False)
class CondensedMatrix:
    """Upper-triangle pairwise distances for n records, all in [0, 1]."""

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DataError(f"record count must be at least 1, got {self.n}")
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        expected = self.n * (self.n - 1) // 2
        if values.shape != (expected,):
            raise DataError(
                f"condensed matrix for n={self.n} needs {expected} values, "
                f"got shape {values.shape}"
            )
        if expected and not (np.all(values >= 0.0) and np.all(values <= 1.0)):
            raise DataError("condensed matrix entries must lie in [0, 1]")

    def get(self, i: int, j: int) -> float:
        if i == j:
            if not 0 <= i < self.n:
                raise ValueError(f"index {i} out of range for n={self.n}")
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[condensed_index(self.n, i, j)])


class _AttrColumn:
    """Precomputed per-row profile of one attribute, ready for pairwise use."""

    __slots__ = ("weight", "gamma", "op", "values", "divisor", "present")

    def __init__(self, weight, gamma, op, values, divisor, present):
        self.weight = weight
        self.gamma = gamma
        self.op = op  # 'absdiff_half' | 'absdiff_clamp' | 'counts' | 'range' | 'equality'
        self.values = values
        self.divisor = divisor
        self.present = present  # bool array, or None when nothing is missing

    def pair_tail(self, i: int) -> np.ndarray:
        """Distances of row i against rows i+1.., before masking and weighting.
        Missing lanes may hold nan; the caller masks them out."""
        v = self.values
        tail = v[i + 1 :]
        if self.op == "absdiff_half":
            d = np.abs(v[i] - tail)
            d = 0.5 * d
        elif self.op == "absdiff_clamp":
            d = np.abs(v[i] - tail)
            d = np.minimum(d, 1.0)
        elif self.op == "counts":
            d = np.abs(v[i] - tail)
            d = d / self.divisor
        elif self.op == "range":
            d = np.abs(v[i] - tail)
            d = d / self.divisor
            d = np.minimum(d, 1.0)
        else:  # equality
            d = (v[i] != tail).astype(np.float64)
        g = self.gamma
        if g == 1.0:
            return d
        if g == 2.0:
            return d * d
        if g == 0.5:
            return np.sqrt(d)
        # General exponents use the scalar power so the bits match the
        # record path; this is the slow lane, pay it only when configured.
        return np.array([x ** g if not math.isnan(x) else x for x in d.tolist()])


def _build_columns(fm: FittedMetric, data: Dataset) -> list[_AttrColumn]:
    columns = []
    target = fm.schema.target
    feature_cols = [
        col for spec, col in zip(fm.schema.attributes, data.columns) if spec.name != target
    ]
    for spec, model, col in zip(fm.feature_specs, fm.models, feature_cols):
        present_list = [v is not None for v in col]
        all_present = all(present_list)
        present = None if all_present else np.array(present_list, dtype=bool)
        divisor = None
        if spec.kind == Kind.NUMERIC:
            values = np.array(
                [v if v is not None else math.nan for v in col], dtype=np.float64
            )
            if spec.mode == Mode.PROB_GAUSSIAN:
                if model.degenerate:
                    op = "equality"
                else:
                    op = "absdiff_half"
                    values = np.array(
                        [model.erf_term(v) if v is not None else math.nan for v in col],
                        dtype=np.float64,
                    )
            elif spec.mode == Mode.PROB_EMPIRICAL:
                op = "counts"
                divisor = model.n
                values = np.array(
                    [model.count_le(v) if v is not None else math.nan for v in col],
                    dtype=np.float64,
                )
            else:  # gower
                if model.degenerate:
                    op = "equality"
                else:
                    op = "range"
                    divisor = model.width
        elif spec.mode == Mode.PROB_ORDINAL:
            op = "absdiff_clamp"
            values = np.array(
                [model.cdf_at(v) if v is not None else math.nan for v in col],
                dtype=np.float64,
            )
        else:  # exact_match
            op = "equality"
            codes: dict[str, int] = {}
            enc = []
            for v in col:
                if v is None:
                    enc.append(-1)
                else:
                    enc.append(codes.setdefault(v, len(codes)))
            values = np.array(enc, dtype=np.int64)
        columns.append(
            _AttrColumn(
                weight=spec.weight,
                gamma=spec.exponent,
                op=op,
                values=values,
                divisor=divisor,
                present=present,
            )
        )
    return columns


def _fill_rows(
    out: np.ndarray,
    columns: list[_AttrColumn],
    fm: FittedMetric,
    data: Dataset,
    n: int,
    row_start: int,
    row_stop: int,
) -> None:
    for i in range(row_start, row_stop):
        ln = n - 1 - i
        if ln == 0:
            continue
        num = np.zeros(ln)
        den = np.zeros(ln)
        for c in columns:
            if c.weight == 0.0:
                continue
            d = c.pair_tail(i)
            if c.present is None:
                num += c.weight * d
                den += c.weight
            else:
                pm = c.present[i] & c.present[i + 1 :]
                num += c.weight * np.where(pm, d, 0.0)
                den += c.weight * pm
        if not np.all(den > 0.0):
            j = i + 1 + int(np.argmin(den > 0.0))
            # Recompute the offending pair on the record path for the
            # precise reason (missing everywhere vs zero total weight).
            try:
                record_distance(fm, data.feature_row(i), data.feature_row(j))
            except MetricError as exc:
                raise MetricError(f"rows {i + 1} and {j + 1}: {exc}") from None
            raise MetricError(  # pragma: no cover
                f"rows {i + 1} and {j + 1}: no aggregate distance"
            )
        offset = i * n - (i * (i + 1)) // 2
        out[offset : offset + ln] = num / den


def resolve_threads(threads: Optional[int] = None) -> int:
    """Thread count to use: explicit argument, else MIXMETRIC_THREADS, else
    the machine's core count."""
    if threads is None:
        env = os.environ.get("MIXMETRIC_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise DataError(f"MIXMETRIC_THREADS must be an integer, got {env!r}") from None
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise DataError(f"thread count must be at least 1, got {threads}")
    return threads


def pairwise_matrix(
    fm: FittedMetric, data: Dataset, threads: Optional[int] = None
) -> CondensedMatrix:
    """All pairwise record distances of `data` under `fm`, condensed.

    The result does not depend on `threads`; blocks of outer rows are
    computed independently into disjoint output ranges.
    """
    if data.schema != fm.schema:
        raise DataError("dataset schema does not match the fitted metric's schema")
    n = data.n_rows
    if n < 2:
        raise DataError(f"pairwise matrix needs at least 2 records, got {n}")
    threads = resolve_threads(threads)
    columns = _build_columns(fm, data)
    out = np.empty(n * (n - 1) // 2, dtype=np.float64)

    blocks = [
        (start, min(start + _BLOCK_ROWS, n - 1)) for start in range(0, n - 1, _BLOCK_ROWS)
    ]
    if threads == 1 or len(blocks) == 1:
        for start, stop in blocks:
            _fill_rows(out, columns, fm, data, n, start, stop)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_fill_rows, out, columns, fm, data, n, start, stop)
                for start, stop in blocks
            ]
            for f in futures:
                f.result()
    return CondensedMatrix(n=n, values=out)


def serial_pairwise_matrix(fm: FittedMetric, data: Dataset) -> CondensedMatrix:
    """Reference implementation: one record_distance call per pair."""
    n = data.n_rows
    if n < 2:
        raise DataError(f"pairwise matrix needs at least 2 records, got {n}")
    rows = data.feature_rows()
    out = np.empty(n * (n - 1) // 2, dtype=np.float64)
    pos = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            out[pos] = record_distance(fm, rows[i], rows[j])
            pos += 1
    return CondensedMatrix(n=n, values=out)


def write_matrix_text(m: CondensedMatrix, f: IO[str]) -> None:
    """Header `n=<n>` then one distance per line, 17 significant digits."""
    f.write(f"n={m.n}\n")
    chunk = 65536
    values = m.values
    for start in range(0, len(values), chunk):
        part = values[start : start + chunk].tolist()
        f.write("".join(f"{v:.17g}\n" for v in part))


def read_matrix_text(text: str) -> CondensedMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("n="):
        raise DataError("matrix text must start with an 'n=<count>' header")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise DataError(f"bad record count in header {lines[0]!r}") from None
    try:
        values = np.array([float(s) for s in lines[1:]], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"bad matrix entry: {exc}") from None
    return CondensedMatrix(n=n, values=values)


def write_matrix_binary(m: CondensedMatrix, f: IO[bytes]) -> None:
    """Magic `MIXMAT01`, little-endian u64 record count, then the condensed
    values as little-endian 64-bit floats."""
    f.write(MAGIC)
    f.write(struct.pack("<Q", m.n))
    f.write(np.ascontiguousarray(m.values, dtype="<f8").tobytes())


def read_matrix_binary(blob: bytes) -> CondensedMatrix:
    if len(blob) < len(MAGIC) + 8 or blob[: len(MAGIC)] != MAGIC:
        raise DataError("not a condensed matrix binary (bad magic)")
    (n,) = struct.unpack_from("<Q", blob, len(MAGIC))
    body = blob[len(MAGIC) + 8 :]
    expected = n * (n - 1) // 2 * 8
    if len(body) != expected:
        raise DataError(
            f"matrix binary for n={n} should carry {expected} payload bytes, got {len(body)}"
        )
    values = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return CondensedMatrix(n=int(n), values=values)
