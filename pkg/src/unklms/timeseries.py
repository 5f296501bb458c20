"""Scalar series: generation, CSV ingestion, and delay embedding."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractViolation, IngestionError
from .kernels import InputVector


@dataclass(frozen=True)
class TimeSeries:
    """A scalar sequence; values are finite except for NaN gaps awaiting fill."""

    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ContractViolation(f"series must be 1-D, got shape {arr.shape}")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EmbeddedSample:
    """One regression pair: the d previous values and the current target.

    ``index`` is the target's position in the source series.
    """

    input: InputVector
    target: float
    index: int


def forward_fill(values: np.ndarray) -> np.ndarray:
    """Replace each NaN with the most recent observed value.

    A NaN before any observation cannot be filled and raises
    IngestionError.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractViolation(f"expected 1-D values, got shape {arr.shape}")
    out = arr.copy()
    last = math.nan
    for i, v in enumerate(out):
        if math.isnan(v):
            if math.isnan(last):
                raise IngestionError(f"missing value at position {i} has no predecessor")
            out[i] = last
        else:
            last = v
    return out


def embed(series: TimeSeries, d: int) -> list[EmbeddedSample]:
    """Delay-embed: input_i = values[i-d:i], target_i = values[i].

    Yields len(series) - d samples; needs at least d+1 values.
    """
    if d < 1:
        raise ConfigError(f"embedding order must be >= 1, got {d}")
    vals = series.values
    if len(vals) <= d:
        raise IngestionError(
            f"series {series.name!r} has {len(vals)} values; need more than {d}"
        )
    if np.isnan(vals).any():
        raise IngestionError("series contains unfilled missing values")
    return [
        EmbeddedSample(InputVector(vals[i - d : i]), float(vals[i]), i)
        for i in range(d, len(vals))
    ]


def gen_sinewave(
    n: int, amplitude: float = 1.0, period: float = 20.0, phase: float = 0.0
) -> TimeSeries:
    """amplitude * sin(2 pi i / period + phase), i = 0..n-1."""
    if n < 0:
        raise ConfigError(f"sample count must be >= 0, got {n}")
    if period <= 0:
        raise ConfigError(f"period must be positive, got {period}")
    i = np.arange(n, dtype=np.float64)
    return TimeSeries(amplitude * np.sin(2.0 * np.pi * i / period + phase), name="sinewave")


def gen_linear_ramp(n: int, slope: float = 1.0, intercept: float = 0.0) -> TimeSeries:
    """intercept + slope * i, i = 0..n-1. Norm grows without bound."""
    if n < 0:
        raise ConfigError(f"sample count must be >= 0, got {n}")
    i = np.arange(n, dtype=np.float64)
    return TimeSeries(intercept + slope * i, name="ramp")


def _parse_cell(cell: str, where: str) -> float:
    cell = cell.strip()
    if cell == "" or cell.lower() == "nan":
        return math.nan
    try:
        return float(cell)
    except ValueError:
        raise IngestionError(f"non-numeric value {cell!r} at {where}") from None


def load_csv(path: str, column: str | int, name: str = "") -> TimeSeries:
    """Read one numeric column, selected by header name or 0-based index.

    Empty cells, blank lines, and the token "nan" are missing markers and
    get forward-filled. With an integer column a leading non-numeric row is
    treated as a header and skipped.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    start = 0
    if isinstance(column, int):
        idx = column
        if rows and rows[0] and idx < len(rows[0]):
            try:
                float(rows[0][idx])
            except ValueError:
                start = 1  # header row
    else:
        if not rows or column not in rows[0]:
            raise IngestionError(f"column {column!r} not found in {path}")
        idx = rows[0].index(column)
        start = 1
    raw = []
    for row_no, row in enumerate(rows[start:], start=start + 1):
        if not row:  # blank line: a record whose fields are all missing
            raw.append(math.nan)
            continue
        cell = row[idx] if idx < len(row) else ""
        raw.append(_parse_cell(cell, f"{path}:{row_no}"))
    if not raw:
        raise IngestionError(f"no data rows in {path}")
    return TimeSeries(
        forward_fill(np.array(raw)), name=name or (column if isinstance(column, str) else "")
    )
