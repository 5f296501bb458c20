"""Dictionary of centres and the novelty sparsification decision.

A dictionary only grows: a sample is admitted as a new centre when it is
both far from every existing centre and poorly predicted. Two variants of
"far" are supported:

* ``RAW`` mode (standard Gaussian KLMS): Euclidean distance to the nearest
  centre must exceed ``delta_dict``, and the absolute error must exceed
  ``delta_pred``.
* ``UNIT_NORM`` mode: the largest Gaussian-kernel similarity between the
  normalised input and the (unit-norm) centres must fall below
  ``delta_dict``, and the relative error must exceed ``delta_pred``. Using
  the kernel as the similarity statistic keeps ``delta_dict`` in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, ContractViolation, DictionaryCapExceeded
from .kernels import InputVector, gaussian_row


class DictionaryMode(Enum):
    RAW = "raw"
    UNIT_NORM = "unitnorm"


@dataclass(frozen=True)
class Centre:
    """One retained centre: its vector, when it was added, and the norm of
    the raw sample that produced it (diagnostic only)."""

    vector: InputVector
    added_at: int
    original_norm: float


@dataclass
class NoveltyConfig:
    """Thresholds for the novelty criterion.

    ``delta_dict`` is a kernel similarity in [0, 1) in UNIT_NORM mode and a
    Euclidean distance > 0 in RAW mode. ``delta_pred`` gates the error:
    relative error in UNIT_NORM mode, absolute error in RAW mode.

    ``delta_pred_scale``, RAW mode only, replaces the fixed ``delta_pred``
    with an adaptive threshold ``delta_pred_scale * std(targets so far)``,
    which keeps the error gate meaningful for signals of unknown scale.
    """

    delta_dict: float
    delta_pred: float
    delta_pred_scale: float | None = None

    def validate_for(self, mode: DictionaryMode) -> None:
        if mode is DictionaryMode.UNIT_NORM:
            if not (0.0 <= self.delta_dict < 1.0):
                raise ConfigError(
                    f"delta_dict must be in [0, 1) for unit-norm mode, got {self.delta_dict}"
                )
            if self.delta_pred_scale is not None:
                raise ConfigError("delta_pred_scale applies to raw (Gaussian) mode only")
        else:
            if not self.delta_dict > 0:
                raise ConfigError(
                    f"delta_dict must be positive for raw mode, got {self.delta_dict}"
                )
            if self.delta_pred_scale is not None and not self.delta_pred_scale > 0:
                raise ConfigError(
                    f"delta_pred_scale must be positive, got {self.delta_pred_scale}"
                )
        if self.delta_pred < 0:
            raise ConfigError(f"delta_pred must be nonnegative, got {self.delta_pred}")


class Dictionary:
    """Ordered, append-only set of centres.

    Centres are never removed. An optional ``max_size`` acts as a safety
    cap: hitting it aborts the run with :class:`DictionaryCapExceeded`
    instead of silently evicting.
    """

    def __init__(self, mode: DictionaryMode, max_size: int | None = None):
        if max_size is not None and max_size < 1:
            raise ConfigError(f"max_size must be at least 1, got {max_size}")
        self.mode = mode
        self.max_size = max_size
        self._centres: list[Centre] = []
        self._seen: set[bytes] = set()
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._centres)

    @property
    def centres(self) -> tuple[Centre, ...]:
        return tuple(self._centres)

    def matrix(self) -> np.ndarray:
        """Centre vectors stacked as rows, (N, d). Cached between adds."""
        if self._matrix is None:
            self._matrix = np.vstack([c.vector.values for c in self._centres])
        return self._matrix

    def add_centre(
        self, vector: InputVector, added_at: int = 0, original_norm: float | None = None
    ) -> int | None:
        """Append a centre and return its index, or None for an exact duplicate.

        Duplicates are rejected because they add a redundant, rank-deficient
        Gram row. In UNIT_NORM mode the vector must already be normalised
        (zero-norm vectors are rejected upstream and are a caller bug here);
        RAW mode accepts any vector, including the zero vector.
        """
        if self.mode is DictionaryMode.UNIT_NORM and (
            vector.degenerate or abs(vector.norm - 1.0) > 1e-12
        ):
            raise ContractViolation(
                f"unit-norm dictionary requires normalised centres, got norm {vector.norm}"
            )
        key = vector.values.tobytes()
        if key in self._seen:
            return None
        if self.max_size is not None and len(self._centres) >= self.max_size:
            raise DictionaryCapExceeded(
                f"dictionary safety cap of {self.max_size} centres reached at sample {added_at}"
            )
        if original_norm is None:
            original_norm = vector.norm
        self._centres.append(Centre(vector, added_at, original_norm))
        self._seen.add(key)
        self._matrix = None
        return len(self._centres) - 1


def kernel_similarity_to_dictionary(
    x_hat: InputVector, dictionary: Dictionary, l: float
) -> float:
    """Largest Gaussian-kernel similarity between ``x_hat`` and the centres.

    Empty dictionaries score 0 (the vacuous max), which guarantees the
    first valid sample of a stream is treated as novel.
    """
    if dictionary.mode is not DictionaryMode.UNIT_NORM:
        raise ContractViolation("kernel similarity requires a unit-norm dictionary")
    if abs(x_hat.norm - 1.0) > 1e-12:
        raise ContractViolation(f"x_hat must be unit norm, got norm {x_hat.norm}")
    if len(dictionary) == 0:
        return 0.0
    return float(gaussian_row(dictionary.matrix(), x_hat.values, l).max())


def euclidean_distance_to_dictionary(x: InputVector, dictionary: Dictionary) -> float:
    """Distance from ``x`` to the nearest centre; +inf when empty."""
    if dictionary.mode is not DictionaryMode.RAW:
        raise ContractViolation("euclidean distance requires a raw-mode dictionary")
    if len(dictionary) == 0:
        return math.inf
    diff = dictionary.matrix() - x.values
    return float(np.sqrt((diff * diff).sum(axis=1).min()))


def novelty_decision(
    novelty_stat: float,
    error_stat: float,
    config: NoveltyConfig,
    mode: DictionaryMode,
) -> bool:
    """True when the sample should become a centre.

    In UNIT_NORM mode ``novelty_stat`` is a similarity (smaller = more
    novel); in RAW mode it is a distance (larger = more novel). The error
    condition must hold as well in both modes.
    """
    if mode is DictionaryMode.UNIT_NORM:
        return novelty_stat < config.delta_dict and error_stat > config.delta_pred
    return novelty_stat > config.delta_dict and error_stat > config.delta_pred
