"""Run summaries: NMSE and dictionary growth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionary import Dictionary
from .errors import ContractViolation, UndefinedMetric
from .filters import FilterConfig, StepOutcome

NMSE_VARIANTS = ("variance", "power")


def nmse(targets, predictions, variant: str = "variance") -> float:
    """Sum of squared errors over a normaliser.

    variant="variance" divides by sum((y - mean(y))^2): predicting the mean
    scores exactly 1. variant="power" divides by sum(y^2).
    """
    y = np.asarray(targets, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if y.shape != p.shape or y.ndim != 1 or len(y) == 0:
        raise ContractViolation(
            f"need equal-length nonempty 1-D targets and predictions, got {y.shape} vs {p.shape}"
        )
    if variant not in NMSE_VARIANTS:
        raise ContractViolation(f"unknown nmse variant {variant!r}")
    num = float(((y - p) ** 2).sum())
    if variant == "variance":
        den = float(((y - y.mean()) ** 2).sum())
        if den == 0.0:
            raise UndefinedMetric("nmse undefined: targets have zero variance")
    else:
        den = float((y**2).sum())
        if den == 0.0:
            raise UndefinedMetric("nmse undefined: targets have zero power")
    return num / den


@dataclass(frozen=True)
class RunTrace:
    """Ordered per-step outcomes of one filter run plus the config that
    produced them."""

    outcomes: tuple[StepOutcome, ...]
    config_echo: FilterConfig
    series_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        sizes = [o.dict_size for o in self.outcomes]
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise ContractViolation("dict_size must be nondecreasing across outcomes")

    def __len__(self) -> int:
        return len(self.outcomes)


@dataclass(frozen=True)
class RunReport:
    """Summary of one run. centre_log pairs each centre's add step with its
    stored vector; windowed NMSEs are None when the window is degenerate."""

    nmse: float
    final_dict_size: int
    growth_curve: list[tuple[int, int]]
    centre_log: list[tuple[int, np.ndarray]]
    trace: RunTrace
    nmse_variant: str = "variance"
    nmse_first_quarter: float | None = None
    nmse_last_quarter: float | None = None


def growth_curve(trace: RunTrace) -> list[tuple[int, int]]:
    """(step index, dictionary size after that step) for every step."""
    if len(trace) == 0:
        raise ContractViolation("growth_curve needs a nonempty trace")
    return [(i, o.dict_size) for i, o in enumerate(trace.outcomes)]


def _targets_predictions(trace: RunTrace) -> tuple[np.ndarray, np.ndarray]:
    """Recover (target, prediction) pairs, skipping degenerate-input steps.

    The target is reconstructed as prediction + error; for degenerate steps
    the pair is not meaningful (no kernel evaluation happened).
    """
    pairs = [
        (o.prediction + o.error, o.prediction)
        for o in trace.outcomes
        if not o.degenerate_input
    ]
    if not pairs:
        raise UndefinedMetric("no non-degenerate steps to score")
    arr = np.array(pairs, dtype=np.float64)
    return arr[:, 0], arr[:, 1]


def _window_nmse(y: np.ndarray, p: np.ndarray, variant: str) -> float | None:
    try:
        return nmse(y, p, variant)
    except UndefinedMetric:
        return None


def summarize(
    trace: RunTrace,
    dictionary: Dictionary | None = None,
    variant: str = "variance",
) -> RunReport:
    """Assemble the run report: overall and first/last-quarter NMSE, growth
    curve, and the centre log (empty when no dictionary is supplied)."""
    if len(trace) == 0:
        raise ContractViolation("summarize needs a nonempty trace")
    y, p = _targets_predictions(trace)
    overall = nmse(y, p, variant)
    q = len(y) // 4
    first_q = _window_nmse(y[:q], p[:q], variant) if q else None
    last_q = _window_nmse(y[-q:], p[-q:], variant) if q else None
    curve = growth_curve(trace)
    log = (
        [(c.added_at, c.vector.values) for c in dictionary.centres]
        if dictionary is not None
        else []
    )
    report = RunReport(
        nmse=overall,
        final_dict_size=curve[-1][1],
        growth_curve=curve,
        centre_log=log,
        trace=trace,
        nmse_variant=variant,
        nmse_first_quarter=first_q,
        nmse_last_quarter=last_q,
    )
    assert report.final_dict_size == report.growth_curve[-1][1]
    return report
