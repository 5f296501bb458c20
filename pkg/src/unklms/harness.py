"""Experiment runner: wires ingestion, filtering, and metrics, and writes
deterministic reports (JSON summary plus plot-ready CSVs)."""

from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .dictionary import DictionaryMode, NoveltyConfig
from .errors import ConfigError
from .filters import FilterConfig, KlmsFilter
from .kernels import KernelKind, KernelSpec
from .metrics import NMSE_VARIANTS, RunReport, RunTrace, summarize
from .timeseries import TimeSeries, gen_linear_ramp, gen_sinewave, load_csv, embed

# Data-driven defaults for the plain-Gaussian baseline; the unit-norm mode
# uses fixed thresholds on scale-free statistics so it needs no heuristics.
UG_L0_DEFAULT = 2.0
UG_DELTA_DICT_DEFAULT = 0.95
UG_DELTA_PRED_DEFAULT = 0.05
BASE_MEDIAN_WINDOW = 50
# 0.75 of the early-median pairwise distance: small enough that the ramp
# keeps escaping it forever, large enough that bounded series stop adding
# once the visited region is covered.
BASE_DELTA_DICT_SCALE = 0.75
BASE_DELTA_PRED_SCALE = 0.05

MODES = ("gaussian", "unitnorm")
SYNTHETIC_KINDS = ("sine", "ramp")


@dataclass
class ExperimentConfig:
    """Flat experiment description; mirrors the CLI flags one to one."""

    mode: str = "unitnorm"
    data: str | None = None
    column: str | None = None
    synthetic: str | None = None
    n: int = 500
    amplitude: float = 1.0
    period: float = 20.0
    phase: float = 0.0
    slope: float = 1.0
    intercept: float = 0.0
    order: int = 10
    mu: float = 0.5
    epsilon: float = 1e-4
    l0: float | None = None
    lengthscale: float | None = None
    delta_dict: float | None = None
    delta_pred: float | None = None
    plain_lms: bool = False
    truncate: int | None = None
    nmse_variant: str = "variance"
    seed: int = 0
    out_dir: str | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        has_file = self.data is not None
        has_synth = self.synthetic is not None
        if has_file == has_synth:
            raise ConfigError("exactly one data source required: --data or --synthetic")
        if has_file and not self.column:
            raise ConfigError("--column is required with --data")
        if has_synth and self.synthetic not in SYNTHETIC_KINDS:
            raise ConfigError(
                f"synthetic kind must be one of {SYNTHETIC_KINDS}, got {self.synthetic!r}"
            )
        if self.order < 1:
            raise ConfigError(f"order must be >= 1, got {self.order}")
        if self.truncate is not None and self.truncate < 1:
            raise ConfigError(f"truncate must be >= 1, got {self.truncate}")
        if self.nmse_variant not in NMSE_VARIANTS:
            raise ConfigError(
                f"nmse variant must be one of {NMSE_VARIANTS}, got {self.nmse_variant!r}"
            )
        if self.plain_lms and self.mode != "gaussian":
            raise ConfigError("--plain-lms applies to the gaussian baseline only")
        if self.lengthscale is not None and self.l0 is not None:
            raise ConfigError("give --l0 or --lengthscale, not both")


@dataclass(frozen=True)
class ComparisonReport:
    """Baseline vs. unit-norm on the identical embedded sample stream."""

    baseline: RunReport
    unitnorm: RunReport
    nmse_delta: float
    dict_size_ratio: float


def make_series(config: ExperimentConfig) -> TimeSeries:
    if config.synthetic == "sine":
        return gen_sinewave(config.n, config.amplitude, config.period, config.phase)
    if config.synthetic == "ramp":
        return gen_linear_ramp(config.n, config.slope, config.intercept)
    assert config.data is not None and config.column is not None
    return TimeSeries(
        load_csv(config.data, config.column).values,
        name=os.path.splitext(os.path.basename(config.data))[0],
    )


def prepare_samples(config: ExperimentConfig):
    """Load, truncate, and delay-embed the configured series."""
    config.validate()
    series = make_series(config)
    if config.truncate is not None:
        series = TimeSeries(series.values[: config.truncate], name=series.name)
    return series, embed(series, config.order)


def median_pairwise_distance(samples, window: int = BASE_MEDIAN_WINDOW) -> float:
    """Median Euclidean distance over all pairs of the first `window` inputs."""
    pts = np.stack([s.input.values for s in samples[:window]])
    if len(pts) < 2:
        raise ConfigError("need at least two embedded inputs for the distance heuristic")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    iu = np.triu_indices(len(pts), k=1)
    return float(np.median(dist[iu]))


def resolve_filter_config(config: ExperimentConfig, samples) -> tuple[FilterConfig, dict]:
    """Fill every defaulted hyperparameter and record where each came from."""
    d = config.order
    extras: dict = {}
    if config.mode == "unitnorm":
        if config.lengthscale is not None:
            kernel = KernelSpec.from_lengthscale(
                KernelKind.UNIT_NORM_GAUSSIAN, config.lengthscale, d
            )
            extras["lengthscale_source"] = "flag"
        else:
            l0 = UG_L0_DEFAULT if config.l0 is None else config.l0
            kernel = KernelSpec.from_per_coordinate(KernelKind.UNIT_NORM_GAUSSIAN, l0, d)
            extras["lengthscale_source"] = "default_l0" if config.l0 is None else "l0_flag"
        dd = UG_DELTA_DICT_DEFAULT if config.delta_dict is None else config.delta_dict
        dp = UG_DELTA_PRED_DEFAULT if config.delta_pred is None else config.delta_pred
        extras["delta_dict_source"] = "default" if config.delta_dict is None else "flag"
        extras["delta_pred_source"] = "default" if config.delta_pred is None else "flag"
        novelty = NoveltyConfig(delta_dict=dd, delta_pred=dp)
        fc = FilterConfig(
            kernel=kernel,
            novelty=novelty,
            mu=config.mu,
            epsilon=config.epsilon,
            normalized=True,
        )
    else:
        median = None
        if config.lengthscale is not None:
            l = config.lengthscale
            extras["lengthscale_source"] = "flag"
        elif config.l0 is not None:
            l = config.l0 * math.sqrt(d)
            extras["lengthscale_source"] = "l0_flag"
        else:
            median = median_pairwise_distance(samples)
            if median <= 0:
                raise ConfigError(
                    "median pairwise distance is zero; set --lengthscale explicitly"
                )
            l = median
            extras["lengthscale_source"] = "median_pairwise"
        if config.delta_dict is not None:
            dd = config.delta_dict
            extras["delta_dict_source"] = "flag"
        else:
            if median is None:
                median = median_pairwise_distance(samples)
                if median <= 0:
                    raise ConfigError(
                        "median pairwise distance is zero; set --delta-dict explicitly"
                    )
            dd = BASE_DELTA_DICT_SCALE * median
            extras["delta_dict_source"] = "median_scaled"
        extras["median_pairwise_distance"] = median
        extras["median_window"] = BASE_MEDIAN_WINDOW
        if config.delta_pred is not None:
            novelty = NoveltyConfig(delta_dict=dd, delta_pred=config.delta_pred)
            extras["delta_pred_source"] = "flag"
        else:
            novelty = NoveltyConfig(
                delta_dict=dd, delta_pred=0.0, delta_pred_scale=BASE_DELTA_PRED_SCALE
            )
            extras["delta_pred_source"] = "running_std_scaled"
        kernel = KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, l, d)
        fc = FilterConfig(
            kernel=kernel,
            novelty=novelty,
            mu=config.mu,
            epsilon=config.epsilon,
            normalized=not config.plain_lms,
        )
    fc.validate()
    return fc, extras


def run_on_samples(
    fc: FilterConfig, samples, series_name: str, variant: str = "variance"
) -> tuple[RunReport, KlmsFilter]:
    filt = KlmsFilter(fc)
    outcomes = filt.run(samples)
    trace = RunTrace(outcomes=tuple(outcomes), config_echo=fc, series_name=series_name)
    return summarize(trace, dictionary=filt.dictionary, variant=variant), filt


def _config_dict(fc: FilterConfig, cfg: ExperimentConfig, extras: dict) -> dict:
    return {
        "mode": "unitnorm" if fc.mode is DictionaryMode.UNIT_NORM else "gaussian",
        "order": fc.d,
        "mu": fc.mu,
        "epsilon": fc.epsilon,
        "normalized": fc.normalized,
        "kernel": {"kind": fc.kernel.kind.value, "l0": fc.kernel.l0, "lengthscale": fc.kernel.l},
        "novelty": {
            "delta_dict": fc.novelty.delta_dict,
            "delta_pred": fc.novelty.delta_pred,
            "delta_pred_scale": fc.novelty.delta_pred_scale,
        },
        "nmse_variant": cfg.nmse_variant,
        "truncate": cfg.truncate,
        "seed": cfg.seed,
        "heuristics": extras,
    }


def _results_dict(report: RunReport, filt: KlmsFilter) -> dict:
    return {
        "n_steps": len(report.trace),
        "nmse": report.nmse,
        "nmse_first_quarter": report.nmse_first_quarter,
        "nmse_last_quarter": report.nmse_last_quarter,
        "final_dict_size": report.final_dict_size,
        "centre_added_steps": [step for step, _ in report.centre_log],
        "final_weights": [float(w) for w in filt.weights],
    }


def _atomic_write_text(path: str, text: str) -> None:
    out_dir = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_plot_data(report: RunReport, out_dir: str, prefix: str = "") -> list[str]:
    """Write per-step and centre-log CSVs; byte-identical across reruns."""
    os.makedirs(out_dir, exist_ok=True)
    steps_path = os.path.join(out_dir, f"{prefix}steps.csv")
    lines = ["index,target,prediction,error,centre_added,dict_size"]
    for i, o in enumerate(report.trace.outcomes):
        target = o.prediction + o.error
        lines.append(
            f"{i},{target!r},{o.prediction!r},{o.error!r},{int(o.centre_added)},{o.dict_size}"
        )
    _atomic_write_text(steps_path, "\n".join(lines) + "\n")

    centres_path = os.path.join(out_dir, f"{prefix}centres.csv")
    d = report.trace.config_echo.d
    lines = ["step," + ",".join(f"c{k}" for k in range(d))]
    for step, vec in report.centre_log:
        lines.append(f"{step}," + ",".join(repr(float(v)) for v in vec))
    _atomic_write_text(centres_path, "\n".join(lines) + "\n")
    return [steps_path, centres_path]


def _write_json(path: str, obj: dict) -> None:
    _atomic_write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Run one experiment; write report.json, steps.csv, centres.csv when an
    output directory is configured."""
    series, samples = prepare_samples(config)
    fc, extras = resolve_filter_config(config, samples)
    report, filt = run_on_samples(fc, samples, series.name, config.nmse_variant)
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        doc = {
            "series": series.name,
            "config": _config_dict(fc, config, extras),
            "results": _results_dict(report, filt),
        }
        _write_json(os.path.join(config.out_dir, "report.json"), doc)
        emit_plot_data(report, config.out_dir)
    return report


def run_comparison(config: ExperimentConfig) -> ComparisonReport:
    """Run the gaussian baseline and the unit-norm filter on the identical
    embedded sample stream and report side-by-side results."""
    # Flag scoping for compare: --l0/--delta-dict/--delta-pred configure the
    # unit-norm side, --lengthscale/--plain-lms the baseline.
    base_cfg = dataclasses.replace(
        config, mode="gaussian", l0=None, delta_dict=None, delta_pred=None
    )
    ug_cfg = dataclasses.replace(
        config, mode="unitnorm", lengthscale=None, plain_lms=False
    )
    ug_cfg.validate()
    series, samples = prepare_samples(base_cfg)
    base_fc, base_extras = resolve_filter_config(base_cfg, samples)
    ug_fc, ug_extras = resolve_filter_config(ug_cfg, samples)
    base_report, base_filt = run_on_samples(base_fc, samples, series.name, config.nmse_variant)
    ug_report, ug_filt = run_on_samples(ug_fc, samples, series.name, config.nmse_variant)
    comparison = ComparisonReport(
        baseline=base_report,
        unitnorm=ug_report,
        nmse_delta=ug_report.nmse - base_report.nmse,
        dict_size_ratio=ug_report.final_dict_size / base_report.final_dict_size,
    )
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        doc = {
            "series": series.name,
            "baseline": {
                "config": _config_dict(base_fc, base_cfg, base_extras),
                "results": _results_dict(base_report, base_filt),
            },
            "unitnorm": {
                "config": _config_dict(ug_fc, ug_cfg, ug_extras),
                "results": _results_dict(ug_report, ug_filt),
            },
            "deltas": {
                "nmse_delta": comparison.nmse_delta,
                "dict_size_ratio": comparison.dict_size_ratio,
            },
        }
        _write_json(os.path.join(config.out_dir, "comparison.json"), doc)
        emit_plot_data(base_report, config.out_dir, prefix="baseline_")
        emit_plot_data(ug_report, config.out_dir, prefix="unitnorm_")
    return comparison


def write_series_csv(series: TimeSeries, path: str) -> None:
    """Write a one-column CSV (header `value`) for `gen`."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    lines = ["value"] + [repr(float(v)) for v in series.values]
    _atomic_write_text(path, "\n".join(lines) + "\n")
