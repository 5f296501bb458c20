"""Online kernel LMS with a unit-norm Gaussian kernel and novelty
sparsification, plus a small experiment harness."""

from .dictionary import (
    Centre,
    Dictionary,
    DictionaryMode,
    NoveltyConfig,
    euclidean_distance_to_dictionary,
    kernel_similarity_to_dictionary,
    novelty_decision,
)
from .errors import (
    ConfigError,
    ContractViolation,
    DictionaryCapExceeded,
    IngestionError,
    KafError,
    NumericFault,
    UndefinedMetric,
)
from .filters import FilterConfig, KlmsFilter, StepOutcome
from .harness import (
    ComparisonReport,
    ExperimentConfig,
    emit_plot_data,
    median_pairwise_distance,
    prepare_samples,
    resolve_filter_config,
    run_comparison,
    run_experiment,
    run_on_samples,
)
from .kernels import (
    InputVector,
    KernelKind,
    KernelSpec,
    gaussian_eval,
    gram_matrix,
    kernel_eval,
    lengthscale_from_dim,
    normalize,
    unit_norm_gaussian_eval,
)
from .metrics import RunReport, RunTrace, growth_curve, nmse, summarize
from .timeseries import (
    EmbeddedSample,
    TimeSeries,
    embed,
    forward_fill,
    gen_linear_ramp,
    gen_sinewave,
    load_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Centre",
    "ComparisonReport",
    "ConfigError",
    "ContractViolation",
    "Dictionary",
    "DictionaryCapExceeded",
    "DictionaryMode",
    "EmbeddedSample",
    "ExperimentConfig",
    "FilterConfig",
    "IngestionError",
    "InputVector",
    "KafError",
    "KernelKind",
    "KernelSpec",
    "KlmsFilter",
    "NoveltyConfig",
    "NumericFault",
    "RunReport",
    "RunTrace",
    "StepOutcome",
    "TimeSeries",
    "UndefinedMetric",
    "embed",
    "emit_plot_data",
    "euclidean_distance_to_dictionary",
    "forward_fill",
    "gaussian_eval",
    "gen_linear_ramp",
    "gen_sinewave",
    "gram_matrix",
    "growth_curve",
    "kernel_eval",
    "kernel_similarity_to_dictionary",
    "lengthscale_from_dim",
    "load_csv",
    "median_pairwise_distance",
    "nmse",
    "normalize",
    "novelty_decision",
    "prepare_samples",
    "resolve_filter_config",
    "run_comparison",
    "run_experiment",
    "run_on_samples",
    "summarize",
    "unit_norm_gaussian_eval",
]
