"""Exception hierarchy shared across the library.

The CLI maps these onto distinct exit codes; see ``unklms.cli``.
"""


class KafError(Exception):
    """Base class for all library errors."""


class ConfigError(KafError):
    """A configuration value violates its documented bounds."""


class ContractViolation(KafError):
    """A caller broke an API precondition (e.g. dimension or mode mismatch)."""


class IngestionError(KafError):
    """Input data could not be parsed or prepared."""


class NumericFault(KafError):
    """A NaN/Inf appeared where the algorithm requires finite values."""


class UndefinedMetric(KafError):
    """A metric is mathematically undefined for the given inputs."""


class DictionaryCapExceeded(ConfigError):
    """The optional dictionary safety cap was hit; the run is aborted
    rather than silently evicting centres."""
