"""Kernel functions for kernel adaptive filtering.

Two kernels are provided: the standard Gaussian (squared-exponential)
kernel and the unit-norm Gaussian kernel, which compares inputs through
their normalised directions and rescales by both input magnitudes:

    K_G(x1, x2)  = exp(-||x1 - x2||^2 / (2 l^2))
    K_UG(x1, x2) = ||x1|| * K_G(x1/||x1||, x2/||x2||) * ||x2||

Because unit vectors live on the sphere, the unit-norm kernel admits a
dimension-only lengthscale rule ``l = l0 * sqrt(d)`` with a per-coordinate
lengthscale ``l0`` that transfers across datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, ContractViolation

# Norms below this are treated as degenerate (zero direction).
EPS_NORM = 1e-12


class KernelKind(Enum):
    GAUSSIAN = "gaussian"
    UNIT_NORM_GAUSSIAN = "unitnorm"


class InputVector:
    """Immutable regressor vector with its Euclidean norm cached.

    The norm is computed once at construction because it feeds the kernel,
    the predictor and the normalised step size; recomputing it in each
    place would be wasteful and risks inconsistency.
    """

    __slots__ = ("values", "norm")

    def __init__(self, values: Iterable[float] | np.ndarray):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ContractViolation(f"input vector must be 1-D, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "norm", float(np.linalg.norm(arr)))

    def __setattr__(self, name, value):
        raise AttributeError("InputVector is immutable")

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def degenerate(self) -> bool:
        """True when the norm is below ``EPS_NORM`` (no usable direction)."""
        return self.norm < EPS_NORM

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"InputVector({self.values.tolist()!r})"


def normalize(x: InputVector) -> InputVector:
    """Return the unit-norm version of ``x``.

    A degenerate input (norm < EPS_NORM) maps to the zero vector; callers
    detect that case through the ``degenerate`` flag of the result rather
    than an exception.
    """
    if x.degenerate:
        return InputVector(np.zeros(x.dim))
    return InputVector(x.values / x.norm)


def _check_pair(x1: InputVector, x2: InputVector, l: float) -> None:
    if x1.dim != x2.dim:
        raise ContractViolation(f"dimension mismatch: {x1.dim} vs {x2.dim}")
    if not l > 0:
        raise ConfigError(f"kernel lengthscale must be positive, got {l}")


def gaussian_eval(x1: InputVector, x2: InputVector, l: float) -> float:
    """Gaussian kernel exp(-||x1 - x2||^2 / (2 l^2)); in (0, 1]."""
    _check_pair(x1, x2, l)
    diff = x1.values - x2.values
    return math.exp(-float(np.dot(diff, diff)) / (2.0 * l * l))


def unit_norm_gaussian_eval(x1: InputVector, x2: InputVector, l: float) -> float:
    """Unit-norm Gaussian kernel ||x1|| K_G(x1_hat, x2_hat) ||x2||.

    Returns 0 when either argument is (numerically) the zero vector: the
    magnitude prefactor vanishes and the direction is undefined anyway.
    """
    _check_pair(x1, x2, l)
    if x1.degenerate or x2.degenerate:
        return 0.0
    # Prefactor multiplied first so swapping arguments is bit-exact.
    return (x1.norm * x2.norm) * gaussian_eval(normalize(x1), normalize(x2), l)


def lengthscale_from_dim(l0: float, d: int) -> float:
    """Dimension-only lengthscale rule l = l0 * sqrt(d)."""
    if not l0 > 0:
        raise ConfigError(f"per-coordinate lengthscale l0 must be positive, got {l0}")
    if int(d) != d or d < 1:
        raise ConfigError(f"input dimension d must be a positive integer, got {d}")
    return l0 * math.sqrt(d)


def gaussian_row(matrix: np.ndarray, v: np.ndarray, l: float) -> np.ndarray:
    """Vectorised Gaussian kernel of one vector against each matrix row."""
    diff = matrix - v
    return np.exp((diff * diff).sum(axis=1) / (-2.0 * l * l))


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to use and its lengthscale parameters.

    ``l`` is the effective lengthscale and always equals ``l0 * sqrt(d)``
    up to rounding; build instances through :meth:`from_per_coordinate`
    (given ``l0``) or :meth:`from_lengthscale` (given raw ``l``).
    """

    kind: KernelKind
    l0: float
    d: int
    l: float

    def __post_init__(self):
        if not isinstance(self.kind, KernelKind):
            raise ConfigError(f"unknown kernel kind: {self.kind!r}")
        if not self.l0 > 0:
            raise ConfigError(f"l0 must be positive, got {self.l0}")
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError(f"d must be a positive integer, got {self.d}")
        if not self.l > 0:
            raise ConfigError(f"l must be positive, got {self.l}")
        if not math.isclose(self.l, self.l0 * math.sqrt(self.d), rel_tol=1e-12):
            raise ConfigError(
                f"inconsistent lengthscales: l={self.l} but l0*sqrt(d)="
                f"{self.l0 * math.sqrt(self.d)}"
            )

    @classmethod
    def from_per_coordinate(cls, kind: KernelKind, l0: float, d: int) -> "KernelSpec":
        return cls(kind=kind, l0=l0, d=d, l=lengthscale_from_dim(l0, d))

    @classmethod
    def from_lengthscale(cls, kind: KernelKind, l: float, d: int) -> "KernelSpec":
        if not l > 0:
            raise ConfigError(f"l must be positive, got {l}")
        if int(d) != d or d < 1:
            raise ConfigError(f"d must be a positive integer, got {d}")
        return cls(kind=kind, l0=l / math.sqrt(d), d=d, l=l)


def kernel_eval(x1: InputVector, x2: InputVector, spec: KernelSpec) -> float:
    """Evaluate the kernel selected by ``spec``."""
    if spec.kind is KernelKind.GAUSSIAN:
        return gaussian_eval(x1, x2, spec.l)
    return unit_norm_gaussian_eval(x1, x2, spec.l)


def gram_matrix(points: Sequence[InputVector], spec: KernelSpec) -> np.ndarray:
    """Symmetric Gram matrix G[i][j] = K(points[i], points[j])."""
    if len(points) == 0:
        raise ContractViolation("gram_matrix requires a nonempty point list")
    n = len(points)
    g = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            v = kernel_eval(points[i], points[j], spec)
            g[i, j] = v
            g[j, i] = v
    return g
