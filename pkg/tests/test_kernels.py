import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from unklms import (
    ConfigError,
    ContractViolation,
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


def test_input_vector_norm_cached_and_immutable():
    v = InputVector([3.0, 4.0])
    assert v.norm == 5.0
    assert v.dim == 2
    assert len(v) == 2
    with pytest.raises(AttributeError):
        v.norm = 1.0
    with pytest.raises(ValueError):
        v.values[0] = 9.0  # backing array is read-only


def test_input_vector_rejects_matrix():
    with pytest.raises(ContractViolation):
        InputVector([[1.0, 2.0], [3.0, 4.0]])


def test_degenerate_flag():
    assert InputVector([0.0, 0.0]).degenerate
    assert InputVector([1e-13, 0.0]).degenerate
    assert not InputVector([1e-6, 0.0]).degenerate


def test_normalize_unit_result():
    rng = np.random.default_rng(7)
    for _ in range(50):
        v = InputVector(rng.normal(size=rng.integers(1, 8)) * 10.0 ** rng.integers(-3, 4))
        if v.degenerate:
            continue
        assert_allclose(normalize(v).norm, 1.0, rtol=1e-12)


def test_normalize_degenerate_gives_zero_vector():
    z = normalize(InputVector([0.0, 0.0, 0.0]))
    assert z.degenerate
    assert_allclose(z.values, 0.0)


def test_gaussian_identical_inputs():
    x = InputVector([1.5, -2.0])
    assert gaussian_eval(x, x, 3.0) == 1.0


def test_gaussian_known_value():
    # ||diff||^2 = 2, l = 1 -> exp(-1)
    x1 = InputVector([0.0, 0.0])
    x2 = InputVector([1.0, 1.0])
    assert_allclose(gaussian_eval(x1, x2, 1.0), 0.36787944117144233, rtol=1e-15)


def test_gaussian_far_apart_underflows_gracefully():
    # ||diff||^2 = 100, l = 1 -> exp(-50), tiny but positive
    v = gaussian_eval(InputVector([0.0]), InputVector([10.0]), 1.0)
    assert_allclose(v, 1.9287498479639178e-22, rtol=1e-15)
    assert v > 0.0


def test_gaussian_range():
    rng = np.random.default_rng(11)
    for _ in range(200):
        d = rng.integers(1, 10)
        x1 = InputVector(rng.normal(size=d) * 100)
        x2 = InputVector(rng.normal(size=d) * 100)
        v = gaussian_eval(x1, x2, float(rng.uniform(0.1, 10)))
        # exact zero is reachable: exp underflows for very distant points
        assert 0.0 <= v <= 1.0


def test_gaussian_bad_args():
    with pytest.raises(ContractViolation):
        gaussian_eval(InputVector([1.0]), InputVector([1.0, 2.0]), 1.0)
    with pytest.raises(ConfigError):
        gaussian_eval(InputVector([1.0]), InputVector([2.0]), 0.0)
    with pytest.raises(ConfigError):
        gaussian_eval(InputVector([1.0]), InputVector([2.0]), -1.0)


def test_unit_norm_same_direction_gives_norm_product():
    # x-hats coincide, so the kernel term is 1 and only magnitudes remain
    x = InputVector([3.0, 4.0])
    assert unit_norm_gaussian_eval(x, x, 2.0) == 25.0
    y = InputVector([6.0, 8.0])
    assert_allclose(unit_norm_gaussian_eval(x, y, 2.0), 50.0, rtol=1e-12)


def test_unit_norm_known_value():
    # orthogonal directions: ||x1_hat - x2_hat||^2 = 2, prefactor 3*4
    v = unit_norm_gaussian_eval(InputVector([3.0, 0.0]), InputVector([0.0, 4.0]), 1.0)
    assert_allclose(v, 12.0 * math.exp(-1.0), rtol=1e-15)
    assert_allclose(v, 4.414553294057308, rtol=1e-15)


def test_unit_norm_zero_input_is_zero():
    z = InputVector([0.0, 0.0])
    y = InputVector([1.0, 2.0])
    assert unit_norm_gaussian_eval(z, y, 1.0) == 0.0
    assert unit_norm_gaussian_eval(y, z, 1.0) == 0.0


def test_unit_norm_range():
    rng = np.random.default_rng(13)
    for _ in range(200):
        d = rng.integers(1, 10)
        x1 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-3, 4))
        x2 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-3, 4))
        v = unit_norm_gaussian_eval(x1, x2, float(rng.uniform(0.5, 5)))
        assert 0.0 <= v <= x1.norm * x2.norm * (1 + 1e-12)


def test_symmetry_bit_exact():
    rng = np.random.default_rng(17)
    for _ in range(300):
        d = rng.integers(1, 8)
        x1 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-2, 3))
        x2 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-2, 3))
        l = float(rng.uniform(0.5, 4))
        assert gaussian_eval(x1, x2, l) == gaussian_eval(x2, x1, l)
        assert unit_norm_gaussian_eval(x1, x2, l) == unit_norm_gaussian_eval(x2, x1, l)


def test_factorization_identity():
    rng = np.random.default_rng(19)
    for _ in range(500):
        d = rng.integers(1, 10)
        x1 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-3, 4))
        x2 = InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-3, 4))
        if x1.degenerate or x2.degenerate:
            continue
        l = float(rng.uniform(0.5, 4))
        lhs = unit_norm_gaussian_eval(x1, x2, l)
        rhs = x1.norm * gaussian_eval(normalize(x1), normalize(x2), l) * x2.norm
        assert_allclose(lhs, rhs, rtol=1e-12)


def test_scale_covariance():
    rng = np.random.default_rng(23)
    for _ in range(500):
        d = rng.integers(1, 10)
        x1 = InputVector(rng.normal(size=d))
        x2 = InputVector(rng.normal(size=d))
        if x1.degenerate or x2.degenerate:
            continue
        a, b = rng.uniform(1e-3, 1e3, size=2)
        l = float(rng.uniform(0.5, 4))
        lhs = unit_norm_gaussian_eval(
            InputVector(a * x1.values), InputVector(b * x2.values), l
        )
        assert_allclose(lhs, a * b * unit_norm_gaussian_eval(x1, x2, l), rtol=1e-12)


def test_lengthscale_from_dim():
    assert lengthscale_from_dim(2.0, 4) == 4.0
    assert lengthscale_from_dim(1.0, 1) == 1.0
    assert lengthscale_from_dim(3.0, 9) == 9.0
    assert_allclose(lengthscale_from_dim(2.0, 10), 2.0 * math.sqrt(10.0), rtol=1e-15)
    with pytest.raises(ConfigError):
        lengthscale_from_dim(0.0, 4)
    with pytest.raises(ConfigError):
        lengthscale_from_dim(1.0, 0)


def test_kernel_spec_consistency():
    spec = KernelSpec.from_per_coordinate(KernelKind.UNIT_NORM_GAUSSIAN, 2.0, 10)
    assert_allclose(spec.l, 2.0 * math.sqrt(10.0), rtol=1e-15)
    spec2 = KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, 5.0, 4)
    assert_allclose(spec2.l0, 2.5, rtol=1e-15)
    with pytest.raises(ConfigError):
        KernelSpec(kind=KernelKind.GAUSSIAN, l0=1.0, d=4, l=3.0)  # l != l0*sqrt(d)
    with pytest.raises(ConfigError):
        KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, -1.0, 4)


def test_kernel_eval_dispatch():
    x1 = InputVector([3.0, 0.0])
    x2 = InputVector([0.0, 4.0])
    g = KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, 1.0, 2)
    u = KernelSpec.from_lengthscale(KernelKind.UNIT_NORM_GAUSSIAN, 1.0, 2)
    assert kernel_eval(x1, x2, g) == gaussian_eval(x1, x2, 1.0)
    assert kernel_eval(x1, x2, u) == unit_norm_gaussian_eval(x1, x2, 1.0)


def test_gram_single_point():
    g = gram_matrix([InputVector([1.0, 2.0])], KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, 1.0, 2))
    assert_allclose(g, [[1.0]])
    u = gram_matrix(
        [InputVector([3.0, 4.0])],
        KernelSpec.from_lengthscale(KernelKind.UNIT_NORM_GAUSSIAN, 1.0, 2),
    )
    assert_allclose(u, [[25.0]])


def test_gram_empty_rejected():
    with pytest.raises(ContractViolation):
        gram_matrix([], KernelSpec.from_lengthscale(KernelKind.GAUSSIAN, 1.0, 2))


def test_gram_psd_both_kernels():
    rng = np.random.default_rng(29)
    for kind in (KernelKind.GAUSSIAN, KernelKind.UNIT_NORM_GAUSSIAN):
        for _ in range(30):
            d = int(rng.integers(1, 4))
            pts = [InputVector(rng.normal(size=d) * 10.0 ** rng.integers(-2, 3)) for _ in range(5)]
            spec = KernelSpec.from_per_coordinate(kind, float(rng.uniform(0.5, 3)), d)
            g = gram_matrix(pts, spec)
            assert_allclose(g, g.T)
            ev = np.linalg.eigvalsh(g)
            assert ev.min() >= -1e-9 * max(ev.max(), 1.0)
