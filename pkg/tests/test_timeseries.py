import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from unklms import (
    ConfigError,
    ContractViolation,
    IngestionError,
    TimeSeries,
    embed,
    forward_fill,
    gen_linear_ramp,
    gen_sinewave,
    load_csv,
)

nan = math.nan


def test_forward_fill_basic():
    assert_allclose(forward_fill(np.array([1.0, nan, 3.0])), [1.0, 1.0, 3.0])
    assert_allclose(forward_fill(np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])
    assert_allclose(forward_fill(np.array([1.0, nan, nan, 4.0, nan])), [1, 1, 1, 4, 4])


def test_forward_fill_leading_gap_is_error():
    with pytest.raises(IngestionError, match="position 0"):
        forward_fill(np.array([nan, 2.0]))


def test_forward_fill_idempotent():
    rng = np.random.default_rng(59)
    vals = rng.normal(size=100)
    vals[rng.integers(1, 100, size=20)] = nan
    once = forward_fill(vals)
    assert_allclose(forward_fill(once), once)


def test_forward_fill_rejects_2d():
    with pytest.raises(ContractViolation):
        forward_fill(np.zeros((2, 2)))


def test_embed_shapes_and_targets():
    s = TimeSeries(np.array([1.0, 2.0, 3.0, 4.0]))
    samples = embed(s, 2)
    assert len(samples) == 2
    assert_allclose(samples[0].input.values, [1.0, 2.0])
    assert samples[0].target == 3.0
    assert samples[0].index == 2
    assert_allclose(samples[1].input.values, [2.0, 3.0])
    assert samples[1].target == 4.0


def test_embed_alignment_no_lookahead():
    rng = np.random.default_rng(61)
    vals = rng.normal(size=40)
    d = 5
    for s in embed(TimeSeries(vals), d):
        for k in range(d):
            assert s.input.values[k] == vals[s.index - d + k]
        assert s.target == vals[s.index]


def test_embed_too_short():
    with pytest.raises(IngestionError):
        embed(TimeSeries(np.array([1.0, 2.0])), 2)  # length == d
    with pytest.raises(IngestionError):
        embed(TimeSeries(np.array([5.0])), 1)
    with pytest.raises(ConfigError):
        embed(TimeSeries(np.array([1.0, 2.0])), 0)


def test_embed_rejects_unfilled_gaps():
    with pytest.raises(IngestionError):
        embed(TimeSeries(np.array([1.0, nan, 3.0])), 1)


def test_sinewave_quarter_period_values():
    s = gen_sinewave(5, amplitude=2.0, period=4.0)
    assert_allclose(s.values, [0.0, 2.0, 0.0, -2.0, 0.0], atol=1e-12)
    assert gen_sinewave(1, 1.0, 4.0).values[0] == 0.0
    assert_allclose(gen_sinewave(2, 1.0, 4.0).values, [0.0, 1.0], atol=1e-12)


def test_sinewave_validation():
    with pytest.raises(ConfigError):
        gen_sinewave(10, 1.0, 0.0)
    with pytest.raises(ConfigError):
        gen_sinewave(-1, 1.0, 4.0)


def test_ramp_values():
    assert_allclose(gen_linear_ramp(3, 1.0, 0.0).values, [0.0, 1.0, 2.0])
    assert_allclose(gen_linear_ramp(3, 0.0, 5.0).values, [5.0, 5.0, 5.0])
    assert_allclose(gen_linear_ramp(2, -2.0, 1.0).values, [1.0, -1.0])


def test_ramp_embed_roundtrip():
    s = gen_linear_ramp(30, slope=0.5, intercept=-3.0)
    samples = embed(s, 4)
    assert_allclose([smp.target for smp in samples], s.values[4:])


def test_load_csv_named_column(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("a,b\n1,10\n2,20\n")
    s = load_csv(str(p), "b")
    assert_allclose(s.values, [10.0, 20.0])
    assert s.name == "b"


def test_load_csv_blank_line_is_missing(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("v\n1\n\n3\n")
    assert_allclose(load_csv(str(p), "v").values, [1.0, 1.0, 3.0])


def test_load_csv_empty_cell_and_nan_token(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("d,v\nr1,1.5\nr2,\nr3,nan\nr4,NaN\nr5,4.5\n")
    assert_allclose(load_csv(str(p), "v").values, [1.5, 1.5, 1.5, 1.5, 4.5])


def test_load_csv_non_numeric_cell(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("v\nabc\n")
    with pytest.raises(IngestionError, match="abc"):
        load_csv(str(p), "v")


def test_load_csv_missing_column(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("a\n1\n")
    with pytest.raises(IngestionError, match="'b'"):
        load_csv(str(p), "b")


def test_load_csv_missing_file():
    with pytest.raises(IngestionError):
        load_csv("/nonexistent/nope.csv", "v")


def test_load_csv_integer_column(tmp_path):
    p = tmp_path / "headerless.csv"
    p.write_text("1,10\n2,20\n")
    assert_allclose(load_csv(str(p), 1).values, [10.0, 20.0])
    p2 = tmp_path / "headered.csv"
    p2.write_text("a,b\n1,10\n2,20\n")
    assert_allclose(load_csv(str(p2), 1).values, [10.0, 20.0])


def test_load_csv_empty_file(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("v\n")
    with pytest.raises(IngestionError):
        load_csv(str(p), "v")


def test_series_rejects_2d():
    with pytest.raises(ContractViolation):
        TimeSeries(np.zeros((3, 2)))
