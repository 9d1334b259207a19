"""Brier, ECE, Pearson, reliability bins, and the temperature grid search."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capcal.calibration import (
    BinTable,
    TemperatureGrid,
    brier,
    calibrate_eval,
    correlation_matrix,
    ece,
    pearson,
    reliability_bins,
    select_optimal,
    sweep_temperature,
)
from capcal.confidence import PooledBatch
from capcal.synthgen import SynthConfig, generate_dataset

from test_confidence import random_records


# ------------------------------------------------------------------- brier

def test_brier_perfect_calibration():
    assert brier([0.2, 0.9, 0.5], [0.2, 0.9, 0.5]) == 0.0


def test_brier_maximal_error():
    assert brier([1.0, 0.0], [0.0, 1.0]) == 1.0


def test_brier_hand_example():
    assert brier([0.8, 0.6], [0.5, 0.5]) == pytest.approx(0.05, abs=1e-12)


def test_brier_is_symmetric():
    rng = np.random.default_rng(1)
    for _ in range(20):
        c = rng.uniform(size=10)
        k = rng.uniform(size=10)
        assert brier(c, k) == brier(k, c)


def test_brier_input_validation():
    with pytest.raises(ValueError, match="length mismatch"):
        brier([0.1], [0.1, 0.2])
    with pytest.raises(ValueError, match="empty"):
        brier([], [])


# --------------------------------------------------------------------- ece

def test_ece_perfect_calibration_any_bins():
    conf = [0.05, 0.15, 0.5, 0.95]
    for n_bins in (1, 2, 5, 10, 50):
        assert ece(conf, conf, n_bins) == pytest.approx(0.0, abs=1e-15)


def test_ece_two_bin_hand_example():
    conf = [0.95, 0.9, 0.2, 0.1]
    corr = [1.0, 0.8, 0.3, 0.1]
    got = ece(conf, corr, 2)
    assert got == pytest.approx(0.0375, abs=1e-12)


def test_ece_single_sample():
    assert ece([0.7], [0.2], 10) == pytest.approx(0.5, abs=1e-12)


@given(st.integers(1, 20),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)),
                min_size=1, max_size=40))
@settings(max_examples=100, deadline=None)
def test_ece_bounded_by_max_gap(n_bins, pairs):
    conf = [c for c, _ in pairs]
    corr = [k for _, k in pairs]
    value = ece(conf, corr, n_bins)
    assert -1e-12 <= value <= max(abs(c - k) for c, k in pairs) + 1e-12


# --------------------------------------------------------- reliability bins

def test_bins_partition_unit_interval():
    table = reliability_bins([0.05, 0.5, 0.99], [0.1, 0.4, 1.0], 4)
    assert table.n_bins == 4
    assert [b.lo for b in table.bins] == [0.0, 0.25, 0.5, 0.75]
    assert [b.hi for b in table.bins] == [0.25, 0.5, 0.75, 1.0]
    assert sum(b.count for b in table.bins) == 3


def test_last_bin_is_closed():
    table = reliability_bins([1.0], [1.0], 10)
    assert table.bins[-1].count == 1


def test_single_bin_holds_everything():
    table = reliability_bins([0.31, 0.33, 0.35], [0.2, 0.4, 0.3], 10)
    occupied = [b for b in table.bins if b.count]
    assert len(occupied) == 1
    assert occupied[0].count == 3
    assert occupied[0].mean_confidence == pytest.approx(0.33, abs=1e-12)
    assert occupied[0].mean_correctness == pytest.approx(0.3, abs=1e-12)


def test_empty_bins_have_undefined_means():
    table = reliability_bins([0.05], [0.0], 10)
    for b in table.bins[1:]:
        assert b.count == 0
        assert b.mean_confidence is None
        assert b.mean_correctness is None


def test_ece_recomputable_from_bins():
    rng = np.random.default_rng(3)
    conf = rng.uniform(size=100)
    corr = rng.uniform(size=100)
    table = reliability_bins(conf, corr, 10)
    manual = sum((b.count / table.n_samples)
                 * abs(b.mean_confidence - b.mean_correctness)
                 for b in table.bins if b.count)
    assert ece(conf, corr, 10) == manual
    assert table.ece() == manual


def test_bins_validation():
    with pytest.raises(ValueError, match="n_bins"):
        reliability_bins([0.5], [0.5], 0)


# ----------------------------------------------------------------- pearson

def test_pearson_exact_linear():
    assert pearson([1, 2, 3], [2, 4, 6]) == 1.0
    assert pearson([1, 2, 3], [-1, -2, -3]) == -1.0


def test_pearson_hand_example():
    assert pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5, abs=1e-15)


def test_pearson_zero_variance_is_an_error():
    with pytest.raises(ValueError, match="zero variance"):
        pearson([1.0, 1.0, 1.0], [1, 2, 3])
    with pytest.raises(ValueError, match="zero variance"):
        pearson([1, 2, 3], [5.0, 5.0, 5.0])


def test_pearson_needs_two_samples():
    with pytest.raises(ValueError, match="at least 2"):
        pearson([1.0], [2.0])


def test_pearson_affine_invariance():
    rng = np.random.default_rng(7)
    x = rng.uniform(size=30)
    y = rng.uniform(size=30)
    base = pearson(x, y)
    assert pearson(3.0 * x + 1.0, y) == pytest.approx(base, abs=1e-9)
    assert pearson(x, 0.2 * y - 5.0) == pytest.approx(base, abs=1e-9)
    assert pearson(-2.0 * x, y) == pytest.approx(-base, abs=1e-9)


def test_correlation_matrix_shape_and_symmetry():
    rng = np.random.default_rng(11)
    cols = {"a": rng.uniform(size=50), "b": rng.uniform(size=50),
            "c": rng.uniform(size=50)}
    cols["d"] = 2.0 * cols["a"] + 1.0
    names, mat = correlation_matrix(cols)
    assert names == ["a", "b", "c", "d"]
    for i in range(4):
        assert mat[i, i] == 1.0
        for j in range(4):
            assert mat[i, j] == mat[j, i]
    assert mat[0, 3] == pytest.approx(1.0, abs=1e-12)


def test_correlation_matrix_nan_for_constant_column():
    cols = {"a": np.array([1.0, 2.0, 3.0]), "b": np.array([5.0, 5.0, 5.0])}
    names, mat = correlation_matrix(cols)
    assert math.isnan(mat[0, 1])
    assert math.isnan(mat[1, 0])
    assert mat[1, 1] == 1.0


# -------------------------------------------------------------------- grid

def test_default_grid_is_twenty_points():
    grid = TemperatureGrid()
    temps = grid.temperatures()
    assert len(temps) == 20
    assert temps[0] == 0.1
    assert temps[-1] == 2.0
    assert temps == [round(0.1 * i, 10) for i in range(1, 21)]
    assert 0.3 in temps and 0.7 in temps  # no float drift in the grid


def test_single_point_grid():
    grid = TemperatureGrid(start=1.0, stop=1.0, step=0.1)
    assert grid.temperatures() == [1.0]


def test_grid_validation():
    with pytest.raises(ValueError, match="bad grid"):
        TemperatureGrid(start=0.0)
    with pytest.raises(ValueError, match="bad grid"):
        TemperatureGrid(step=-0.1)
    with pytest.raises(ValueError, match="bad grid"):
        TemperatureGrid(start=2.0, stop=1.0)


def test_select_optimal_plain_argmin():
    t, b = select_optimal([0.5, 1.0, 1.5], [0.3, 0.2, 0.4])
    assert (t, b) == (1.0, 0.2)


def test_select_optimal_prefers_temperature_near_one():
    t, _ = select_optimal([0.2, 1.2], [0.25, 0.25])
    assert t == 1.2


def test_select_optimal_breaks_remaining_tie_toward_smaller():
    t, _ = select_optimal([0.5, 1.5], [0.25, 0.25])
    assert t == 0.5


# ------------------------------------------------------------------- sweep

def test_sweep_curve_matches_recomputation():
    records = random_records(25, seed=21)
    batch = PooledBatch.from_records(records)
    rng = np.random.default_rng(22)
    corr = rng.uniform(size=25)
    result = sweep_temperature(batch, corr, "am", kind="fense")
    assert result.metric == "am"
    assert result.kind == "fense"
    assert result.temperatures == TemperatureGrid().temperatures()
    for t, b in zip(result.temperatures, result.briers):
        assert b == brier(batch.pooled(t, "am"), corr)
    t_star, b_star = select_optimal(result.temperatures, result.briers)
    assert result.optimal_temperature == t_star
    assert result.optimal_brier == b_star


def test_sweep_recovers_exact_minimum_on_oracle():
    # stored logprobs are sharpened by s, so rescaling at T = s recovers
    # the true distribution; with correctness = the true arithmetic mean,
    # the Brier curve is exactly zero at T = s and positive elsewhere
    for sharpening in (0.5, 1.0, 2.0):
        data = generate_dataset(SynthConfig(n_records=40, seed=31,
                                            sharpening=sharpening))
        batch = PooledBatch.from_records(data.records)
        corr = [data.latent[r.id] for r in data.records]
        result = sweep_temperature(batch, corr, "am")
        assert result.optimal_temperature == sharpening
        assert result.optimal_brier == pytest.approx(0.0, abs=1e-24)


def test_sweep_length_mismatch():
    records = random_records(5, seed=23)
    batch = PooledBatch.from_records(records)
    with pytest.raises(ValueError, match="correctness values"):
        sweep_temperature(batch, [0.5] * 4, "am")


def test_sweep_custom_grid():
    records = random_records(8, seed=25)
    batch = PooledBatch.from_records(records)
    grid = TemperatureGrid(start=1.0, stop=1.0, step=0.5)
    result = sweep_temperature(batch, [0.5] * 8, "am", grid=grid)
    assert result.temperatures == [1.0]
    assert result.optimal_temperature == 1.0


# ---------------------------------------------------------- calibrate_eval

def test_calibrate_eval_perfect_case():
    col = np.array([0.1, 0.5, 0.9, 0.3])
    report = calibrate_eval(
        conf_at_t1={"am": col},
        conf_at_ts={},
        corr_columns={"cider": col.copy()},
        chosen_temperatures={},
        dataset="demo", split="evaluation")
    pair = report.pair("am", "cider")
    assert pair.brier == 0.0
    assert pair.ece == 0.0
    assert pair.brier_ts == 0.0  # falls back to the T=1 column
    assert pair.optimal_temperature is None
    assert report.avg_without_ts["am"] == 0.0
    assert report.avg_with_ts["am"] == 0.0
    assert report.n_records == 4
    assert report.dataset == "demo"


def test_calibrate_eval_full_structure():
    rng = np.random.default_rng(41)
    n = 60
    conf = {"am": rng.uniform(size=n), "gm": rng.uniform(size=n)}
    corr = {"cider": rng.uniform(size=n), "synth": rng.uniform(size=n)}
    scaled = {("am", "cider"): rng.uniform(size=n)}
    chosen = {("am", "cider"): 1.3}
    report = calibrate_eval(conf, scaled, corr, chosen, n_bins=10)
    assert report.metrics == ["am", "gm"]
    assert report.kinds == ["cider", "synth"]
    assert len(report.pairs) == 4

    pair = report.pair("am", "cider")
    assert pair.optimal_temperature == 1.3
    assert pair.brier == brier(conf["am"], corr["cider"])
    assert pair.brier_ts == brier(scaled[("am", "cider")], corr["cider"])
    assert pair.ece == ece(conf["am"], corr["cider"], 10)
    assert pair.pearson == pearson(conf["am"], corr["cider"])
    assert isinstance(pair.bin_table, BinTable)
    assert pair.bin_table_ts.n_samples == n

    # pairs without a chosen temperature reuse the T=1 confidences
    other = report.pair("gm", "synth")
    assert other.optimal_temperature is None
    assert other.brier_ts == other.brier

    for metric in ("am", "gm"):
        row = [p for p in report.pairs if p.metric == metric]
        assert report.avg_without_ts[metric] == pytest.approx(
            np.mean([p.brier for p in row]), abs=1e-15)
        assert report.avg_with_ts[metric] == pytest.approx(
            np.mean([p.brier_ts for p in row]), abs=1e-15)


def test_calibrate_eval_pearson_none_on_constant_column():
    conf = {"am": np.array([0.5, 0.5, 0.5])}
    corr = {"cider": np.array([0.1, 0.2, 0.3])}
    report = calibrate_eval(conf, {}, corr, {})
    assert report.pair("am", "cider").pearson is None


def test_calibrate_eval_missing_pair_lookup():
    report = calibrate_eval({"am": np.array([0.5, 0.6])}, {},
                            {"cider": np.array([0.5, 0.6])}, {})
    with pytest.raises(KeyError, match="no pair"):
        report.pair("gm", "cider")
