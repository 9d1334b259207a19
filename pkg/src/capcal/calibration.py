"""Calibration statistics and temperature selection.

Brier score, expected calibration error over equal-width confidence bins,
Pearson correlation, reliability-bin tables, and the grid search that
picks the temperature minimizing validation Brier per (confidence metric,
correctness kind) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_N_BINS = 10


def _paired(conf, corr):
    c = np.asarray(conf, dtype=np.float64)
    k = np.asarray(corr, dtype=np.float64)
    if c.shape != k.shape or c.ndim != 1:
        raise ValueError(f"length mismatch: {c.shape} vs {k.shape}")
    if c.size == 0:
        raise ValueError("empty input")
    return c, k


def brier(conf, corr) -> float:
    """Mean squared difference between confidence and correctness."""
    c, k = _paired(conf, corr)
    d = c - k
    return float(np.mean(d * d))


@dataclass(frozen=True)
class Bin:
    lo: float
    hi: float
    count: int
    mean_confidence: float | None
    mean_correctness: float | None


@dataclass(frozen=True)
class BinTable:
    n_bins: int
    n_samples: int
    bins: tuple[Bin, ...]

    def ece(self) -> float:
        total = 0.0
        for b in self.bins:
            if b.count:
                total += (b.count / self.n_samples) * abs(
                    b.mean_confidence - b.mean_correctness)
        return total


def reliability_bins(conf, corr, n_bins: int = DEFAULT_N_BINS) -> BinTable:
    """Equal-width confidence bins over [0,1]; the last bin is closed."""
    c, k = _paired(conf, corr)
    if n_bins < 1:
        raise ValueError(f"n_bins must be >= 1, got {n_bins}")
    idx = np.minimum((c * n_bins).astype(np.int64), n_bins - 1)
    bins = []
    for m in range(n_bins):
        sel = idx == m
        count = int(np.count_nonzero(sel))
        if count:
            mean_c = float(np.mean(c[sel]))
            mean_k = float(np.mean(k[sel]))
        else:
            mean_c = mean_k = None
        bins.append(Bin(lo=m / n_bins, hi=(m + 1) / n_bins, count=count,
                        mean_confidence=mean_c, mean_correctness=mean_k))
    return BinTable(n_bins=n_bins, n_samples=int(c.size), bins=tuple(bins))


def ece(conf, corr, n_bins: int = DEFAULT_N_BINS) -> float:
    """Bin-weighted average |mean confidence − mean correctness|."""
    return reliability_bins(conf, corr, n_bins).ece()


def pearson(x, y) -> float:
    """Sample Pearson correlation; zero variance is an error, not 0."""
    a, b = _paired(x, y)
    if a.size < 2:
        raise ValueError("pearson needs at least 2 samples")
    da = a - a.mean()
    db = b - b.mean()
    va = float(np.dot(da, da))
    vb = float(np.dot(db, db))
    if va == 0.0 or vb == 0.0:
        raise ValueError("pearson undefined: an input has zero variance")
    r = float(np.dot(da, db)) / math.sqrt(va * vb)
    return min(1.0, max(-1.0, r))


def correlation_matrix(columns: dict[str, np.ndarray]):
    """Pairwise Pearson matrix over named columns.

    Returns (names, matrix) with an exact unit diagonal and exact symmetry
    (each unordered pair is computed once and mirrored).  Undefined cells
    (zero variance) are NaN.
    """
    names = list(columns)
    n = len(names)
    mat = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            try:
                r = pearson(columns[names[i]], columns[names[j]])
            except ValueError:
                r = math.nan
            mat[i, j] = r
            mat[j, i] = r
    return names, mat


@dataclass(frozen=True)
class TemperatureGrid:
    start: float = 0.1
    stop: float = 2.0
    step: float = 0.1

    def __post_init__(self):
        if not (self.start > 0 and self.step > 0 and self.stop >= self.start):
            raise ValueError(f"bad grid: start={self.start} stop={self.stop} "
                             f"step={self.step}")

    def temperatures(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 10) for i in range(n)]


@dataclass
class SweepResult:
    metric: str
    kind: str
    temperatures: list[float]
    briers: list[float]
    optimal_temperature: float
    optimal_brier: float


def select_optimal(temperatures, briers):
    """Argmin Brier; ties prefer T nearest 1.0, then the smaller T."""
    best = min(zip(briers, (abs(t - 1.0) for t in temperatures), temperatures))
    return best[2], best[0]


def sweep_temperature(batch, corr_values, metric: str,
                      grid: TemperatureGrid | None = None,
                      kind: str = "") -> SweepResult:
    """Brier-vs-temperature curve for one pooled metric on one batch.

    batch is a PooledBatch over the validation records; corr_values are
    that split's correctness values in the same record order.
    """
    grid = grid or TemperatureGrid()
    corr = np.asarray(corr_values, dtype=np.float64)
    if len(corr) != batch.n_records:
        raise ValueError(f"{len(corr)} correctness values for "
                         f"{batch.n_records} records")
    temperatures = grid.temperatures()
    briers = []
    for t in temperatures:
        conf = batch.pooled(t, metric)
        briers.append(brier(conf, corr))
    t_star, b_star = select_optimal(temperatures, briers)
    return SweepResult(metric=metric, kind=kind, temperatures=temperatures,
                       briers=briers, optimal_temperature=t_star,
                       optimal_brier=b_star)


@dataclass
class PairReport:
    """Calibration of one (confidence metric, correctness kind) pair."""

    metric: str
    kind: str
    brier: float
    ece: float
    pearson: float | None
    optimal_temperature: float | None
    brier_ts: float
    ece_ts: float
    bin_table: BinTable
    bin_table_ts: BinTable


@dataclass
class CalibrationReport:
    dataset: str
    split: str
    n_records: int
    n_bins: int
    metrics: list[str]
    kinds: list[str]
    pairs: list[PairReport]
    avg_without_ts: dict[str, float] = field(default_factory=dict)
    avg_with_ts: dict[str, float] = field(default_factory=dict)
    config_echo: dict = field(default_factory=dict)

    def pair(self, metric: str, kind: str) -> PairReport:
        for p in self.pairs:
            if p.metric == metric and p.kind == kind:
                return p
        raise KeyError(f"no pair ({metric}, {kind}) in report")


def _maybe_pearson(conf, corr):
    try:
        return pearson(conf, corr)
    except ValueError:
        return None


def calibrate_eval(conf_at_t1: dict[str, np.ndarray],
                   conf_at_ts: dict[str, np.ndarray],
                   corr_columns: dict[str, np.ndarray],
                   chosen_temperatures: dict[tuple[str, str], float],
                   n_bins: int = DEFAULT_N_BINS,
                   dataset: str = "", split: str = "evaluation",
                   config_echo: dict | None = None) -> CalibrationReport:
    """Assemble the evaluation report from aligned per-record columns.

    conf_at_t1 maps metric -> confidences at T=1; conf_at_ts maps
    (metric, kind) tuples -> confidences at that pair's chosen temperature
    (falling back to the T=1 column when a pair was not swept).
    """
    metrics = list(conf_at_t1)
    kinds = list(corr_columns)
    n_records = None
    pairs = []
    for metric in metrics:
        base = np.asarray(conf_at_t1[metric], dtype=np.float64)
        if n_records is None:
            n_records = base.size
        for kind in kinds:
            corr = np.asarray(corr_columns[kind], dtype=np.float64)
            t_star = chosen_temperatures.get((metric, kind))
            scaled = conf_at_ts.get((metric, kind), base)
            scaled = np.asarray(scaled, dtype=np.float64)
            bt = reliability_bins(base, corr, n_bins)
            bt_ts = reliability_bins(scaled, corr, n_bins)
            pairs.append(PairReport(
                metric=metric, kind=kind,
                brier=brier(base, corr),
                ece=bt.ece(),
                pearson=_maybe_pearson(base, corr),
                optimal_temperature=t_star,
                brier_ts=brier(scaled, corr),
                ece_ts=bt_ts.ece(),
                bin_table=bt,
                bin_table_ts=bt_ts,
            ))
    report = CalibrationReport(
        dataset=dataset, split=split, n_records=int(n_records or 0),
        n_bins=n_bins, metrics=metrics, kinds=kinds, pairs=pairs,
        config_echo=config_echo or {})
    for metric in metrics:
        row = [p for p in report.pairs if p.metric == metric]
        report.avg_without_ts[metric] = float(np.mean([p.brier for p in row]))
        report.avg_with_ts[metric] = float(np.mean([p.brier_ts for p in row]))
    return report
