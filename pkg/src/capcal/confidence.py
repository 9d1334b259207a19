"""Pooled confidence metrics with post-hoc temperature scaling.

Four poolings of the chosen-token probabilities (arithmetic and geometric
means, each optionally restricted to content tokens), plus orchestration
of the embedding and self-consistency confidences, which do not depend on
temperature.  Batch work runs on flat arrays through the kernel backend.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .postag import ContentMask, default_lexicon, mask_for_record
from .records import DecodeStep, GenerationRecord
from .semantic_entropy import ClusteringConfig, semantic_entropy_for_record
from .similarity import SimilarityConfig, clapscore_at

POOLED_METRICS = ("am", "gm", "sam", "sgm")
# row order used by every report table
METRIC_ORDER = ("am", "sam", "gm", "sgm", "clapscore_at", "semantic_entropy")

FLAG_EMPTY_MASK_FALLBACK = "EMPTY_MASK_FALLBACK"
FLAG_LOW_COVERAGE = "LOW_COVERAGE"
FLAG_MISSING_SAMPLES = "MISSING_SAMPLES"

COVERAGE_WARN = 0.99

# floor for log-space pooling; stored logprobs are finite, so this only
# triggers on exp() underflow
_TINY = sys.float_info.min


def _check_temperature(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise ValueError(f"temperature must be finite and positive, got {t!r}")
    return t


def apply_temperature(step: DecodeStep, t: float) -> float:
    """Chosen-token probability after renormalized softmax at 1/t.

    Exact when the step's candidates cover the full distribution
    (coverage = 1); otherwise it is the temperature-scaled probability
    conditional on the stored candidate set.
    """
    t = _check_temperature(t)
    scaled = [c.logprob / t for c in step.candidates]
    m = max(scaled)
    exps = [math.exp(x - m) for x in scaled]
    return exps[step.chosen] / sum(exps)


def pooled_confidence(chosen_probs, mask: ContentMask | None, mode: str):
    """Pool chosen-token probabilities; returns (value, flags).

    AM/GM pool every step; SAM/SGM pool the masked steps and fall back to
    the non-selective counterpart (with a flag) when the mask is empty.
    """
    probs = list(chosen_probs)
    if not probs:
        raise ValueError("chosen_probs is empty")
    mode = mode.lower()
    if mode not in POOLED_METRICS:
        raise ValueError(f"unknown pooling mode {mode!r}")
    flags = set()
    if mode in ("sam", "sgm"):
        if mask is None:
            raise ValueError(f"{mode} requires a content mask")
        if len(mask) == 0:
            flags.add(FLAG_EMPTY_MASK_FALLBACK)
        else:
            probs = [probs[i] for i in mask.indices]
    if mode in ("am", "sam"):
        value = sum(probs) / len(probs)
    else:
        log_sum = sum(math.log(max(p, _TINY)) for p in probs)
        value = math.exp(log_sum / len(probs))
    return min(1.0, max(0.0, value)), flags


def confidences_for_record(record: GenerationRecord, store, t: float = 1.0,
                           metrics=METRIC_ORDER, *,
                           lexicon=None,
                           sim_cfg: SimilarityConfig | None = None,
                           clustering_cfg: ClusteringConfig | None = None):
    """One ConfidenceVector for a record.

    Pooled metrics are recomputed at temperature t; the embedding and
    self-consistency confidences are temperature-invariant.
    """
    t = _check_temperature(t)
    metrics = list(metrics)
    values: dict[str, float] = {}
    flags: set[str] = set()
    pooled_requested = [m for m in metrics if m in POOLED_METRICS]
    if pooled_requested:
        probs = [apply_temperature(s, t) for s in record.steps]
        if any(s.coverage < COVERAGE_WARN for s in record.steps):
            flags.add(FLAG_LOW_COVERAGE)
        mask = None
        if "sam" in pooled_requested or "sgm" in pooled_requested:
            mask = mask_for_record(record, lexicon or default_lexicon())
        for mode in pooled_requested:
            values[mode], f = pooled_confidence(
                probs, mask if mode in ("sam", "sgm") else None, mode)
            flags |= f
    if "clapscore_at" in metrics:
        values["clapscore_at"] = clapscore_at(
            store.get(record.audio_embedding_ref),
            store.get(record.caption_embedding_ref), sim_cfg)
    if "semantic_entropy" in metrics:
        if record.samples:
            result = semantic_entropy_for_record(record, store, clustering_cfg)
            values["semantic_entropy"] = result.confidence
        else:
            flags.add(FLAG_MISSING_SAMPLES)
    return ConfidenceVector(record_id=record.id, temperature=t,
                            values=values, flags=flags)


@dataclass
class ConfidenceVector:
    """Per-sample confidence values at one temperature."""

    record_id: str
    temperature: float
    values: dict[str, float]
    flags: set[str] = field(default_factory=set)

    def __post_init__(self):
        for name, v in self.values.items():
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"confidence {name}={v!r} outside [0,1]")


class PooledBatch:
    """Flat-array view of many records for fast pooled-metric sweeps.

    Candidate log-probabilities of all steps are concatenated once; each
    temperature evaluation is then a few vectorized kernel calls instead
    of a Python loop over records.
    """

    def __init__(self, record_ids, cand_logprobs, step_offsets, chosen_flat,
                 record_offsets, content_mask, min_coverage):
        self.record_ids = record_ids
        self.cand_logprobs = cand_logprobs
        self.step_offsets = step_offsets
        self.chosen_flat = chosen_flat
        self.record_offsets = record_offsets
        self.content_mask = content_mask
        self.min_coverage = min_coverage
        self.n_records = len(record_ids)
        self.steps_per_record = np.diff(record_offsets).astype(np.float64)

    @classmethod
    def from_records(cls, records, lexicon=None) -> "PooledBatch":
        lexicon = lexicon or default_lexicon()
        record_ids = []
        logprobs: list[float] = []
        step_offsets = [0]
        chosen_flat: list[int] = []
        record_offsets = [0]
        mask_bits: list[int] = []
        min_cov = math.inf
        for rec in records:
            record_ids.append(rec.id)
            mask = mask_for_record(rec, lexicon)
            selected = set(mask.indices)
            for i, step in enumerate(rec.steps):
                base = len(logprobs)
                logprobs.extend(c.logprob for c in step.candidates)
                chosen_flat.append(base + step.chosen)
                step_offsets.append(len(logprobs))
                mask_bits.append(1 if i in selected else 0)
                if step.coverage < min_cov:
                    min_cov = step.coverage
            record_offsets.append(len(chosen_flat))
        if not record_ids:
            raise ValueError("no records")
        return cls(
            record_ids=record_ids,
            cand_logprobs=np.asarray(logprobs, dtype=np.float64),
            step_offsets=np.asarray(step_offsets, dtype=np.int64),
            chosen_flat=np.asarray(chosen_flat, dtype=np.int64),
            record_offsets=np.asarray(record_offsets, dtype=np.int64),
            content_mask=np.asarray(mask_bits, dtype=np.uint8),
            min_coverage=min_cov,
        )

    def chosen_probs(self, t: float) -> np.ndarray:
        """Per-step chosen probability at temperature t (all records)."""
        t = _check_temperature(t)
        return kernels.chosen_probs(self.cand_logprobs, self.step_offsets,
                                    self.chosen_flat, 1.0 / t)

    def pooled(self, t: float, mode: str) -> np.ndarray:
        """Per-record pooled confidence at temperature t."""
        return self.pooled_from_probs(self.chosen_probs(t), mode)

    def pooled_from_probs(self, probs: np.ndarray, mode: str) -> np.ndarray:
        """Pool precomputed per-step probabilities (shared across modes)."""
        mode = mode.lower()
        if mode not in POOLED_METRICS:
            raise ValueError(f"unknown pooling mode {mode!r}")
        values = probs if mode in ("am", "sam") else np.log(
            np.maximum(probs, _TINY))
        if mode in ("am", "gm"):
            sums = kernels.segment_sum(values, self.record_offsets)
            means = sums / self.steps_per_record
        else:
            sums, counts = kernels.masked_segment_sum(
                values, self.content_mask, self.record_offsets)
            fallback_sums = kernels.segment_sum(values, self.record_offsets)
            empty = counts == 0
            means = np.where(
                empty,
                fallback_sums / self.steps_per_record,
                sums / np.maximum(counts, 1))
        if mode in ("gm", "sgm"):
            means = np.exp(means)
        return np.clip(means, 0.0, 1.0)

    def empty_mask_records(self) -> np.ndarray:
        """Boolean per record: content mask empty (selective fell back)."""
        _, counts = kernels.masked_segment_sum(
            np.zeros(len(self.chosen_flat)),
            self.content_mask, self.record_offsets)
        return counts == 0

    @property
    def flags(self) -> set[str]:
        return {FLAG_LOW_COVERAGE} if self.min_coverage < COVERAGE_WARN else set()
