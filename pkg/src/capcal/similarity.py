"""Cosine similarity in a joint embedding space.

Audio-to-text similarity serves as a confidence signal; text-to-text
similarity against references serves as a correctness signal and as the
clustering criterion for semantic entropy.  Dot products use compensated
summation in index order so results are reproducible regardless of how
work is split across processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AT_MAPPINGS = ("clamp01", "affine")
TT_AGGREGATIONS = ("mean", "max")


@dataclass(frozen=True)
class SimilarityConfig:
    at_mapping: str = "clamp01"
    tt_reference_aggregation: str = "mean"

    def __post_init__(self):
        if self.at_mapping not in AT_MAPPINGS:
            raise ValueError(f"at_mapping must be one of {AT_MAPPINGS}, "
                             f"got {self.at_mapping!r}")
        if self.tt_reference_aggregation not in TT_AGGREGATIONS:
            raise ValueError(
                f"tt_reference_aggregation must be one of {TT_AGGREGATIONS}, "
                f"got {self.tt_reference_aggregation!r}")


def _kahan_dot(u: np.ndarray, v: np.ndarray) -> float:
    total = 0.0
    comp = 0.0
    for a, b in zip(u.tolist(), v.tolist()):
        y = a * b - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def cosine(u, v) -> float:
    """Cosine of the angle between u and v, clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = _kahan_dot(u, u)
    nv = _kahan_dot(v, v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for the zero vector")
    c = _kahan_dot(u, v) / (nu ** 0.5 * nv ** 0.5)
    return min(1.0, max(-1.0, c))


def map_to_unit(c: float, mapping: str) -> float:
    """Map a cosine in [-1,1] into [0,1]."""
    if mapping == "clamp01":
        return min(1.0, max(0.0, c))
    if mapping == "affine":
        return (c + 1.0) / 2.0
    raise ValueError(f"unknown mapping {mapping!r}")


def clapscore_at(audio_emb, caption_emb,
                 cfg: SimilarityConfig | None = None) -> float:
    """Audio-to-caption similarity as a [0,1] confidence."""
    cfg = cfg or SimilarityConfig()
    return map_to_unit(cosine(audio_emb, caption_emb), cfg.at_mapping)


def clapscore_tt(caption_emb, reference_embs,
                 cfg: SimilarityConfig | None = None) -> float:
    """Caption-to-references similarity as a [0,1] correctness.

    Each reference cosine is mapped to [0,1] first, then aggregated, so
    the configured mapping applies uniformly to both score families.
    """
    cfg = cfg or SimilarityConfig()
    refs = list(reference_embs)
    if not refs:
        raise ValueError("clapscore_tt needs at least one reference embedding")
    mapped = [map_to_unit(cosine(caption_emb, r), cfg.at_mapping) for r in refs]
    if cfg.tt_reference_aggregation == "max":
        return max(mapped)
    return float(sum(mapped) / len(mapped))
