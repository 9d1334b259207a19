"""Self-consistency confidence from clustered caption samples.

Sampled captions are clustered greedily by embedding similarity; the
entropy of the cluster mass distribution, rescaled by its maximum ln(N),
becomes a [0,1] confidence (1 = all samples agree).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .similarity import AT_MAPPINGS, cosine, map_to_unit

WEIGHTINGS = ("count", "sequence_prob")


@dataclass(frozen=True)
class ClusteringConfig:
    tau: float = 0.7
    weighting: str = "count"
    mapping: str = "clamp01"

    def __post_init__(self):
        if not (0.0 < self.tau <= 1.0):
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}, "
                             f"got {self.weighting!r}")
        if self.mapping not in AT_MAPPINGS:
            raise ValueError(f"mapping must be one of {AT_MAPPINGS}, "
                             f"got {self.mapping!r}")


@dataclass(frozen=True)
class ClusterAssignment:
    labels: tuple[int, ...]
    n_clusters: int


@dataclass(frozen=True)
class SemanticEntropyResult:
    entropy: float
    n_samples: int
    confidence: float


def cluster_by_similarity(embeddings, cfg: ClusteringConfig) -> ClusterAssignment:
    """Greedy sequential clustering.

    Caption i joins the lowest-indexed cluster whose first member is at
    least tau similar to it, else founds a new cluster.  Comparing against
    first members only keeps the procedure order-deterministic and O(N*K).
    """
    embs = list(embeddings)
    if not embs:
        raise ValueError("cluster_by_similarity needs at least one embedding")
    labels: list[int] = []
    firsts: list[int] = []
    for i, emb in enumerate(embs):
        assigned = None
        for k, j in enumerate(firsts):
            sim = map_to_unit(cosine(emb, embs[j]), cfg.mapping)
            if sim >= cfg.tau:
                assigned = k
                break
        if assigned is None:
            assigned = len(firsts)
            firsts.append(i)
        labels.append(assigned)
    return ClusterAssignment(labels=tuple(labels), n_clusters=len(firsts))


def semantic_entropy(assignment: ClusterAssignment, cfg: ClusteringConfig,
                     sequence_logprobs=None) -> SemanticEntropyResult:
    """Entropy (nats) of cluster masses and the derived confidence."""
    n = len(assignment.labels)
    if cfg.weighting == "sequence_prob":
        if sequence_logprobs is None or len(sequence_logprobs) != n:
            raise ValueError("sequence_prob weighting needs one sequence "
                             "logprob per sample")
        # shift by the max before exponentiating so long sequences
        # with very negative logprobs cannot underflow to all-zero mass
        shift = max(sequence_logprobs)
        weights = [0.0] * assignment.n_clusters
        for label, lp in zip(assignment.labels, sequence_logprobs):
            weights[label] += math.exp(lp - shift)
    else:
        weights = [0.0] * assignment.n_clusters
        for label in assignment.labels:
            weights[label] += 1.0
    total = sum(weights)
    entropy = 0.0
    for w in weights:
        if w > 0.0:
            p = w / total
            entropy -= p * math.log(p)
    entropy = max(0.0, entropy)
    if n == 1:
        confidence = 1.0
    else:
        confidence = 1.0 - entropy / math.log(n)
        confidence = min(1.0, max(0.0, confidence))
    return SemanticEntropyResult(entropy=entropy, n_samples=n,
                                 confidence=confidence)


def semantic_entropy_for_record(record, store,
                                cfg: ClusteringConfig | None = None
                                ) -> SemanticEntropyResult:
    """Cluster a record's sampled captions and compute their entropy."""
    cfg = cfg or ClusteringConfig()
    if not record.samples:
        raise ValueError(f"record {record.id!r} has no sampled captions")
    embs = [store.get(s.embedding_ref) for s in record.samples]
    assignment = cluster_by_similarity(embs, cfg)
    logprobs = None
    if cfg.weighting == "sequence_prob":
        logprobs = [s.sequence_logprob for s in record.samples]
        if any(lp is None for lp in logprobs):
            raise ValueError(f"record {record.id!r} lacks sequence logprobs "
                             "required by sequence_prob weighting")
    return semantic_entropy(assignment, cfg, logprobs)
