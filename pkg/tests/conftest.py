"""Shared builders for small, hand-checkable test fixtures."""

import math

import numpy as np
import pytest

from capcal.records import (
    CandidateToken,
    DecodeStep,
    EmbeddingStore,
    GenerationRecord,
    SampledCaption,
)


def make_step(probs, chosen=0, coverage=None):
    """DecodeStep whose candidate probabilities are given directly.

    Candidates keep the given order; coverage defaults to the stored mass.
    """
    cands = tuple(
        CandidateToken(token=f"w{i}", token_id=i, logprob=math.log(p))
        for i, p in enumerate(probs))
    cov = math.fsum(probs) if coverage is None else coverage
    return DecodeStep(chosen=chosen, candidates=cands, coverage=cov)


def make_record(step_probs, chosen=None, tags=None, rid="rec-0",
                samples=0, store_dim=4, seed=1):
    """A valid record plus a store holding every embedding it references.

    step_probs: one probability list per decode step.  chosen: per-step
    chosen index (default 0).  tags: per-word coarse POS tags (default all
    NOUN, so the content mask covers every step).
    """
    n = len(step_probs)
    chosen = chosen or [0] * n
    tags = tags or ["NOUN"] * n
    steps = [make_step(p, c) for p, c in zip(step_probs, chosen)]
    words = [f"word{i}" for i in range(n)]

    rng = np.random.default_rng(seed)

    def vec():
        v = rng.normal(size=store_dim)
        return v / np.linalg.norm(v)

    entries = {f"{rid}:audio": vec(), f"{rid}:cap": vec(),
               f"{rid}:ref0": vec()}
    sampled = []
    for k in range(samples):
        ref = f"{rid}:smp{k}"
        entries[ref] = vec()
        sampled.append(SampledCaption(text=f"sample {k}", embedding_ref=ref,
                                      sequence_logprob=-float(k + 1)))
    store = EmbeddingStore(entries, store_dim)
    record = GenerationRecord(
        id=rid,
        caption_text=" ".join(words),
        words=words,
        word_pos=tags,
        alignment=None,
        steps=steps,
        audio_embedding_ref=f"{rid}:audio",
        caption_embedding_ref=f"{rid}:cap",
        references=["a reference caption"],
        reference_embedding_refs=[f"{rid}:ref0"],
        samples=sampled,
        external_scores={},
    )
    return record, store


@pytest.fixture
def tiny_record():
    return make_record([[0.9, 0.1], [0.6, 0.4], [0.5, 0.5]])
