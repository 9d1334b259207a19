"""Synthetic caption corpus with exactly known decoder distributions.

The generator simulates a toy captioning decoder whose true per-step token
distribution is known in closed form.  Stored candidate logprobs are the
true logits multiplied by a sharpening factor, so the stored model is
over- or under-confident in a controlled way: rescaling by temperature
T = sharpening recovers the true distribution exactly, and generated
correctness scores are Bernoulli draws against the true chosen-token
probabilities.  Downstream pooling, sweeps, and calibration reports can
therefore be checked against analytic expectations.

All randomness flows through one deterministic generator in a fixed draw
order (see docs/rng.md), so equal seeds give byte-identical corpora.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correctness import ScoreTable
from .records import (
    CandidateToken,
    DecodeStep,
    EmbeddingStore,
    GenerationRecord,
    SampledCaption,
)
from .rng import Xoshiro256StarStar, fnv1a64

COARSE_TAGS = ("NOUN", "VERB", "ADJ", "OTHER")

# Per-record peakedness multiplier for the true logits, drawn log-uniformly.
# The low end gives near-uniform steps, the high end near-deterministic ones.
KAPPA_RANGE = (0.25, 4.0)

# Sampled captions draw from the k most probable stored tokens per step.
TOPK_SAMPLES = 3

MIN_CAPTION_LEN = 3

DEFAULT_EMBED_DIM = 64

DEFAULT_VOCAB = (
    ("dog", "NOUN"),
    ("rain", "NOUN"),
    ("engine", "NOUN"),
    ("bell", "NOUN"),
    ("bird", "NOUN"),
    ("crowd", "NOUN"),
    ("barks", "VERB"),
    ("hums", "VERB"),
    ("rings", "VERB"),
    ("chirps", "VERB"),
    ("roars", "VERB"),
    ("loud", "ADJ"),
    ("soft", "ADJ"),
    ("distant", "ADJ"),
    ("the", "OTHER"),
    ("and", "OTHER"),
)


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for one generated corpus; equal configs give equal bytes."""

    vocab: tuple = DEFAULT_VOCAB
    max_len: int = 12
    sharpening: float = 1.0
    n_samples_per_input: int = 5
    seed: int = 0
    n_records: int = 100
    n_references: int = 5
    embed_dim: int = DEFAULT_EMBED_DIM

    def __post_init__(self):
        vocab = tuple((str(w), str(t)) for w, t in self.vocab)
        object.__setattr__(self, "vocab", vocab)
        if len(vocab) < 4:
            raise ValueError(f"vocab has {len(vocab)} words, need at least 4")
        seen = set()
        tags_present = set()
        for word, tag in vocab:
            if not word or word.split() != [word]:
                raise ValueError(f"bad vocab word {word!r}")
            if word in seen:
                raise ValueError(f"duplicate vocab word {word!r}")
            seen.add(word)
            if tag not in COARSE_TAGS:
                raise ValueError(f"vocab tag {tag!r} for {word!r} not one of "
                                 f"{COARSE_TAGS}")
            tags_present.add(tag)
        missing = [t for t in COARSE_TAGS if t not in tags_present]
        if missing:
            raise ValueError(f"vocab covers no {'/'.join(missing)} words; "
                             "all four POS classes are required")
        if self.max_len < MIN_CAPTION_LEN:
            raise ValueError(f"max_len must be >= {MIN_CAPTION_LEN}, "
                             f"got {self.max_len}")
        if not (math.isfinite(self.sharpening) and self.sharpening > 0.0):
            raise ValueError(f"sharpening must be finite and > 0, "
                             f"got {self.sharpening!r}")
        if self.n_samples_per_input < 1:
            raise ValueError("n_samples_per_input must be >= 1")
        if self.n_records < 1:
            raise ValueError("n_records must be >= 1")
        if self.n_references < 1:
            raise ValueError("n_references must be >= 1")
        if self.embed_dim < 2:
            raise ValueError("embed_dim must be >= 2")


@dataclass(frozen=True)
class LatentQuality:
    """Ground-truth quality per record id.

    Both the stored confidences and the generated correctness scores are
    noisy functions of these values, which makes them the reference point
    for calibration checks.
    """

    q: dict = field(default_factory=dict)

    def __post_init__(self):
        for rid, value in self.q.items():
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"latent quality {value!r} for {rid!r} "
                                 "outside [0,1]")

    def __getitem__(self, record_id: str) -> float:
        return self.q[record_id]

    def __len__(self) -> int:
        return len(self.q)

    def items(self):
        return self.q.items()


@dataclass(frozen=True)
class SynthDataset:
    """Everything one generation run produces, in emission order."""

    records: list
    store: EmbeddingStore
    embedding_rows: tuple  # (ref, kind, vector) rows for the store file
    scores: ScoreTable
    latent: LatentQuality


def sample_topk(step_logits, k: int, rng: Xoshiro256StarStar) -> int:
    """Multinomial draw restricted to the k most probable entries.

    Ties rank by lower index.  Weights are the softmax of the selected
    logits; the draw consumes one generator output.  Returns an index into
    the original list.
    """
    logits = [float(x) for x in step_logits]
    if not 1 <= k <= len(logits):
        raise ValueError(f"k={k} outside [1, {len(logits)}]")
    order = sorted(range(len(logits)), key=lambda i: (-logits[i], i))[:k]
    top = logits[order[0]]
    weights = [math.exp(logits[i] - top) for i in order]
    return order[rng.multinomial(weights)]


def synth_correctness(q: float, noise: float,
                      rng: Xoshiro256StarStar) -> float:
    """Noisy observed correctness clip(q + noise * g) for latent quality q.

    Always consumes one standard-normal draw, so the generator stream stays
    aligned whether or not noise is zero.
    """
    if not (math.isfinite(noise) and noise >= 0.0):
        raise ValueError(f"noise must be finite and >= 0, got {noise!r}")
    g = rng.normal()
    return min(1.0, max(0.0, q + noise * g))


_word_vector_cache: dict = {}


def _basis_vector(dim: int) -> np.ndarray:
    e = np.zeros(dim, dtype=np.float64)
    e[0] = 1.0
    e.flags.writeable = False
    return e


def _word_vector(word: str, dim: int) -> np.ndarray:
    key = (word, dim)
    vec = _word_vector_cache.get(key)
    if vec is None:
        wrng = Xoshiro256StarStar(fnv1a64(word))
        vec = np.array([wrng.normal() for _ in range(dim)], dtype=np.float64)
        norm = math.sqrt(float(np.dot(vec, vec)))
        vec = _basis_vector(dim) if norm == 0.0 else vec / norm
        vec.flags.writeable = False
        _word_vector_cache[key] = vec
    return vec


def toy_embed(text: str, dim: int = DEFAULT_EMBED_DIM) -> np.ndarray:
    """Deterministic bag-of-words embedding on the unit sphere.

    Each word hashes to a fixed random direction; the sentence vector is
    the normalized mean of its word vectors, so word order never matters.
    Empty text maps to a fixed basis vector.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    words = text.split()
    if not words:
        return _basis_vector(dim)
    acc = np.zeros(dim, dtype=np.float64)
    # summation order is canonical so permuted texts give identical bytes
    for word in sorted(words):
        acc += _word_vector(word, dim)
    norm = math.sqrt(float(np.dot(acc, acc)))
    if norm == 0.0:
        return _basis_vector(dim)
    out = acc / norm
    out.flags.writeable = False
    return out


def _log_uniform(rng: Xoshiro256StarStar, lo: float, hi: float) -> float:
    return math.exp(math.log(lo) + rng.random() * (math.log(hi) - math.log(lo)))


def generate_dataset(cfg: SynthConfig) -> SynthDataset:
    """Generate records, embeddings, correctness scores, and latent quality.

    Per-record draw order is fixed: peakedness, length, then per step the
    vocabulary's Gumbel logits and the chosen-token draw, then reference
    word draws, sampled-caption draws, and finally the per-step Bernoulli
    correctness draws.  See docs/rng.md.
    """
    rng = Xoshiro256StarStar(cfg.seed)
    vocab_words = [w for w, _ in cfg.vocab]
    vocab_tags = [t for _, t in cfg.vocab]
    v = len(vocab_words)
    sharp = cfg.sharpening
    topk = min(TOPK_SAMPLES, v)

    records = []
    rows = []
    scores = ScoreTable()
    latent = {}

    for i in range(cfg.n_records):
        rid = f"synth-{i:06d}"
        kappa = _log_uniform(rng, *KAPPA_RANGE)
        length = MIN_CAPTION_LEN + rng.randint(cfg.max_len - MIN_CAPTION_LEN + 1)

        steps = []
        true_probs = []
        chosen_words = []
        chosen_tags = []
        for _ in range(length):
            z = [kappa * rng.gumbel() for _ in range(v)]
            scaled = [sharp * zj for zj in z]
            m = max(scaled)
            exps = [math.exp(x - m) for x in scaled]
            total = sum(exps)
            pick = rng.multinomial(exps)

            mt = max(z)
            true_exps = [math.exp(x - mt) for x in z]
            true_probs.append(true_exps[pick] / sum(true_exps))

            log_total = m + math.log(total)
            order = sorted(range(v), key=lambda j: (-scaled[j], j))
            candidates = [CandidateToken(token=vocab_words[j], token_id=j,
                                         logprob=scaled[j] - log_total)
                          for j in order]
            steps.append(DecodeStep(chosen=order.index(pick),
                                    candidates=candidates, coverage=1.0))
            chosen_words.append(vocab_words[pick])
            chosen_tags.append(vocab_tags[pick])

        q = sum(true_probs) / length

        references = []
        for _ in range(cfg.n_references):
            ref_words = [word if rng.random() < q
                         else vocab_words[rng.randint(v)]
                         for word in chosen_words]
            references.append(" ".join(ref_words))

        samples = []
        for k in range(cfg.n_samples_per_input):
            tokens = []
            seq_logprob = 0.0
            for step in steps:
                stored = [c.logprob for c in step.candidates]
                j = sample_topk(stored, topk, rng)
                tokens.append(step.candidates[j].token)
                seq_logprob += stored[j]
            samples.append(SampledCaption(text=" ".join(tokens),
                                          embedding_ref=f"{rid}:smp{k}",
                                          sequence_logprob=seq_logprob))

        hits = sum(1 for p in true_probs if rng.random() < p)
        scores.set(rid, "synth", hits / length)

        caption_text = " ".join(chosen_words)
        dim = cfg.embed_dim
        rows.append((f"{rid}:audio", "audio",
                     toy_embed(" ".join(references), dim)))
        rows.append((f"{rid}:cap", "text", toy_embed(caption_text, dim)))
        reference_refs = []
        for k, ref_text in enumerate(references):
            ref = f"{rid}:ref{k}"
            reference_refs.append(ref)
            rows.append((ref, "text", toy_embed(ref_text, dim)))
        for sample in samples:
            rows.append((sample.embedding_ref, "text",
                         toy_embed(sample.text, dim)))

        records.append(GenerationRecord(
            id=rid,
            caption_text=caption_text,
            words=list(chosen_words),
            word_pos=chosen_tags,
            alignment=None,
            steps=steps,
            audio_embedding_ref=f"{rid}:audio",
            caption_embedding_ref=f"{rid}:cap",
            references=references,
            reference_embedding_refs=reference_refs,
            samples=samples,
            external_scores={},
        ))
        latent[rid] = q

    store = EmbeddingStore({ref: vec for ref, _, vec in rows}, cfg.embed_dim)
    return SynthDataset(records=records, store=store,
                        embedding_rows=tuple(rows), scores=scores,
                        latent=LatentQuality(q=latent))
