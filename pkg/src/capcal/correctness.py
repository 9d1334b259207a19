"""Per-sample correctness scores in [0,1].

Native CIDEr-D over reference captions, plus ingestion and range
normalization of externally computed scores (SPICE, FENSE, LLM judge).
Embedding-based caption-to-reference similarity lives in `similarity`.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .errors import DataFormatError
from .stemmer import stem

# Score kinds in canonical report order.  "synth" is the built-in
# generator's analytic correctness and follows the external kinds.
KIND_ORDER = ("cider", "spice", "fense", "clapscore_tt", "llm_judge", "synth")

CIDER_N_MAX = 4
CIDER_SIGMA = 6.0


def tokenize_caption(text: str, stemming: bool = True) -> list[str]:
    """Lowercase, strip punctuation, split; optionally Porter-stem.

    Apostrophes are removed (so contractions stay one word); all other
    punctuation becomes a space.
    """
    out = []
    for ch in text.lower():
        if ch.isalnum() or ch.isspace():
            out.append(ch)
        elif ch in "'’":
            continue
        else:
            out.append(" ")
    words = "".join(out).split()
    if stemming:
        words = [stem(w) for w in words]
    return words


def _ngram_counts(words: list[str], n_max: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, n_max + 1):
        for i in range(len(words) - n + 1):
            counts[tuple(words[i:i + n])] += 1
    return counts


@dataclass
class IdfTable:
    """Document frequencies over reference sets; idf(g) = ln(N / max(df, 1))."""

    df: dict[tuple, int]
    corpus_size: int
    n_max: int = CIDER_N_MAX

    def idf(self, ngram: tuple) -> float:
        return math.log(self.corpus_size) - math.log(max(1.0, self.df.get(ngram, 0)))


def build_idf(reference_corpus, n_max: int = CIDER_N_MAX) -> IdfTable:
    """Count, per n-gram, the number of items whose reference set uses it.

    reference_corpus: one list of tokenized references per audio sample.
    """
    corpus = list(reference_corpus)
    if not corpus:
        raise ValueError("reference corpus is empty")
    df: dict[tuple, int] = defaultdict(int)
    for refs in corpus:
        seen = set()
        for ref in refs:
            seen.update(_ngram_counts(ref, n_max).keys())
        for ngram in seen:
            df[ngram] += 1
    return IdfTable(df=dict(df), corpus_size=len(corpus), n_max=n_max)


def _tfidf_vector(words: list[str], idf: IdfTable):
    # per-order sparse TF-IDF vectors, their norms, and the bigram count
    # (the length proxy the penalty term uses)
    vec = [{} for _ in range(idf.n_max)]
    norm = [0.0] * idf.n_max
    length = 0
    for ngram, count in _ngram_counts(words, idf.n_max).items():
        n = len(ngram) - 1
        w = count * idf.idf(ngram)
        vec[n][ngram] = w
        norm[n] += w * w
        if n == 1:
            length += count
    return vec, [math.sqrt(x) for x in norm], length


def cider_d(candidate: list[str], references, idf: IdfTable) -> float:
    """CIDEr-D raw score in [0, 10].

    Per order n: candidate-clipped TF-IDF similarity against each
    reference, scaled by a Gaussian penalty on the length difference;
    averaged over orders and references, times 10.
    """
    refs = list(references)
    if not refs:
        raise ValueError("cider_d needs at least one reference")
    vec_c, norm_c, len_c = _tfidf_vector(candidate, idf)
    order_sums = [0.0] * idf.n_max
    for ref in refs:
        vec_r, norm_r, len_r = _tfidf_vector(ref, idf)
        delta = float(len_c - len_r)
        penalty = math.exp(-(delta * delta) / (2.0 * CIDER_SIGMA ** 2))
        for n in range(idf.n_max):
            val = 0.0
            for ngram, w in vec_c[n].items():
                r = vec_r[n].get(ngram, 0.0)
                val += min(w, r) * r
            if norm_c[n] != 0.0 and norm_r[n] != 0.0:
                val /= norm_c[n] * norm_r[n]
            order_sums[n] += val * penalty
    mean_over_orders = sum(order_sums) / idf.n_max
    return 10.0 * mean_over_orders / len(refs)


@dataclass(frozen=True)
class NormalizationRule:
    kind: str
    source_range: tuple[float, float]
    clip: bool = True

    def __post_init__(self):
        lo, hi = self.source_range
        if not lo < hi:
            raise ValueError(f"source_range must satisfy lo < hi, got {self.source_range}")


DEFAULT_RULES = {
    "cider": NormalizationRule("cider", (0.0, 10.0)),
    "spice": NormalizationRule("spice", (0.0, 1.0)),
    "fense": NormalizationRule("fense", (0.0, 1.0)),
    "clapscore_tt": NormalizationRule("clapscore_tt", (0.0, 1.0)),
    "llm_judge": NormalizationRule("llm_judge", (0.0, 100.0)),
    "synth": NormalizationRule("synth", (0.0, 1.0)),
}


def normalize_score(raw: float, rule: NormalizationRule) -> float:
    lo, hi = rule.source_range
    x = (raw - lo) / (hi - lo)
    if rule.clip:
        x = min(1.0, max(0.0, x))
    return x


@dataclass
class ScoreTable:
    """record id -> score kind -> normalized value in [0,1]."""

    scores: dict[str, dict[str, float]] = field(default_factory=dict)

    def set(self, record_id: str, kind: str, value: float) -> None:
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"score {value!r} for ({record_id}, {kind}) "
                             "outside [0,1]; normalize first")
        self.scores.setdefault(record_id, {})[kind] = value

    def get(self, record_id: str, kind: str):
        return self.scores.get(record_id, {}).get(kind)

    def kinds(self) -> list[str]:
        present = set()
        for per_id in self.scores.values():
            present.update(per_id)
        return [k for k in KIND_ORDER if k in present] + sorted(
            k for k in present if k not in KIND_ORDER)

    def column(self, kind: str, record_ids) -> list[float]:
        """Values for one kind in the given record order; raises on gaps."""
        out = []
        for rid in record_ids:
            v = self.get(rid, kind)
            if v is None:
                raise KeyError(f"no {kind!r} score for record {rid!r}")
            out.append(v)
        return out


@dataclass
class IngestReport:
    kind: str
    matched: int = 0
    orphans: list[str] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)


def ingest_external_scores(path: str, kind: str, rule: NormalizationRule,
                           known_ids=None):
    """Read "record_id<TAB>raw_score" lines, normalize, and report coverage.

    known_ids, when given, is the dataset's id universe: file ids outside
    it are reported as orphans (kept out of the table), dataset ids with
    no line as missing.
    """
    table = ScoreTable()
    known = None if known_ids is None else set(known_ids)
    report = IngestReport(kind=kind)
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataFormatError(
                    f"{path}:{lineno}: expected record_id<TAB>raw_score")
            rid, raw_text = parts
            try:
                raw = float(raw_text)
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: unparseable score {raw_text!r}") from None
            if not math.isfinite(raw):
                raise DataFormatError(
                    f"{path}:{lineno}: non-finite score for id {rid!r}")
            if known is not None and rid not in known:
                report.orphans.append(rid)
                continue
            seen.add(rid)
            table.set(rid, kind, normalize_score(raw, rule))
            report.matched += 1
    if known is not None:
        report.missing = sorted(known - seen)
    return table, report
