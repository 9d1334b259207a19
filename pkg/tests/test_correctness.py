"""Tokenization, IDF, native CIDEr-D, normalization, and score ingestion.

The CIDEr-D reference used here is a from-scratch brute-force
implementation written directly against the metric's definition, kept
deliberately naive (dicts and loops, no sharing with the package code).
"""

import math
import random

import pytest

from capcal.correctness import (
    DEFAULT_RULES,
    KIND_ORDER,
    IngestReport,
    NormalizationRule,
    ScoreTable,
    build_idf,
    cider_d,
    ingest_external_scores,
    normalize_score,
    tokenize_caption,
)
from capcal.errors import DataFormatError


# ------------------------------------------------------------- tokenization

def test_tokenize_lowercase_and_strip():
    assert tokenize_caption("A dog barks.", stemming=False) == ["a", "dog", "barks"]


def test_tokenize_empty():
    assert tokenize_caption("") == []
    assert tokenize_caption("  ...  ") == []


def test_tokenize_stemming():
    assert tokenize_caption("Dogs barked", stemming=True) == ["dog", "bark"]


def test_tokenize_apostrophes_keep_contractions_whole():
    assert tokenize_caption("it's a dog's day", stemming=False) == [
        "its", "a", "dogs", "day"]
    assert tokenize_caption("it’s", stemming=False) == ["its"]


def test_tokenize_punctuation_splits():
    assert tokenize_caption("rock-n-roll, loudly!", stemming=False) == [
        "rock", "n", "roll", "loudly"]


def test_tokenize_numbers_survive():
    assert tokenize_caption("2 dogs", stemming=False) == ["2", "dogs"]


# --------------------------------------------------------------------- idf

def test_idf_ubiquitous_ngram_is_zero():
    idf = build_idf([[["a", "b"]], [["a", "c"]]])
    assert idf.idf(("a",)) == 0.0


def test_idf_rare_ngram():
    idf = build_idf([[["a", "b"]], [["a", "c"]]])
    assert idf.idf(("b",)) == pytest.approx(math.log(2), abs=1e-12)
    assert idf.idf(("a", "b")) == pytest.approx(math.log(2), abs=1e-12)


def test_idf_ten_item_corpus():
    corpus = [[[f"w{i}", "shared"]] for i in range(10)]
    idf = build_idf(corpus)
    assert idf.idf(("w3",)) == pytest.approx(math.log(10), abs=1e-12)
    assert idf.idf(("shared",)) == 0.0


def test_idf_degenerate_single_item_corpus():
    idf = build_idf([[["a", "b", "c"]]])
    assert idf.idf(("a",)) == 0.0
    assert idf.idf(("a", "b", "c")) == 0.0


def test_idf_counts_items_not_references():
    # the same n-gram in two references of ONE item still has df = 1
    idf = build_idf([[["a"], ["a"]], [["b"]]])
    assert idf.idf(("a",)) == pytest.approx(math.log(2), abs=1e-12)


def test_idf_unseen_ngram_gets_full_weight():
    idf = build_idf([[["a"]], [["b"]]])
    assert idf.idf(("zz",)) == pytest.approx(math.log(2), abs=1e-12)


def test_idf_empty_corpus():
    with pytest.raises(ValueError, match="empty"):
        build_idf([])


# ----------------------------------------------------------------- cider_d

def test_identical_candidate_disjoint_corpus_scores_ten():
    item1 = [["a", "b", "c", "d", "e"]]
    item2 = [["f", "g", "h", "i", "j"]]
    idf = build_idf([item1, item2])
    score = cider_d(["a", "b", "c", "d", "e"], item1, idf)
    assert score == pytest.approx(10.0, abs=1e-9)


def test_disjoint_candidate_scores_zero():
    idf = build_idf([[["a", "b"]], [["c", "d"]]])
    assert cider_d(["x", "y"], [["a", "b"]], idf) == 0.0


def test_cider_reference_order_invariance():
    refs = [["a", "b", "c"], ["b", "c", "d"], ["a", "d"]]
    idf = build_idf([refs, [["x", "y"]]])
    cand = ["a", "b", "d"]
    base = cider_d(cand, refs, idf)
    assert cider_d(cand, list(reversed(refs)), idf) == pytest.approx(
        base, abs=1e-12)


def test_cider_empty_references():
    idf = build_idf([[["a"]]])
    with pytest.raises(ValueError, match="at least one reference"):
        cider_d(["a"], [], idf)


# Brute-force CIDEr-D oracle ------------------------------------------------

SIGMA = 6.0


def naive_ngrams(words, n):
    out = {}
    for i in range(len(words) - n + 1):
        g = tuple(words[i:i + n])
        out[g] = out.get(g, 0) + 1
    return out


def naive_cider_d(candidate, references, corpus):
    """Straight-from-the-definition CIDEr-D with candidate count clipping."""
    n_items = len(corpus)

    def df(gram):
        hits = 0
        for refs in corpus:
            if any(gram in naive_ngrams(r, len(gram)) for r in refs):
                hits += 1
        return hits

    def idf(gram):
        return math.log(n_items / max(1, df(gram)))

    total = 0.0
    for n in range(1, 5):
        per_ref = 0.0
        cand_counts = naive_ngrams(candidate, n)
        for ref in references:
            ref_counts = naive_ngrams(ref, n)
            num = 0.0
            for gram, c_count in cand_counts.items():
                r_count = ref_counts.get(gram, 0)
                w_c = c_count * idf(gram)
                w_r = r_count * idf(gram)
                num += min(w_c, w_r) * w_r
            norm_c = math.sqrt(sum((c * idf(g)) ** 2
                                   for g, c in cand_counts.items()))
            norm_r = math.sqrt(sum((c * idf(g)) ** 2
                                   for g, c in ref_counts.items()))
            sim = num / (norm_c * norm_r) if norm_c > 0 and norm_r > 0 else 0.0
            delta = len(candidate) - len(ref)
            sim *= math.exp(-delta * delta / (2 * SIGMA * SIGMA))
            per_ref += sim
        total += per_ref / len(references)
    return 10.0 * total / 4.0


def random_instance(rng, vocab):
    def sentence():
        return [rng.choice(vocab) for _ in range(rng.randint(1, 6))]

    candidate = sentence()
    references = [sentence() for _ in range(rng.randint(1, 3))]
    corpus = [references] + [[sentence() for _ in range(rng.randint(1, 2))]
                             for _ in range(rng.randint(1, 4))]
    return candidate, references, corpus


def test_cider_matches_brute_force_oracle():
    rng = random.Random(2024)
    vocab = [f"w{i}" for i in range(10)]
    for _ in range(100):
        candidate, references, corpus = random_instance(rng, vocab)
        idf = build_idf(corpus)
        got = cider_d(candidate, references, idf)
        want = naive_cider_d(candidate, references, corpus)
        assert got == pytest.approx(want, abs=1e-9)


def test_self_score_dominates_hamming_one():
    rng = random.Random(99)
    vocab = [f"w{i}" for i in range(8)]
    for _ in range(30):
        ref = [rng.choice(vocab) for _ in range(rng.randint(3, 6))]
        corpus = [[ref], [[rng.choice(vocab) for _ in range(4)]]]
        idf = build_idf(corpus)
        self_score = cider_d(list(ref), [ref], idf)
        mutated = list(ref)
        pos = rng.randrange(len(mutated))
        mutated[pos] = rng.choice([w for w in vocab if w != mutated[pos]])
        assert self_score >= cider_d(mutated, [ref], idf) - 1e-12


# ------------------------------------------------------------ normalization

def test_normalize_endpoints_and_affine():
    assert normalize_score(10.0, DEFAULT_RULES["cider"]) == 1.0
    assert normalize_score(0.0, DEFAULT_RULES["cider"]) == 0.0
    assert normalize_score(87.0, DEFAULT_RULES["llm_judge"]) == pytest.approx(
        0.87, abs=1e-12)


def test_normalize_clips():
    assert normalize_score(1.2, DEFAULT_RULES["fense"]) == 1.0
    assert normalize_score(-0.3, DEFAULT_RULES["fense"]) == 0.0


def test_normalize_without_clip_passes_through():
    rule = NormalizationRule("fense", (0.0, 1.0), clip=False)
    assert normalize_score(1.2, rule) == pytest.approx(1.2, abs=1e-12)


def test_normalization_rule_validates_range():
    with pytest.raises(ValueError, match="lo < hi"):
        NormalizationRule("cider", (1.0, 1.0))
    with pytest.raises(ValueError, match="lo < hi"):
        NormalizationRule("cider", (2.0, 1.0))


def test_default_rules_cover_every_kind():
    assert set(DEFAULT_RULES) == set(KIND_ORDER)
    assert DEFAULT_RULES["cider"].source_range == (0.0, 10.0)
    assert DEFAULT_RULES["spice"].source_range == (0.0, 1.0)
    assert DEFAULT_RULES["fense"].source_range == (0.0, 1.0)
    assert DEFAULT_RULES["clapscore_tt"].source_range == (0.0, 1.0)
    assert DEFAULT_RULES["llm_judge"].source_range == (0.0, 100.0)
    assert all(rule.clip for rule in DEFAULT_RULES.values())


def test_kind_order_is_fixed():
    assert KIND_ORDER == ("cider", "spice", "fense", "clapscore_tt",
                          "llm_judge", "synth")


# -------------------------------------------------------------- score table

def test_score_table_rejects_out_of_range():
    table = ScoreTable()
    with pytest.raises(ValueError, match="outside"):
        table.set("r1", "cider", 1.5)
    with pytest.raises(ValueError, match="outside"):
        table.set("r1", "cider", -0.1)


def test_score_table_get_and_kinds_order():
    table = ScoreTable()
    table.set("r1", "synth", 0.5)
    table.set("r1", "cider", 0.2)
    table.set("r2", "zebra", 0.9)
    assert table.get("r1", "cider") == 0.2
    assert table.get("r1", "missing") is None
    assert table.get("nope", "cider") is None
    # known kinds in canonical order, unknown kinds sorted after
    assert table.kinds() == ["cider", "synth", "zebra"]


def test_score_table_column_raises_on_gap():
    table = ScoreTable()
    table.set("r1", "cider", 0.2)
    assert table.column("cider", ["r1"]) == [0.2]
    with pytest.raises(KeyError, match="no 'cider' score for record 'r2'"):
        table.column("cider", ["r1", "r2"])


# ------------------------------------------------------------------ ingest

def write_scores(tmp_path, text, name="scores.tsv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_ingest_identity_range(tmp_path):
    path = write_scores(tmp_path, "id1\t0.5\n")
    table, report = ingest_external_scores(
        path, "fense", DEFAULT_RULES["fense"], known_ids=["id1"])
    assert table.get("id1", "fense") == 0.5
    assert report.matched == 1
    assert report.orphans == []
    assert report.missing == []


def test_ingest_normalizes(tmp_path):
    path = write_scores(tmp_path, "id1\t87\nid2\t101\n")
    table, _ = ingest_external_scores(
        path, "llm_judge", DEFAULT_RULES["llm_judge"],
        known_ids=["id1", "id2"])
    assert table.get("id1", "llm_judge") == pytest.approx(0.87, abs=1e-12)
    assert table.get("id2", "llm_judge") == 1.0  # clipped


def test_ingest_reports_orphans_and_missing(tmp_path):
    path = write_scores(tmp_path, "known\t1.0\nstray\t2.0\n")
    table, report = ingest_external_scores(
        path, "cider", DEFAULT_RULES["cider"],
        known_ids=["known", "absent-a", "absent-b"])
    assert report.matched == 1
    assert report.orphans == ["stray"]
    assert report.missing == ["absent-a", "absent-b"]
    assert table.get("stray", "cider") is None


def test_ingest_without_known_ids_accepts_everything(tmp_path):
    path = write_scores(tmp_path, "x\t5.0\ny\t2.5\n")
    table, report = ingest_external_scores(path, "cider",
                                           DEFAULT_RULES["cider"])
    assert report.matched == 2
    assert report.orphans == []
    assert table.get("y", "cider") == 0.25


def test_ingest_blank_lines_skipped(tmp_path):
    path = write_scores(tmp_path, "a\t1.0\n\nb\t2.0\n")
    _, report = ingest_external_scores(path, "cider", DEFAULT_RULES["cider"])
    assert report.matched == 2


def test_ingest_malformed_line_cites_position(tmp_path):
    path = write_scores(tmp_path, "a\t1.0\nb 2.0\n")
    with pytest.raises(DataFormatError, match=r"scores\.tsv:2: expected"):
        ingest_external_scores(path, "cider", DEFAULT_RULES["cider"])


def test_ingest_unparseable_score(tmp_path):
    path = write_scores(tmp_path, "a\thigh\n")
    with pytest.raises(DataFormatError, match="unparseable score 'high'"):
        ingest_external_scores(path, "cider", DEFAULT_RULES["cider"])


def test_ingest_non_finite_names_id(tmp_path):
    path = write_scores(tmp_path, "a\tinf\n")
    with pytest.raises(DataFormatError, match="non-finite score for id 'a'"):
        ingest_external_scores(path, "cider", DEFAULT_RULES["cider"])


def test_ingest_report_shape():
    report = IngestReport(kind="fense")
    assert report.matched == 0
    assert report.orphans == []
    assert report.missing == []
