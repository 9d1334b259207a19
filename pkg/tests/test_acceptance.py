"""Acceptance gate: end-to-end behavioral guarantees at stated tolerances.

Each test covers one numbered criterion and prints a single PASS line with
the measured values, so a -s run doubles as an acceptance report.
"""

import json
import math
import os
import random
import time

import numpy as np

from capcal.calibration import (
    brier,
    correlation_matrix,
    ece,
    sweep_temperature,
)
from capcal.cli import main
from capcal.confidence import POOLED_METRICS, PooledBatch
from capcal.correctness import build_idf, cider_d
from capcal.rng import Xoshiro256StarStar
from capcal.semantic_entropy import (
    ClusteringConfig,
    cluster_by_similarity,
    semantic_entropy,
)
from capcal.synthgen import SynthConfig, generate_dataset, sample_topk

from test_correctness import naive_cider_d

CONTENT_TAGS = ("NOUN", "VERB", "ADJ")
GRID = [round(0.1 * i, 10) for i in range(1, 21)]


def _manual_pooled(rec, mode):
    probs = [math.exp(step.candidates[step.chosen].logprob)
             for step in rec.steps]
    if mode in ("sam", "sgm"):
        kept = [p for p, tag in zip(probs, rec.word_pos)
                if tag in CONTENT_TAGS]
        probs = kept or probs  # empty content mask falls back to all steps
    if mode in ("am", "sam"):
        return sum(probs) / len(probs)
    return math.exp(sum(math.log(p) for p in probs) / len(probs))


def test_criterion_1_geometric_never_exceeds_arithmetic():
    started = time.monotonic()
    data = generate_dataset(SynthConfig(n_records=1000, seed=101))
    batch = PooledBatch.from_records(data.records)
    worst = -math.inf
    for t in GRID:
        am = batch.pooled(t, "am")
        gm = batch.pooled(t, "gm")
        sam = batch.pooled(t, "sam")
        sgm = batch.pooled(t, "sgm")
        worst = max(worst, float(np.max(gm - am)), float(np.max(sgm - sam)))
        assert np.all(gm <= am + 1e-12)
        assert np.all(sgm <= sam + 1e-12)
    elapsed = time.monotonic() - started
    assert elapsed < 10.0
    print(f"PASS criterion 1: gm<=am and sgm<=sam on 1000 records x "
          f"{len(GRID)} temperatures (max excess {worst:.3g}, "
          f"{elapsed:.2f}s)")


def test_criterion_2_unit_temperature_matches_stored_logprobs():
    data = generate_dataset(SynthConfig(n_records=1000, seed=101))
    batch = PooledBatch.from_records(data.records)
    worst = 0.0
    for mode in POOLED_METRICS:
        got = batch.pooled(1.0, mode)
        want = np.array([_manual_pooled(rec, mode) for rec in data.records])
        worst = max(worst, float(np.max(np.abs(got - want))))
    assert worst <= 1e-12
    print(f"PASS criterion 2: T=1 pooling equals direct stored-logprob "
          f"pooling for {'/'.join(POOLED_METRICS)} "
          f"(max deviation {worst:.3g})")


def test_criterion_3_sweep_recovers_sharpening_and_cuts_brier():
    started = time.monotonic()
    sharpening = 2.0
    val = generate_dataset(SynthConfig(n_records=10_000, seed=301,
                                       sharpening=sharpening))
    ev = generate_dataset(SynthConfig(n_records=10_000, seed=302,
                                      sharpening=sharpening))
    val_batch = PooledBatch.from_records(val.records)
    val_corr = [val.scores.get(rec.id, "synth") for rec in val.records]
    result = sweep_temperature(val_batch, val_corr, "am")
    t_star = result.optimal_temperature
    assert t_star in (1.8, 1.9, 2.0)

    ev_batch = PooledBatch.from_records(ev.records)
    ev_corr = [ev.scores.get(rec.id, "synth") for rec in ev.records]
    brier_raw = brier(ev_batch.pooled(1.0, "am"), ev_corr)
    brier_ts = brier(ev_batch.pooled(t_star, "am"), ev_corr)
    ratio = brier_ts / brier_raw
    elapsed = time.monotonic() - started
    assert ratio <= 0.60
    assert elapsed < 60.0
    print(f"PASS criterion 3: T*={t_star} on 10k validation records; "
          f"evaluation Brier {brier_raw:.4f} -> {brier_ts:.4f} "
          f"(ratio {ratio:.3f} <= 0.60, {elapsed:.1f}s)")


def test_criterion_4_unsharpened_data_is_calibrated():
    started = time.monotonic()
    data = generate_dataset(SynthConfig(n_records=10_000, seed=401,
                                        sharpening=1.0))
    batch = PooledBatch.from_records(data.records)
    conf = batch.pooled(1.0, "am")
    corr = [data.scores.get(rec.id, "synth") for rec in data.records]

    got_ece = ece(conf, corr, 10)
    assert got_ece <= 0.03

    got_brier = brier(conf, corr)
    analytic = np.mean([
        sum(p * (1.0 - p) for p in (
            math.exp(s.candidates[s.chosen].logprob) for s in rec.steps))
        / len(rec.steps) ** 2
        for rec in data.records])
    gap = abs(got_brier - analytic)
    elapsed = time.monotonic() - started
    assert gap <= 0.01
    assert elapsed < 30.0
    print(f"PASS criterion 4: 10k unsharpened records, ECE {got_ece:.4f} "
          f"<= 0.03, |Brier {got_brier:.4f} - analytic {analytic:.4f}| = "
          f"{gap:.4f} <= 0.01 ({elapsed:.1f}s)")


def test_criterion_5_ngram_overlap_matches_brute_force():
    rng = random.Random(5050)
    vocab = [f"w{i}" for i in range(10)]
    worst = 0.0
    for _ in range(500):
        def sentence():
            return [rng.choice(vocab)
                    for _ in range(rng.randint(1, 6))]
        candidate = sentence()
        references = [sentence() for _ in range(rng.randint(1, 3))]
        corpus = [references] + [[sentence()]
                                 for _ in range(rng.randint(1, 4))]
        idf = build_idf(corpus)
        fast = cider_d(candidate, references, idf)
        slow = naive_cider_d(candidate, references, corpus)
        worst = max(worst, abs(fast - slow))
        assert abs(fast - slow) <= 1e-9

    # a candidate identical to the sole reference of an otherwise
    # disjoint two-item corpus earns the full score
    ref = ["a", "dog", "barks", "very", "loudly"]
    corpus = [[ref], [["v", "w", "x", "y", "z"]]]
    idf = build_idf(corpus)
    top = cider_d(list(ref), [ref], idf)
    assert abs(top - 10.0) <= 1e-9
    print(f"PASS criterion 5: n-gram overlap score matches brute-force "
          f"recomputation on 500 random instances (max gap {worst:.2g}); "
          f"identical candidate scores {top:.6f}")


def test_criterion_6_entropy_bounds_and_worked_example():
    rng = np.random.default_rng(606)
    cfg = ClusteringConfig()
    worst_lo, worst_hi = math.inf, -math.inf
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        embs = rng.normal(size=(n, 8))
        embs /= np.linalg.norm(embs, axis=1, keepdims=True)
        result = semantic_entropy(cluster_by_similarity(embs, cfg), cfg)
        worst_lo = min(worst_lo, result.entropy)
        worst_hi = max(worst_hi, result.entropy - math.log(n))
        assert 0.0 <= result.entropy <= math.log(n) + 1e-12

    # cluster sizes {2,1,1}: entropy 1.03972 nats, confidence 0.25
    axes = np.eye(3)
    embs = np.array([axes[0], axes[0], axes[1], axes[2]])
    result = semantic_entropy(cluster_by_similarity(embs, cfg), cfg)
    assert abs(result.entropy - 1.03972) <= 1e-5
    assert abs(result.confidence - 0.25) <= 1e-5
    print(f"PASS criterion 6: entropy within [0, ln N] on 1000 random "
          f"sample sets (min {worst_lo:.3g}, max excess {worst_hi:.3g}); "
          f"sizes 2/1/1 give entropy {result.entropy:.5f}, "
          f"confidence {result.confidence:.2f}")


def test_criterion_7_sweep_argmin_is_reproducible():
    rng = random.Random(707)
    checked = 0
    for i in range(50):
        cfg = SynthConfig(n_records=rng.randint(5, 30),
                          seed=1000 + i,
                          sharpening=math.exp(rng.uniform(-1.0, 1.0)),
                          max_len=rng.randint(3, 10))
        data = generate_dataset(cfg)
        batch = PooledBatch.from_records(data.records)
        corr = [data.latent[rec.id] for rec in data.records]
        metric = ("am", "gm", "sam", "sgm")[i % 4]
        result = sweep_temperature(batch, corr, metric)

        best = min(
            (float(np.mean((batch.pooled(t, metric) - np.asarray(corr))
                           ** 2)), abs(t - 1.0), t)
            for t in GRID)
        assert result.optimal_temperature == best[2]
        assert result.optimal_brier == best[0]
        checked += 1
    print(f"PASS criterion 7: sweep optimum equals independently "
          f"recomputed argmin with tie-breaks on {checked} random "
          f"configurations (exact equality)")


def test_criterion_8_correlation_matrix_properties():
    rng = np.random.default_rng(808)
    x = rng.uniform(size=200)
    cols = {
        "cider": x,
        "fense": rng.uniform(size=200),
        "llm_judge": 2.0 * x + 3.0,
        "synth": rng.uniform(size=200),
    }
    names, mat = correlation_matrix(cols)
    n = len(names)
    for i in range(n):
        assert abs(mat[i, i] - 1.0) <= 1e-12
        for j in range(n):
            assert mat[i, j] == mat[j, i]
    linear = mat[names.index("cider"), names.index("llm_judge")]
    assert abs(linear - 1.0) <= 1e-12
    print(f"PASS criterion 8: correlation matrix exactly symmetric with "
          f"unit diagonal; corr(x, 2x+3) = {linear:.15f}")


def test_criterion_9_topk_sampler_frequencies():
    logits = [2.0, 1.0, 0.5, -1.0]
    exps = [math.exp(x) for x in logits[:3]]
    want = [e / sum(exps) for e in exps]
    rng = Xoshiro256StarStar(909)
    n = 100_000
    counts = [0, 0, 0, 0]
    for _ in range(n):
        counts[sample_topk(logits, 3, rng)] += 1
    assert counts[3] == 0
    worst = max(abs(counts[i] / n - want[i]) for i in range(3))
    assert worst < 0.01
    print(f"PASS criterion 9: top-3 sampler frequencies within "
          f"{worst:.4f} < 0.01 of the renormalized softmax over "
          f"{n} draws; excluded token never drawn")


def test_criterion_10_reruns_are_byte_identical(tmp_path):
    roots = [tmp_path / "run1", tmp_path / "run2"]
    args_per_cmd = [
        ["synth", "--out", "data", "--seed", "5", "--n-records", "12",
         "--sharpening", "1.5"],
        ["score", "--out", "scored",
         "--evaluation-manifest", os.path.join("data", "manifest.json")],
        ["calibrate", "--out", "cal",
         "--evaluation-manifest", os.path.join("data", "manifest.json")],
    ]
    cwd = os.getcwd()
    try:
        for root in roots:
            root.mkdir()
            os.chdir(root)
            for argv in args_per_cmd:
                assert main(list(argv)) == 0
    finally:
        os.chdir(cwd)

    compared = 0
    for sub in ("data", "scored", "cal"):
        names = sorted(p.name for p in (roots[0] / sub).iterdir())
        assert names == sorted(p.name for p in (roots[1] / sub).iterdir())
        for name in names:
            a = (roots[0] / sub / name).read_bytes()
            b = (roots[1] / sub / name).read_bytes()
            assert a == b, f"{sub}/{name} differs between runs"
            compared += 1
    print(f"PASS criterion 10: two identical pipeline runs in separate "
          f"directories produced byte-identical outputs "
          f"({compared} files compared)")


def test_criterion_11_pipeline_runs_fully_offline(tmp_path, monkeypatch):
    import socket

    def refuse(*args, **kwargs):
        raise AssertionError("network access attempted")

    monkeypatch.setattr(socket, "socket", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)

    data = tmp_path / "data"
    assert main(["synth", "--out", str(data), "--seed", "6",
                 "--n-records", "10", "--sharpening", "2.0",
                 "--split", "validation"]) == 0
    assert main(["validate", "--manifest",
                 str(data / "manifest.json")]) == 0
    assert main(["score", "--out", str(tmp_path / "scored"),
                 "--evaluation-manifest", str(data / "manifest.json")]) == 0
    assert main(["sweep", "--out", str(tmp_path / "swept"),
                 "--validation-manifest", str(data / "manifest.json")]) == 0
    assert main(["calibrate", "--out", str(tmp_path / "cal"),
                 "--evaluation-manifest", str(data / "manifest.json"),
                 "--validation-manifest", str(data / "manifest.json")]) == 0
    report = json.loads(
        (tmp_path / "cal" / "report.json").read_text(encoding="utf-8"))
    assert report["n_records"] == 10
    print("PASS criterion 11: synth/validate/score/sweep/calibrate all "
          "succeeded with socket creation disabled")
