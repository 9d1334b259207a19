"""Command-line interface: validate, synth, score, sweep, calibrate.

Every command is deterministic given its configuration: output files carry
no timestamps, dictionaries are written in fixed orders, and floats use a
fixed format, so rerunning a command produces byte-identical files.

Configuration precedence is flags > config file > defaults; the merged
effective configuration is echoed into every output directory as
``effective_config.json`` for auditability.

Exit codes: 0 success, 1 data violation, 2 I/O or configuration error,
3 network error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .calibration import (
    DEFAULT_N_BINS,
    TemperatureGrid,
    calibrate_eval,
    correlation_matrix,
    reliability_bins,
    sweep_temperature,
)
from .confidence import METRIC_ORDER, POOLED_METRICS, PooledBatch, confidences_for_record
from .correctness import (
    DEFAULT_RULES,
    KIND_ORDER,
    NormalizationRule,
    ScoreTable,
    build_idf,
    cider_d,
    ingest_external_scores,
    normalize_score,
    tokenize_caption,
)
from .errors import CapcalError, DataFormatError, NetworkError
from .postag import default_lexicon
from .records import (
    DatasetManifest,
    load_embedding_store,
    load_manifest,
    read_records,
    validate_record,
    write_embedding_store,
    write_manifest,
    write_records,
)
from .semantic_entropy import ClusteringConfig
from .similarity import SimilarityConfig, clapscore_tt
from .svgfig import heatmap, histogram, line_chart, reliability_diagram
from .synthgen import DEFAULT_VOCAB, SynthConfig, generate_dataset

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_NETWORK = 3

logger = logging.getLogger("capcal.cli")

# every configurable field with its default; config files use these keys
DEFAULTS = {
    "evaluation_manifest": None,
    "validation_manifest": None,
    "metrics": list(METRIC_ORDER),
    "kinds": None,  # None = every kind that has a source for this dataset
    "at_mapping": "clamp01",
    "tt_aggregation": "mean",
    "tau": 0.7,
    "weighting": "count",
    "cluster_mapping": "clamp01",
    "t_start": 0.1,
    "t_stop": 2.0,
    "t_step": 0.1,
    "n_bins": DEFAULT_N_BINS,
    "norm": {},  # kind -> [lo, hi] source-range overrides
    "temperature": 1.0,
    "stemming": True,
    "seed": 0,
    "n_records": 100,
    "sharpening": 1.0,
    "max_len": 12,
    "n_samples_per_input": 5,
    "n_references": 5,
    "embed_dim": 64,
    "split": "evaluation",
    "name": "synth",
    "vocab": [list(pair) for pair in DEFAULT_VOCAB],
    "out": None,
}


def _g17(x: float) -> str:
    return f"{float(x):.17g}"


class CliError(Exception):
    """Fatal command error carrying its exit code."""

    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _parse_metrics(text: str) -> list[str]:
    return [m.strip() for m in text.split(",") if m.strip()]


def _parse_norm_flag(entries) -> dict:
    out = {}
    for entry in entries or []:
        try:
            kind, rng = entry.split("=", 1)
            lo_text, hi_text = rng.split(":", 1)
            out[kind.strip()] = [float(lo_text), float(hi_text)]
        except ValueError:
            raise CliError(f"bad --norm entry {entry!r}; expected "
                           "KIND=LO:HI") from None
    return out


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"config file is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise CliError("config file must hold a single JSON object")
    unknown = sorted(set(obj) - set(DEFAULTS))
    if unknown:
        raise CliError(f"unknown config file keys: {', '.join(unknown)}")
    return obj


def _merge_config(args, fields) -> dict:
    """flags > config file > defaults, for the listed fields only."""
    file_cfg = _load_config_file(args.config) if args.config else {}
    effective = {}
    for name in fields:
        flag = getattr(args, name, None)
        if flag is not None:
            effective[name] = flag
        elif name in file_cfg:
            effective[name] = file_cfg[name]
        else:
            effective[name] = DEFAULTS[name]
    return effective


def _require(effective: dict, field: str) -> str:
    value = effective.get(field)
    if not value:
        flag = "--" + field.replace("_", "-")
        raise CliError(f"{field} is required; pass {flag} or set it in the "
                       "config file")
    return value


def _check_metrics(metrics) -> list[str]:
    metrics = list(metrics)
    if not metrics:
        raise CliError("at least one confidence metric is required")
    unknown = [m for m in metrics if m not in METRIC_ORDER]
    if unknown:
        raise CliError(f"unknown metrics: {', '.join(unknown)}; valid: "
                       f"{', '.join(METRIC_ORDER)}")
    return [m for m in METRIC_ORDER if m in metrics]


def _ensure_out(effective: dict) -> str:
    out = _require(effective, "out")
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory: {exc}")
    return out


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _echo_config(out: str, command: str, effective: dict) -> None:
    obj = {"command": command, "version": __version__}
    obj.update(effective)
    _write_text(os.path.join(out, "effective_config.json"),
                json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_dataset(manifest_path: str):
    manifest = load_manifest(manifest_path)
    recs = list(read_records(manifest))
    store = load_embedding_store(manifest.embeddings_path)
    return manifest, recs, store


def _norm_rules(effective: dict) -> dict:
    rules = dict(DEFAULT_RULES)
    for kind, rng in (effective.get("norm") or {}).items():
        try:
            lo, hi = float(rng[0]), float(rng[1])
        except (TypeError, ValueError, IndexError):
            raise CliError(f"bad norm range for {kind!r}: {rng!r}") from None
        rules[kind] = NormalizationRule(kind, (lo, hi))
    return rules


def _available_kinds(manifest, recs, store) -> list[str]:
    present = {"cider"}
    if all(r.reference_embedding_refs for r in recs) and all(
            ref in store for r in recs
            for ref in (r.caption_embedding_ref, *r.reference_embedding_refs)):
        present.add("clapscore_tt")
    present.update(manifest.external_scores_paths)
    for rec in recs:
        present.update(rec.external_scores)
    ordered = [k for k in KIND_ORDER if k in present]
    return ordered + sorted(present - set(ordered))


def _assemble_correctness(manifest, recs, store, effective,
                          sim_cfg: SimilarityConfig):
    """ScoreTable with one column per requested correctness kind.

    cider and clapscore_tt are computed natively; other kinds come from
    the manifest's score files or from scores inlined on the records.
    """
    rules = _norm_rules(effective)
    kinds = effective.get("kinds")
    if kinds is None:
        kinds = _available_kinds(manifest, recs, store)
    if not kinds:
        raise CliError("at least one correctness kind is required")
    known_ids = [rec.id for rec in recs]
    inline_kinds = set()
    for rec in recs:
        inline_kinds.update(rec.external_scores)

    table = ScoreTable()
    for kind in kinds:
        rule = rules.get(kind)
        if rule is None:
            raise CliError(f"no normalization rule for kind {kind!r}; "
                           f"pass --norm {kind}=LO:HI")
        if kind == "cider":
            corpus = [[tokenize_caption(ref, effective["stemming"])
                       for ref in rec.references] for rec in recs]
            idf = build_idf(corpus)
            for rec, refs in zip(recs, corpus):
                raw = cider_d(
                    tokenize_caption(rec.caption_text, effective["stemming"]),
                    refs, idf)
                table.set(rec.id, kind, normalize_score(raw, rule))
        elif kind == "clapscore_tt":
            for rec in recs:
                if not rec.reference_embedding_refs:
                    raise CliError(f"record {rec.id}: no reference "
                                   "embeddings for clapscore_tt", EXIT_DATA)
                value = clapscore_tt(
                    store.get(rec.caption_embedding_ref),
                    [store.get(ref) for ref in rec.reference_embedding_refs],
                    sim_cfg)
                table.set(rec.id, kind, normalize_score(value, rule))
        elif kind in manifest.external_scores_paths:
            part, report = ingest_external_scores(
                manifest.external_scores_paths[kind], kind, rule, known_ids)
            if report.orphans:
                logger.warning("%s: %d orphan score rows ignored",
                               kind, len(report.orphans))
            for rid, per_kind in part.scores.items():
                table.set(rid, kind, per_kind[kind])
        elif kind in inline_kinds:
            for rec in recs:
                if kind in rec.external_scores:
                    table.set(rec.id, kind,
                              normalize_score(rec.external_scores[kind],
                                              rule))
        else:
            raise CliError(f"no source for correctness kind {kind!r}: not "
                           "computable natively, not in the manifest's "
                           "score files, not on the records")
    return table, kinds


def _similarity_config(effective: dict) -> SimilarityConfig:
    return SimilarityConfig(at_mapping=effective["at_mapping"],
                            tt_reference_aggregation=effective["tt_aggregation"])


def _clustering_config(effective: dict) -> ClusteringConfig:
    return ClusteringConfig(tau=effective["tau"],
                            weighting=effective["weighting"],
                            mapping=effective["cluster_mapping"])


def _grid(effective: dict) -> TemperatureGrid:
    return TemperatureGrid(start=effective["t_start"],
                           stop=effective["t_stop"],
                           step=effective["t_step"])


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    manifest = load_manifest(args.manifest)
    recs = list(read_records(manifest))
    store = load_embedding_store(manifest.embeddings_path)
    bad = 0
    for rec in recs:
        report = validate_record(rec, store)
        if report.violations:
            bad += 1
            for violation in report.violations:
                print(f"{rec.id}: {violation}")
    print(f"checked {len(recs)} records: "
          f"{bad} with violations" if bad else
          f"checked {len(recs)} records: all valid")
    return EXIT_DATA if bad else EXIT_OK


_SYNTH_FIELDS = ("out", "seed", "n_records", "sharpening", "max_len",
                 "n_samples_per_input", "n_references", "embed_dim",
                 "split", "name", "vocab")


def cmd_synth(args) -> int:
    effective = _merge_config(args, _SYNTH_FIELDS)
    out = _ensure_out(effective)
    try:
        cfg = SynthConfig(vocab=tuple(tuple(p) for p in effective["vocab"]),
                          max_len=effective["max_len"],
                          sharpening=effective["sharpening"],
                          n_samples_per_input=effective["n_samples_per_input"],
                          seed=effective["seed"],
                          n_records=effective["n_records"],
                          n_references=effective["n_references"],
                          embed_dim=effective["embed_dim"])
    except (ValueError, TypeError) as exc:
        raise CliError(f"bad synth configuration: {exc}")
    dataset = generate_dataset(cfg)

    write_records(os.path.join(out, "records.jsonl"), dataset.records)
    write_embedding_store(os.path.join(out, "embeddings.jsonl"),
                          dataset.embedding_rows)
    score_lines = [f"{rec.id}\t{_g17(dataset.scores.get(rec.id, 'synth'))}\n"
                   for rec in dataset.records]
    _write_text(os.path.join(out, "scores_synth.tsv"), "".join(score_lines))
    latent_lines = ["record_id\tq\n"]
    latent_lines += [f"{rec.id}\t{_g17(dataset.latent[rec.id])}\n"
                     for rec in dataset.records]
    _write_text(os.path.join(out, "latent_quality.tsv"),
                "".join(latent_lines))
    write_manifest(os.path.join(out, "manifest.json"), DatasetManifest(
        name=effective["name"], split=effective["split"],
        records_path="records.jsonl", embeddings_path="embeddings.jsonl",
        external_scores_paths={"synth": "scores_synth.tsv"}))
    _echo_config(out, "synth", effective)
    print(f"wrote {len(dataset.records)} records to {out}")
    return EXIT_OK


_SCORE_FIELDS = ("out", "evaluation_manifest", "metrics", "kinds",
                 "at_mapping", "tt_aggregation", "tau", "weighting",
                 "cluster_mapping", "norm", "temperature", "stemming")


def cmd_score(args) -> int:
    effective = _merge_config(args, _SCORE_FIELDS)
    out = _ensure_out(effective)
    manifest_path = _require(effective, "evaluation_manifest")
    manifest, recs, store = _load_dataset(manifest_path)
    metrics = _check_metrics(effective["metrics"])
    effective["metrics"] = metrics
    sim_cfg = _similarity_config(effective)
    clustering_cfg = _clustering_config(effective)
    lexicon = default_lexicon()
    temperature = float(effective["temperature"])

    header = ["record_id", "temperature", *metrics, "flags"]
    lines = ["\t".join(header) + "\n"]
    for rec in recs:
        vec = confidences_for_record(rec, store, temperature, metrics,
                                     lexicon=lexicon, sim_cfg=sim_cfg,
                                     clustering_cfg=clustering_cfg)
        cells = [rec.id, _g17(temperature)]
        cells += [_g17(vec.values[m]) if m in vec.values else ""
                  for m in metrics]
        cells.append(";".join(sorted(vec.flags)))
        lines.append("\t".join(cells) + "\n")
    _write_text(os.path.join(out, "confidences.tsv"), "".join(lines))

    table, kinds = _assemble_correctness(manifest, recs, store, effective,
                                         sim_cfg)
    effective["kinds"] = kinds
    lines = ["\t".join(["record_id", *kinds]) + "\n"]
    for rec in recs:
        cells = [rec.id]
        for kind in kinds:
            value = table.get(rec.id, kind)
            cells.append("" if value is None else _g17(value))
        lines.append("\t".join(cells) + "\n")
    _write_text(os.path.join(out, "correctness.tsv"), "".join(lines))

    _echo_config(out, "score", effective)
    print(f"scored {len(recs)} records ({len(metrics)} metrics, "
          f"{len(kinds)} correctness kinds) into {out}")
    return EXIT_OK


_SWEEP_FIELDS = ("out", "validation_manifest", "metrics", "kinds",
                 "at_mapping", "tt_aggregation", "norm", "stemming",
                 "t_start", "t_stop", "t_step")


def cmd_sweep(args) -> int:
    effective = _merge_config(args, _SWEEP_FIELDS)
    out = _ensure_out(effective)
    manifest_path = _require(effective, "validation_manifest")
    manifest, recs, store = _load_dataset(manifest_path)
    metrics = _check_metrics(effective["metrics"])
    pooled = [m for m in metrics if m in POOLED_METRICS]
    skipped = [m for m in metrics if m not in POOLED_METRICS]
    if skipped:
        logger.warning("temperature does not apply to %s; sweeping %s",
                       ", ".join(skipped), ", ".join(pooled))
    if not pooled:
        raise CliError("no pooled metrics requested; temperature sweeps "
                       f"apply to {', '.join(POOLED_METRICS)}")
    effective["metrics"] = pooled
    sim_cfg = _similarity_config(effective)
    table, kinds = _assemble_correctness(manifest, recs, store, effective,
                                         sim_cfg)
    effective["kinds"] = kinds
    grid = _grid(effective)
    record_ids = [rec.id for rec in recs]
    batch = PooledBatch.from_records(recs, default_lexicon())

    curve_lines = ["metric\tkind\ttemperature\tbrier\n"]
    optimum_lines = ["metric\tkind\toptimal_temperature\toptimal_brier\n"]
    for metric in pooled:
        for kind in kinds:
            corr = table.column(kind, record_ids)
            result = sweep_temperature(batch, corr, metric, grid, kind)
            for t, b in zip(result.temperatures, result.briers):
                curve_lines.append(
                    f"{metric}\t{kind}\t{_g17(t)}\t{_g17(b)}\n")
            optimum_lines.append(
                f"{metric}\t{kind}\t{_g17(result.optimal_temperature)}"
                f"\t{_g17(result.optimal_brier)}\n")
            points = list(zip(result.temperatures, result.briers))
            svg = line_chart(
                [(f"{metric} vs {kind}", points)],
                f"Brier score vs temperature: {metric} vs {kind}",
                "temperature", "Brier score",
                marker=(result.optimal_temperature, result.optimal_brier,
                        f"T*={result.optimal_temperature:g}"))
            _write_text(os.path.join(out, f"sweep_{metric}_{kind}.svg"), svg)
    _write_text(os.path.join(out, "curves.tsv"), "".join(curve_lines))
    _write_text(os.path.join(out, "optimal_temperatures.tsv"),
                "".join(optimum_lines))
    _echo_config(out, "sweep", effective)
    print(f"swept {len(pooled)} metrics x {len(kinds)} kinds over "
          f"{len(grid.temperatures())} temperatures into {out}")
    return EXIT_OK


_CALIBRATE_FIELDS = ("out", "evaluation_manifest", "validation_manifest",
                     "metrics", "kinds", "at_mapping", "tt_aggregation",
                     "tau", "weighting", "cluster_mapping", "norm",
                     "stemming", "t_start", "t_stop", "t_step", "n_bins")


def _confidence_columns(recs, store, metrics, sim_cfg, clustering_cfg,
                        batch):
    """Per-metric confidence columns at T=1, aligned with recs order."""
    columns = {}
    for metric in metrics:
        if metric in POOLED_METRICS:
            columns[metric] = batch.pooled(1.0, metric)
    direct = [m for m in metrics if m not in POOLED_METRICS]
    if direct:
        lexicon = default_lexicon()
        rows = []
        for rec in recs:
            vec = confidences_for_record(rec, store, 1.0, direct,
                                         lexicon=lexicon, sim_cfg=sim_cfg,
                                         clustering_cfg=clustering_cfg)
            rows.append(vec)
        for metric in direct:
            missing = [rec.id for rec, vec in zip(recs, rows)
                       if metric not in vec.values]
            if missing:
                raise CliError(
                    f"{metric} unavailable for {len(missing)} record(s), "
                    f"first: {missing[0]}", EXIT_DATA)
            columns[metric] = np.array([vec.values[metric] for vec in rows])
    return columns


def _bin_rows(bin_table):
    rows = []
    for b in bin_table.bins:
        rows.append((b.lo, b.hi, b.count, b.mean_confidence,
                     b.mean_correctness))
    return rows


def _bin_table_obj(bin_table):
    return {
        "n_bins": bin_table.n_bins,
        "n_samples": bin_table.n_samples,
        "bins": [{
            "lo": b.lo, "hi": b.hi, "count": b.count,
            "mean_confidence": b.mean_confidence,
            "mean_correctness": b.mean_correctness,
        } for b in bin_table.bins],
    }


def _report_obj(report):
    return {
        "dataset": report.dataset,
        "split": report.split,
        "n_records": report.n_records,
        "n_bins": report.n_bins,
        "metrics": report.metrics,
        "kinds": report.kinds,
        "avg_without_ts": report.avg_without_ts,
        "avg_with_ts": report.avg_with_ts,
        "config_echo": report.config_echo,
        "pairs": [{
            "metric": p.metric,
            "kind": p.kind,
            "brier": p.brier,
            "ece": p.ece,
            "pearson": p.pearson,
            "optimal_temperature": p.optimal_temperature,
            "brier_ts": p.brier_ts,
            "ece_ts": p.ece_ts,
            "bin_table": _bin_table_obj(p.bin_table),
            "bin_table_ts": _bin_table_obj(p.bin_table_ts),
        } for p in report.pairs],
    }


def _metric_kind_table(metrics, kinds, cell, extra_cols=(), extra=None):
    lines = ["\t".join(["metric", *kinds, *extra_cols]) + "\n"]
    for metric in metrics:
        cells = [metric] + [_g17(cell(metric, kind)) for kind in kinds]
        if extra is not None:
            cells += [_g17(v) for v in extra(metric)]
        lines.append("\t".join(cells) + "\n")
    return "".join(lines)


def cmd_calibrate(args) -> int:
    effective = _merge_config(args, _CALIBRATE_FIELDS)
    out = _ensure_out(effective)
    eval_path = _require(effective, "evaluation_manifest")
    manifest, recs, store = _load_dataset(eval_path)
    metrics = _check_metrics(effective["metrics"])
    effective["metrics"] = metrics
    n_bins = int(effective["n_bins"])
    sim_cfg = _similarity_config(effective)
    clustering_cfg = _clustering_config(effective)
    table, kinds = _assemble_correctness(manifest, recs, store, effective,
                                         sim_cfg)
    effective["kinds"] = kinds
    record_ids = [rec.id for rec in recs]
    corr_columns = {}
    for kind in kinds:
        try:
            corr_columns[kind] = np.array(table.column(kind, record_ids))
        except KeyError as exc:
            raise CliError(str(exc), EXIT_DATA) from None

    batch = PooledBatch.from_records(recs, default_lexicon())
    conf_at_t1 = _confidence_columns(recs, store, metrics, sim_cfg,
                                     clustering_cfg, batch)

    chosen_temperatures = {}
    conf_at_ts = {}
    with_ts = bool(effective.get("validation_manifest"))
    if with_ts:
        val_manifest, val_recs, val_store = _load_dataset(
            effective["validation_manifest"])
        val_table, _ = _assemble_correctness(val_manifest, val_recs,
                                             val_store, effective, sim_cfg)
        val_ids = [rec.id for rec in val_recs]
        val_batch = PooledBatch.from_records(val_recs, default_lexicon())
        grid = _grid(effective)
        for metric in metrics:
            if metric not in POOLED_METRICS:
                continue
            for kind in kinds:
                try:
                    val_corr = val_table.column(kind, val_ids)
                except KeyError as exc:
                    raise CliError(f"validation split: {exc}",
                                   EXIT_DATA) from None
                result = sweep_temperature(val_batch, val_corr, metric,
                                           grid, kind)
                chosen_temperatures[(metric, kind)] = \
                    result.optimal_temperature
                conf_at_ts[(metric, kind)] = batch.pooled(
                    result.optimal_temperature, metric)

    report = calibrate_eval(conf_at_t1, conf_at_ts, corr_columns,
                            chosen_temperatures, n_bins,
                            dataset=manifest.name, split=manifest.split,
                            config_echo=effective)

    _write_text(os.path.join(out, "report.json"),
                json.dumps(_report_obj(report), indent=2, sort_keys=True)
                + "\n")
    _write_text(os.path.join(out, "table_brier.tsv"), _metric_kind_table(
        metrics, kinds, lambda m, k: report.pair(m, k).brier))
    _write_text(os.path.join(out, "table_ece.tsv"), _metric_kind_table(
        metrics, kinds, lambda m, k: report.pair(m, k).ece))
    if with_ts:
        _write_text(os.path.join(out, "table_ts.tsv"), _metric_kind_table(
            metrics, kinds, lambda m, k: report.pair(m, k).brier_ts,
            extra_cols=("avg_without_ts", "avg_with_ts"),
            extra=lambda m: (report.avg_without_ts[m],
                             report.avg_with_ts[m])))

    names, matrix = correlation_matrix(
        {kind: corr_columns[kind] for kind in kinds})
    lines = ["\t".join(["kind", *names]) + "\n"]
    for name, row in zip(names, matrix):
        lines.append("\t".join([name, *(_g17(v) for v in row)]) + "\n")
    _write_text(os.path.join(out, "correlation_matrix.tsv"), "".join(lines))
    _write_text(os.path.join(out, "correlation_matrix.svg"),
                heatmap(names, matrix,
                        "Pearson correlation between correctness measures"))

    for metric in metrics:
        for kind in kinds:
            pair = report.pair(metric, kind)
            rows = _bin_rows(pair.bin_table)
            lines = ["lo\thi\tcount\tmean_confidence\tmean_correctness\n"]
            for lo, hi, count, mc, mk in rows:
                lines.append("\t".join([
                    _g17(lo), _g17(hi), str(count),
                    "" if mc is None else _g17(mc),
                    "" if mk is None else _g17(mk)]) + "\n")
            base = f"reliability_{metric}_{kind}"
            _write_text(os.path.join(out, base + ".tsv"), "".join(lines))
            _write_text(os.path.join(out, base + ".svg"),
                        reliability_diagram(
                            rows, f"Reliability: {metric} vs {kind}"))

    for metric in metrics:
        values = [float(v) for v in conf_at_t1[metric]]
        base = f"histogram_confidence_{metric}"
        _write_hist(out, base, values, n_bins,
                    f"Distribution of {metric} confidence", metric)
    for kind in kinds:
        values = [float(v) for v in corr_columns[kind]]
        base = f"histogram_correctness_{kind}"
        _write_hist(out, base, values, n_bins,
                    f"Distribution of {kind} correctness", kind)

    _echo_config(out, "calibrate", effective)
    print(f"calibrated {len(metrics)} metrics x {len(kinds)} kinds over "
          f"{len(recs)} records into {out}"
          + (" (with temperature scaling)" if with_ts else ""))
    return EXIT_OK


def _write_hist(out, base, values, n_bins, title, x_label):
    counts = [0] * n_bins
    for v in values:
        idx = min(int(v * n_bins), n_bins - 1)
        counts[max(idx, 0)] += 1
    lines = ["lo\thi\tcount\n"]
    for i, c in enumerate(counts):
        lines.append(f"{_g17(i / n_bins)}\t{_g17((i + 1) / n_bins)}\t{c}\n")
    _write_text(os.path.join(out, base + ".tsv"), "".join(lines))
    _write_text(os.path.join(out, base + ".svg"),
                histogram(values, n_bins, title, x_label))


# ------------------------------------------------------------------ parser


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file; flags override "
                        "its values")
    parser.add_argument("--verbose", action="store_true",
                        help="log request/response and progress detail")


def _add_out(parser):
    parser.add_argument("--out", help="output directory (created if absent)")


def _add_metric_flags(parser):
    parser.add_argument("--metrics", type=_parse_metrics,
                        help="comma-separated confidence metrics "
                        f"(default: {','.join(METRIC_ORDER)})")
    parser.add_argument("--kinds", type=_parse_metrics,
                        help="comma-separated correctness kinds "
                        "(default: every kind with a source)")
    parser.add_argument("--norm", action="append", metavar="KIND=LO:HI",
                        help="override a kind's raw source range")
    parser.add_argument("--stemming", action="store_true", default=None,
                        help="stem tokens for the n-gram overlap score "
                        "(default on)")
    parser.add_argument("--no-stemming", dest="stemming",
                        action="store_false", help="disable stemming")


def _add_similarity_flags(parser):
    parser.add_argument("--at-mapping", dest="at_mapping",
                        choices=("clamp01", "affine"),
                        help="cosine-to-[0,1] mapping (default clamp01)")
    parser.add_argument("--tt-aggregation", dest="tt_aggregation",
                        choices=("mean", "max"),
                        help="reference aggregation for caption-reference "
                        "similarity (default mean)")


def _add_clustering_flags(parser):
    parser.add_argument("--tau", type=float,
                        help="similarity threshold for sample clustering "
                        "(default 0.7)")
    parser.add_argument("--weighting", choices=("count", "sequence_prob"),
                        help="cluster weighting (default count)")
    parser.add_argument("--cluster-mapping", dest="cluster_mapping",
                        choices=("clamp01", "affine"),
                        help="cosine mapping inside clustering "
                        "(default clamp01)")


def _add_grid_flags(parser):
    parser.add_argument("--t-start", dest="t_start", type=float,
                        help="first grid temperature (default 0.1)")
    parser.add_argument("--t-stop", dest="t_stop", type=float,
                        help="last grid temperature (default 2.0)")
    parser.add_argument("--t-step", dest="t_step", type=float,
                        help="grid increment (default 0.1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capcal",
        description="Confidence and calibration toolkit for generated "
        "audio captions")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset against the "
                       "record invariants")
    p.add_argument("--manifest", required=True, help="dataset manifest path")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    _add_common(p)
    _add_out(p)
    p.add_argument("--seed", type=int, help="generator seed (default 0)")
    p.add_argument("--n-records", dest="n_records", type=int,
                   help="records to generate (default 100)")
    p.add_argument("--sharpening", type=float,
                   help="logit multiplier before storage (default 1.0)")
    p.add_argument("--max-len", dest="max_len", type=int,
                   help="maximum caption length (default 12)")
    p.add_argument("--n-samples-per-input", dest="n_samples_per_input",
                   type=int, help="sampled captions per record (default 5)")
    p.add_argument("--n-references", dest="n_references", type=int,
                   help="references per record (default 5)")
    p.add_argument("--embed-dim", dest="embed_dim", type=int,
                   help="toy embedding dimension (default 64)")
    p.add_argument("--split", choices=("train", "validation", "evaluation"),
                   help="split name for the manifest (default evaluation)")
    p.add_argument("--name", help="dataset name for the manifest "
                   "(default synth)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("score", help="write per-record confidence and "
                       "correctness tables")
    _add_common(p)
    _add_out(p)
    p.add_argument("--evaluation-manifest", dest="evaluation_manifest",
                   help="manifest of the dataset to score")
    p.add_argument("--temperature", type=float,
                   help="temperature for pooled metrics (default 1.0)")
    _add_metric_flags(p)
    _add_similarity_flags(p)
    _add_clustering_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("sweep", help="Brier-vs-temperature curves and "
                       "optimal temperatures on a validation split")
    _add_common(p)
    _add_out(p)
    p.add_argument("--validation-manifest", dest="validation_manifest",
                   help="manifest of the validation dataset")
    _add_metric_flags(p)
    _add_similarity_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="calibration report, tables, and "
                       "figures on an evaluation split")
    _add_common(p)
    _add_out(p)
    p.add_argument("--evaluation-manifest", dest="evaluation_manifest",
                   help="manifest of the evaluation dataset")
    p.add_argument("--validation-manifest", dest="validation_manifest",
                   help="validation manifest; enables temperature scaling")
    p.add_argument("--n-bins", dest="n_bins", type=int,
                   help="reliability bins (default 10)")
    _add_metric_flags(p)
    _add_similarity_flags(p)
    _add_clustering_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if hasattr(args, "norm") and args.norm is not None:
        try:
            args.norm = _parse_norm_flag(args.norm)
        except CliError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return exc.code
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NetworkError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError as exc:
        # unresolved references or score gaps surface as KeyError
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_DATA
    except CapcalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
