"""Dataset record model, manifest handling, and the on-disk formats.

Records travel as line-delimited JSON, one object per sample, with
log-probabilities written as decimals with 17 significant digits so a
write/read round trip is bit-exact.  Embedding stores are line-delimited
``{id, kind, values}`` objects with 9-significant-digit components
(single-precision round trip).  A manifest is a single JSON object naming
the record stream, the embedding store and any external score files.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DataFormatError

SPLITS = ("train", "validation", "evaluation")

# Tolerance for the stored-mass bookkeeping of a decode step.
COVERAGE_TOL = 1e-6


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _fmt9(x: float) -> str:
    return format(float(x), ".9g")


@dataclass(frozen=True)
class CandidateToken:
    """One candidate continuation at a decode step, with its natural-log probability."""

    token: str
    token_id: int
    logprob: float


@dataclass(frozen=True)
class DecodeStep:
    """Top-K candidate distribution at one step; ``coverage`` is the stored mass."""

    chosen: int
    candidates: tuple[CandidateToken, ...]
    coverage: float


@dataclass(frozen=True)
class WordAlignment:
    """Maps a word to the half-open span of step indices it produced."""

    word_index: int
    token_span: tuple[int, int]


@dataclass(frozen=True)
class SampledCaption:
    """An independently sampled caption for the same input."""

    text: str
    embedding_ref: str
    sequence_logprob: float | None = None


@dataclass
class GenerationRecord:
    """One audio sample's decoded caption plus everything needed to score it."""

    id: str
    caption_text: str
    words: list[str]
    steps: list[DecodeStep]
    audio_embedding_ref: str
    caption_embedding_ref: str
    references: list[str]
    reference_embedding_refs: list[str]
    word_pos: list[str] | None = None
    alignment: list[WordAlignment] | None = None
    samples: list[SampledCaption] = field(default_factory=list)
    external_scores: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class DatasetManifest:
    """Names one dataset split and the files holding its artifacts."""

    name: str
    split: str
    records_path: str
    embeddings_path: str
    external_scores_paths: dict[str, str]


class EmbeddingStore:
    """Immutable id -> vector map; all vectors share one dimension."""

    def __init__(self, entries: dict[str, np.ndarray], dim: int):
        self.dim = dim
        self._entries = entries

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, ref: str) -> bool:
        return ref in self._entries

    def get(self, ref: str) -> np.ndarray:
        try:
            return self._entries[ref]
        except KeyError:
            raise KeyError(f"embedding ref not in store: {ref!r}") from None

    def ids(self):
        return self._entries.keys()


@dataclass
class ValidationReport:
    """Invariant violations found in one record; empty means valid."""

    record_id: str
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def load_manifest(path: str) -> DatasetManifest:
    """Read and check a manifest file; referenced paths are resolved
    relative to the manifest's directory and must exist."""
    if not os.path.isfile(path):
        raise DataFormatError(f"manifest not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DataFormatError("manifest must be a single JSON object")
    for key in ("name", "split", "records_path", "embeddings_path"):
        if key not in raw:
            raise DataFormatError(f"manifest is missing required field {key!r}")
    split = raw["split"]
    if split not in SPLITS:
        raise DataFormatError(
            f"unknown split {split!r}; expected one of {', '.join(SPLITS)}")
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    records_path = resolve(raw["records_path"])
    embeddings_path = resolve(raw["embeddings_path"])
    score_paths = {}
    for kind, p in (raw.get("external_scores_paths") or {}).items():
        score_paths[str(kind)] = resolve(p)
    for p in (records_path, embeddings_path, *score_paths.values()):
        if not os.path.isfile(p):
            raise DataFormatError(f"manifest references missing file: {p}")
    return DatasetManifest(
        name=str(raw["name"]),
        split=split,
        records_path=records_path,
        embeddings_path=embeddings_path,
        external_scores_paths=score_paths,
    )


def write_manifest(path: str, manifest: DatasetManifest) -> None:
    obj = {
        "name": manifest.name,
        "split": manifest.split,
        "records_path": manifest.records_path,
        "embeddings_path": manifest.embeddings_path,
        "external_scores_paths": manifest.external_scores_paths,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _record_from_obj(obj: dict, where: str) -> GenerationRecord:
    try:
        steps = []
        for s in obj["steps"]:
            cands = tuple(
                CandidateToken(token=c["token"], token_id=int(c["token_id"]),
                               logprob=float(c["logprob"]))
                for c in s["candidates"])
            steps.append(DecodeStep(chosen=int(s["chosen"]), candidates=cands,
                                    coverage=float(s["coverage"])))
        alignment = None
        if obj.get("alignment") is not None:
            alignment = [
                WordAlignment(word_index=int(a["word_index"]),
                              token_span=(int(a["token_span"][0]),
                                          int(a["token_span"][1])))
                for a in obj["alignment"]]
        samples = [
            SampledCaption(text=s["text"], embedding_ref=s["embedding_ref"],
                           sequence_logprob=(None if s.get("sequence_logprob") is None
                                             else float(s["sequence_logprob"])))
            for s in obj.get("samples", [])]
        word_pos = obj.get("word_pos")
        return GenerationRecord(
            id=str(obj["id"]),
            caption_text=obj["caption_text"],
            words=list(obj["words"]),
            word_pos=None if word_pos is None else [str(t) for t in word_pos],
            alignment=alignment,
            steps=steps,
            audio_embedding_ref=obj["audio_embedding_ref"],
            caption_embedding_ref=obj["caption_embedding_ref"],
            references=list(obj["references"]),
            reference_embedding_refs=list(obj["reference_embedding_refs"]),
            samples=samples,
            external_scores={str(k): float(v)
                             for k, v in obj.get("external_scores", {}).items()},
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise DataFormatError(f"{where}: malformed record ({exc})") from exc


def _record_to_json(rec: GenerationRecord) -> str:
    # json.dumps would re-serialize floats via repr; log-probabilities need
    # the 17-significant-digit convention, so the object is assembled by hand.
    parts = [f'"id": {json.dumps(rec.id)}',
             f'"caption_text": {json.dumps(rec.caption_text)}',
             f'"words": {json.dumps(rec.words)}']
    if rec.word_pos is None:
        parts.append('"word_pos": null')
    else:
        parts.append(f'"word_pos": {json.dumps(rec.word_pos)}')
    if rec.alignment is None:
        parts.append('"alignment": null')
    else:
        spans = ", ".join(
            f'{{"word_index": {a.word_index}, "token_span": [{a.token_span[0]}, {a.token_span[1]}]}}'
            for a in rec.alignment)
        parts.append(f'"alignment": [{spans}]')
    step_strs = []
    for s in rec.steps:
        cands = ", ".join(
            f'{{"token": {json.dumps(c.token)}, "token_id": {c.token_id}, '
            f'"logprob": {_fmt17(c.logprob)}}}'
            for c in s.candidates)
        step_strs.append(f'{{"chosen": {s.chosen}, "coverage": {_fmt17(s.coverage)}, '
                         f'"candidates": [{cands}]}}')
    parts.append(f'"steps": [{", ".join(step_strs)}]')
    parts.append(f'"audio_embedding_ref": {json.dumps(rec.audio_embedding_ref)}')
    parts.append(f'"caption_embedding_ref": {json.dumps(rec.caption_embedding_ref)}')
    parts.append(f'"references": {json.dumps(rec.references)}')
    parts.append(f'"reference_embedding_refs": {json.dumps(rec.reference_embedding_refs)}')
    sample_strs = []
    for s in rec.samples:
        lp = "null" if s.sequence_logprob is None else _fmt17(s.sequence_logprob)
        sample_strs.append(f'{{"text": {json.dumps(s.text)}, '
                           f'"embedding_ref": {json.dumps(s.embedding_ref)}, '
                           f'"sequence_logprob": {lp}}}')
    parts.append(f'"samples": [{", ".join(sample_strs)}]')
    scores = ", ".join(f"{json.dumps(k)}: {_fmt17(v)}"
                       for k, v in sorted(rec.external_scores.items()))
    parts.append(f'"external_scores": {{{scores}}}')
    return "{" + ", ".join(parts) + "}"


def write_records(path: str, records) -> None:
    """Write records as line-delimited JSON in iteration order."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(_record_to_json(rec))
            fh.write("\n")


def read_records_file(path: str):
    """Yield records from a line-delimited file in file order.

    Parse failures cite the 1-based line number; a duplicate id is a hard
    error citing both lines.
    """
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(
                    f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            rec = _record_from_obj(obj, where=f"{path}:{lineno}")
            if rec.id in seen:
                raise DataFormatError(
                    f"{path}: duplicate record id {rec.id!r} "
                    f"on lines {seen[rec.id]} and {lineno}")
            seen[rec.id] = lineno
            yield rec


def read_records(manifest: DatasetManifest):
    """Stream the manifest's records in file order."""
    yield from read_records_file(manifest.records_path)


def load_embedding_store(path: str) -> EmbeddingStore:
    """Read a line-delimited embedding store, enforcing uniform finite
    nonzero vectors."""
    entries: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                ref = str(obj["id"])
                kind = obj["kind"]
                values = obj["values"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataFormatError(
                    f"{path}:{lineno}: malformed store entry ({exc})") from exc
            if kind not in ("audio", "text"):
                raise DataFormatError(
                    f"{path}:{lineno}: unknown embedding kind {kind!r}")
            vec = np.asarray(values, dtype=np.float64)
            if vec.ndim != 1 or vec.size == 0:
                raise DataFormatError(
                    f"{path}:{lineno}: values must be a nonempty flat list")
            if dim is None:
                dim = int(vec.size)
            elif vec.size != dim:
                raise DataFormatError(
                    f"{path}:{lineno}: dimension mismatch "
                    f"({vec.size} != {dim}) for id {ref!r}")
            if not np.all(np.isfinite(vec)):
                raise DataFormatError(
                    f"{path}:{lineno}: non-finite component in id {ref!r}")
            if not np.any(vec):
                raise DataFormatError(f"{path}:{lineno}: zero vector for id {ref!r}")
            if ref in entries:
                raise DataFormatError(f"{path}:{lineno}: duplicate embedding id {ref!r}")
            vec.flags.writeable = False
            entries[ref] = vec
    if dim is None:
        raise DataFormatError(f"{path}: embedding store is empty")
    return EmbeddingStore(entries, dim)


def write_embedding_store(path: str, entries) -> None:
    """Write (id, kind, vector) triples as a line-delimited store file."""
    with open(path, "w", encoding="utf-8") as fh:
        for ref, kind, vec in entries:
            values = ", ".join(_fmt9(v) for v in vec)
            fh.write(f'{{"id": {json.dumps(ref)}, "kind": {json.dumps(kind)}, '
                     f'"values": [{values}]}}\n')


def _validate_alignment(rec: GenerationRecord, out: list[str]) -> None:
    n_steps = len(rec.steps)
    prev_end = 0
    prev_word = -1
    for a in rec.alignment:
        if not (0 <= a.word_index < len(rec.words)):
            out.append(f"alignment word_index {a.word_index} out of range")
            return
        if a.word_index <= prev_word:
            out.append("alignment word indices not strictly increasing")
            return
        start, end = a.token_span
        if start != prev_end:
            out.append(f"alignment spans not contiguous at step {start}")
            return
        if end <= start:
            out.append(f"alignment span [{start}, {end}) is empty or reversed")
            return
        prev_end = end
        prev_word = a.word_index
    if prev_end != n_steps:
        out.append(f"alignment covers [0, {prev_end}) but record has {n_steps} steps")


def validate_record(rec: GenerationRecord, store: EmbeddingStore,
                    require_sample_embeddings: bool = False) -> ValidationReport:
    """Check every record invariant; violations are data, not faults."""
    v: list[str] = []
    if not rec.id:
        v.append("empty record id")
    if not rec.steps:
        v.append("record has no decode steps")
    if rec.alignment is None:
        if len(rec.words) != len(rec.steps):
            v.append(f"no alignment but {len(rec.words)} words != "
                     f"{len(rec.steps)} steps")
    else:
        _validate_alignment(rec, v)
    if rec.word_pos is not None and len(rec.word_pos) != len(rec.words):
        v.append(f"word_pos has {len(rec.word_pos)} tags for {len(rec.words)} words")
    for i, step in enumerate(rec.steps):
        if not step.candidates:
            v.append(f"step {i}: no candidates")
            continue
        if not (0 <= step.chosen < len(step.candidates)):
            v.append(f"step {i}: chosen index {step.chosen} out of range")
        mass = 0.0
        prev = math.inf
        ok = True
        for c in step.candidates:
            if not c.token:
                v.append(f"step {i}: empty candidate token")
                ok = False
                break
            if not math.isfinite(c.logprob) or c.logprob > 0.0:
                v.append(f"step {i}: logprob {c.logprob!r} not a finite value <= 0")
                ok = False
                break
            if c.logprob > prev:
                v.append(f"step {i}: candidates not in descending logprob order")
                ok = False
                break
            prev = c.logprob
            mass += math.exp(c.logprob)
        if not ok:
            continue
        if mass > 1.0 + COVERAGE_TOL:
            v.append(f"step {i}: candidate mass {mass:.9g} exceeds 1")
        if abs(mass - step.coverage) > COVERAGE_TOL:
            v.append(f"step {i}: coverage {step.coverage:.9g} != "
                     f"candidate mass {mass:.9g}")
        if not (0.0 < step.coverage <= 1.0 + COVERAGE_TOL):
            v.append(f"step {i}: coverage {step.coverage:.9g} outside (0, 1]")
    if not rec.references:
        v.append("no reference captions")
    if len(rec.reference_embedding_refs) not in (0, len(rec.references)):
        v.append(f"{len(rec.reference_embedding_refs)} reference embedding refs "
                 f"for {len(rec.references)} references")
    for ref in (rec.audio_embedding_ref, rec.caption_embedding_ref,
                *rec.reference_embedding_refs):
        if ref not in store:
            v.append(f"embedding ref not in store: {ref!r}")
    if require_sample_embeddings:
        for s in rec.samples:
            if s.embedding_ref not in store:
                v.append(f"sample embedding ref not in store: {s.embedding_ref!r}")
    return ValidationReport(record_id=rec.id, violations=v)
