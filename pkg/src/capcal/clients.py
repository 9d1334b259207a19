"""Optional HTTP clients for embedding and caption-judge services.

These populate embedding stores and raw judge scores for pipelines whose
inputs are not already on disk.  They are never imported by the scoring or
calibration paths; everything downstream reads the standard store/score
files these clients write, so the core pipeline stays offline-reproducible.
"""

from __future__ import annotations

import json
import logging
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from urllib.parse import urlparse

import numpy as np
import requests

from .errors import DataFormatError, NetworkError
from .records import write_embedding_store

logger = logging.getLogger("capcal.clients")

# default judge extraction: first integer or decimal in the response body
FIRST_NUMBER = r"[-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?"

_RETRY_BACKOFF = 0.05  # seconds, times the attempt number


@dataclass(frozen=True)
class ServiceEndpoint:
    """One HTTP service: where it is, how to auth, how patient to be."""

    base_url: str
    auth_token: str | None = None
    timeout: float = 10.0
    max_retries: int = 2

    def __post_init__(self):
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"base_url must be an absolute http(s) URL, "
                             f"got {self.base_url!r}")
        if not (math.isfinite(self.timeout) and self.timeout > 0):
            raise ValueError(f"timeout must be positive, got {self.timeout!r}")
        if self.max_retries < 0:
            raise ValueError(f"max_retries must be >= 0, "
                             f"got {self.max_retries}")

    def headers(self) -> dict:
        h = {"Content-Type": "application/json"}
        if self.auth_token:
            h["Authorization"] = f"Bearer {self.auth_token}"
        return h


def _redact(endpoint: ServiceEndpoint, text: str) -> str:
    if endpoint.auth_token:
        return text.replace(endpoint.auth_token, "***")
    return text


def _post_json(endpoint: ServiceEndpoint, payload: dict, what: str) -> str:
    """POST with retries on transient failures; returns the response body.

    Retries cover connection errors, timeouts, and 5xx statuses.  4xx
    statuses fail immediately: resending the same bad request cannot help.
    """
    body = json.dumps(payload)
    logger.debug("%s request to %s: %s", what, endpoint.base_url,
                 _redact(endpoint, body))
    attempts = endpoint.max_retries + 1
    started = time.monotonic()
    last_error = ""
    for attempt in range(1, attempts + 1):
        try:
            resp = requests.post(endpoint.base_url, data=body,
                                 headers=endpoint.headers(),
                                 timeout=endpoint.timeout)
        except requests.RequestException as exc:
            last_error = str(exc)
        else:
            if resp.status_code < 400:
                if attempt > 1:
                    logger.info("%s succeeded on attempt %d", what, attempt)
                logger.debug("%s response: %s", what,
                             _redact(endpoint, resp.text))
                return resp.text
            last_error = f"HTTP {resp.status_code}"
            if resp.status_code < 500:
                break
        if attempt < attempts:
            logger.warning("%s attempt %d/%d failed (%s), retrying",
                           what, attempt, attempts, last_error)
            time.sleep(_RETRY_BACKOFF * attempt)
    elapsed = time.monotonic() - started
    raise NetworkError(f"{what} request to {endpoint.base_url} failed "
                       f"after {attempts} attempt(s) over {elapsed:.2f}s: "
                       f"{last_error}")


def fetch_text_embeddings(endpoint: ServiceEndpoint, texts,
                          batch_size: int = 32,
                          parallelism: int = 1) -> list[np.ndarray]:
    """Embed texts via the service; one vector per text, order preserved.

    Requests go out in batches (concurrently when parallelism > 1) and are
    merged back in request order.  All vectors must agree on dimension and
    be finite; violations raise NetworkError since they indicate a broken
    service, not broken local data.
    """
    texts = list(texts)
    if not texts:
        raise ValueError("texts must be nonempty")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    batches = [texts[i:i + batch_size]
               for i in range(0, len(texts), batch_size)]

    def fetch_one(batch):
        raw = _post_json(endpoint, {"texts": batch}, "embed")
        try:
            obj = json.loads(raw)
            rows = obj["vectors"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise NetworkError(f"embed response is not a vectors object: "
                               f"{exc}") from exc
        if len(rows) != len(batch):
            raise NetworkError(f"embed response has {len(rows)} vectors "
                               f"for {len(batch)} texts")
        return [np.asarray(row, dtype=np.float64) for row in rows]

    if parallelism == 1:
        per_batch = [fetch_one(b) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            per_batch = list(pool.map(fetch_one, batches))

    vectors = [vec for rows in per_batch for vec in rows]
    dim = vectors[0].shape[0] if vectors[0].ndim == 1 else -1
    for i, vec in enumerate(vectors):
        if vec.ndim != 1 or vec.shape[0] != dim:
            raise NetworkError(f"dimension mismatch: vector {i} has shape "
                               f"{vec.shape}, expected ({dim},)")
        if not np.all(np.isfinite(vec)):
            raise NetworkError(f"non-finite values in vector {i}")
    if dim < 1:
        raise NetworkError("embed service returned zero-dimensional vectors")
    return vectors


def embed_texts_to_store(endpoint: ServiceEndpoint, items, store_path: str,
                         kind: str = "text", batch_size: int = 32,
                         parallelism: int = 1) -> int:
    """Fetch embeddings for (ref_id, text) pairs and merge them into a
    store file; returns the number of vectors written.

    Existing entries are kept (new ids win on collision) and the service
    vectors must match the existing store dimension.
    """
    items = list(items)
    refs = [ref for ref, _ in items]
    if len(set(refs)) != len(refs):
        raise ValueError("duplicate ref ids in items")
    vectors = fetch_text_embeddings(endpoint, [t for _, t in items],
                                    batch_size, parallelism)
    rows = []
    existing = _read_store_rows(store_path)
    if existing:
        store_dim = len(existing[0][2])
        if store_dim != vectors[0].shape[0]:
            raise NetworkError(f"service dimension {vectors[0].shape[0]} "
                               f"does not match store dimension {store_dim}")
        fresh = set(refs)
        rows.extend(row for row in existing if row[0] not in fresh)
    rows.extend((ref, kind, vec) for (ref, _), vec in zip(items, vectors))
    write_embedding_store(store_path, rows)
    return len(vectors)


def _read_store_rows(path: str):
    """Raw (id, kind, values) rows of a store file; [] when absent."""
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        return []
    rows = []
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                rows.append((str(obj["id"]), str(obj["kind"]),
                             [float(v) for v in obj["values"]]))
            except (json.JSONDecodeError, KeyError, TypeError,
                    ValueError) as exc:
                raise DataFormatError(f"{path}:{lineno}: bad store line: "
                                      f"{exc}") from exc
    return rows


def judge_score(endpoint: ServiceEndpoint, candidate: str, references,
                rubric: str, pattern: str = FIRST_NUMBER) -> float:
    """Ask the judge service to grade one candidate; returns the raw score.

    The response body is scanned with the extraction pattern (first match
    wins), so both structured {"score": 87} bodies and free-text verdicts
    work.  The raw value feeds the normal ingestion/normalization path.
    """
    raw = _post_json(endpoint, {"candidate": candidate,
                                "references": list(references),
                                "rubric": rubric}, "judge")
    match = re.search(pattern, raw)
    if match is None:
        raise NetworkError(f"unparseable judge response (no match for "
                           f"{pattern!r}): {raw[:200]!r}")
    try:
        value = float(match.group(0))
    except ValueError as exc:
        raise NetworkError(f"judge extraction {match.group(0)!r} is not "
                           f"a number") from exc
    if not math.isfinite(value):
        raise NetworkError(f"judge score {value!r} is not finite")
    return value


def judge_records_to_file(endpoint: ServiceEndpoint, records, rubric: str,
                          out_path: str,
                          pattern: str = FIRST_NUMBER) -> int:
    """Grade each record's caption against its references and write the
    raw scores as a two-column score file; returns the row count."""
    lines = []
    for rec in records:
        value = judge_score(endpoint, rec.caption_text, rec.references,
                            rubric, pattern)
        lines.append(f"{rec.id}\t{value:.17g}\n")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    return len(lines)
