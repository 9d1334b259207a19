"""capcal: confidence, correctness and calibration for generated audio captions.

The toolkit ingests decoded captions with per-step candidate
log-probabilities, reference captions and joint-space embeddings, then
measures:

- confidence: arithmetic/geometric pooling of chosen-token probabilities
  (optionally restricted to noun/verb/adjective tokens), audio-text
  embedding similarity, and semantic entropy over sampled captions;
- correctness: native consensus n-gram scoring and text-text embedding
  similarity, plus ingestion of externally computed scores;
- calibration: Brier score, expected calibration error, Pearson
  correlation, reliability bins, and post-hoc temperature scaling with a
  validation-split grid search.

A deterministic synthetic oracle generates datasets with known
calibration properties for testing and demos.
"""

__version__ = "0.1.0"
