"""Pure-numpy implementation of the hot-loop kernels.

Used when the compiled extension is unavailable or disabled via
``CAPCAL_PURE_KERNELS=1``.  Semantics match ``_ckern`` exactly; floating
point results may differ in the last couple of ulps because numpy reduces
with pairwise summation while the compiled loops are sequential.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def chosen_probs(cand_logprobs, step_offsets, chosen_flat, inv_t):
    """Temperature-scaled softmax probability of the chosen candidate.

    ``cand_logprobs`` holds the candidate log-probabilities of all steps
    back to back; step ``s`` owns the slice
    ``[step_offsets[s], step_offsets[s+1])`` and ``chosen_flat[s]`` is the
    flat index of its chosen candidate.  Each step's candidate set is
    renormalized under softmax at inverse temperature ``inv_t``.
    """
    starts = step_offsets[:-1]
    lengths = np.diff(step_offsets)
    scaled = cand_logprobs * inv_t
    seg_max = np.maximum.reduceat(scaled, starts)
    expv = np.exp(scaled - np.repeat(seg_max, lengths))
    sums = np.add.reduceat(expv, starts)
    return expv[chosen_flat] / sums


def segment_sum(values, offsets):
    """Sum of ``values`` over each contiguous segment; segments nonempty."""
    return np.add.reduceat(values, offsets[:-1])


def masked_segment_sum(values, mask, offsets):
    """Masked per-segment sums plus the mask count per segment.

    ``mask`` is a uint8/bool array aligned with ``values``; returns
    ``(sums, counts)`` where entries with ``counts == 0`` are zero sums.
    """
    starts = offsets[:-1]
    m = mask.astype(np.float64)
    sums = np.add.reduceat(values * m, starts)
    counts = np.add.reduceat(m, starts).astype(np.int64)
    sums[counts == 0] = 0.0
    return sums, counts
