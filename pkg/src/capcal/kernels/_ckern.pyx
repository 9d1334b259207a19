# Compiled implementation of the hot-loop kernels; see pure.py for the
# reference semantics.  All loops are sequential, single pass per segment.

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, INFINITY

cnp.import_array()

BACKEND_NAME = "compiled"


def chosen_probs(double[::1] cand_logprobs not None,
                 long long[::1] step_offsets not None,
                 long long[::1] chosen_flat not None,
                 double inv_t):
    """Temperature-scaled softmax probability of each step's chosen candidate."""
    cdef Py_ssize_t n_steps = step_offsets.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_steps, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef Py_ssize_t s, j, lo, hi
    cdef double m, total, v
    for s in range(n_steps):
        lo = step_offsets[s]
        hi = step_offsets[s + 1]
        m = -INFINITY
        for j in range(lo, hi):
            v = cand_logprobs[j] * inv_t
            if v > m:
                m = v
        total = 0.0
        for j in range(lo, hi):
            total += exp(cand_logprobs[j] * inv_t - m)
        out_v[s] = exp(cand_logprobs[chosen_flat[s]] * inv_t - m) / total
    return out


def segment_sum(double[::1] values not None,
                long long[::1] offsets not None):
    """Sum of values over each contiguous segment; segments nonempty."""
    cdef Py_ssize_t n_segs = offsets.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_segs, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef Py_ssize_t s, j
    cdef double acc
    for s in range(n_segs):
        acc = 0.0
        for j in range(offsets[s], offsets[s + 1]):
            acc += values[j]
        out_v[s] = acc
    return out


def masked_segment_sum(double[::1] values not None,
                       unsigned char[::1] mask not None,
                       long long[::1] offsets not None):
    """Masked per-segment sums plus the mask count per segment."""
    cdef Py_ssize_t n_segs = offsets.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.zeros(n_segs, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(n_segs, dtype=np.int64)
    cdef double[::1] sums_v = sums
    cdef long long[::1] counts_v = counts
    cdef Py_ssize_t s, j
    cdef double acc
    cdef long long cnt
    for s in range(n_segs):
        acc = 0.0
        cnt = 0
        for j in range(offsets[s], offsets[s + 1]):
            if mask[j]:
                acc += values[j]
                cnt += 1
        sums_v[s] = acc
        counts_v[s] = cnt
    return sums, counts
