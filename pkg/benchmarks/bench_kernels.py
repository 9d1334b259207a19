"""Benchmark the compiled kernels against the pure-numpy fallback.

Builds one large synthetic batch, then times the three kernel functions and
a full 20-point pooled-metric sweep under each backend. Run from a source
checkout with the extension built:

    python3 benchmarks/bench_kernels.py [--n-records 20000] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from capcal.confidence import PooledBatch
from capcal.kernels import pure
from capcal.synthgen import SynthConfig, generate_dataset

try:
    from capcal.kernels import _ckern as compiled
except ImportError:
    compiled = None


def _best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _bench_backend(impl, batch, temps, repeats):
    inv_ts = [1.0 / t for t in temps]
    times = {}
    times["chosen_probs"] = _best_of(repeats, lambda: impl.chosen_probs(
        batch.cand_logprobs, batch.step_offsets, batch.chosen_flat, 1.0))
    probs = impl.chosen_probs(batch.cand_logprobs, batch.step_offsets,
                              batch.chosen_flat, 1.0)
    times["segment_sum"] = _best_of(repeats, lambda: impl.segment_sum(
        probs, batch.record_offsets))
    times["masked_segment_sum"] = _best_of(
        repeats, lambda: impl.masked_segment_sum(
            probs, batch.content_mask, batch.record_offsets))

    def full_sweep():
        for inv_t in inv_ts:
            p = impl.chosen_probs(batch.cand_logprobs, batch.step_offsets,
                                  batch.chosen_flat, inv_t)
            impl.segment_sum(p, batch.record_offsets)
            impl.masked_segment_sum(p, batch.content_mask,
                                    batch.record_offsets)

    times["20-point sweep"] = _best_of(repeats, full_sweep)
    return times


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-records", type=int, default=20000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    print(f"generating {args.n_records} records ...")
    dataset = generate_dataset(SynthConfig(seed=args.seed,
                                           n_records=args.n_records))
    batch = PooledBatch.from_records(dataset.records)
    n_cands = len(batch.cand_logprobs)
    print(f"batch: {batch.n_records} records, "
          f"{len(batch.chosen_flat)} steps, {n_cands} candidates")

    temps = [round(0.1 + 0.1 * i, 10) for i in range(20)]
    results = {"pure": _bench_backend(pure, batch, temps, args.repeats)}
    if compiled is None:
        print("compiled extension not built; benchmarking pure only")
    else:
        results["compiled"] = _bench_backend(compiled, batch, temps,
                                             args.repeats)
        for name in ("chosen_probs", "segment_sum", "masked_segment_sum"):
            a = compiled.chosen_probs(batch.cand_logprobs,
                                      batch.step_offsets,
                                      batch.chosen_flat, 2.0)
            b = pure.chosen_probs(batch.cand_logprobs, batch.step_offsets,
                                  batch.chosen_flat, 2.0)
            if not np.allclose(a, b, rtol=0, atol=1e-12):
                raise SystemExit(f"backend mismatch in {name}")

    width = max(len(k) for times in results.values() for k in times)
    header = f"{'kernel':<{width}}" + "".join(
        f"  {name:>12}" for name in results)
    if len(results) == 2:
        header += f"  {'speedup':>9}"
    print(header)
    for kernel in next(iter(results.values())):
        row = f"{kernel:<{width}}"
        for name in results:
            row += f"  {results[name][kernel] * 1e3:>10.2f}ms"
        if len(results) == 2:
            ratio = results["pure"][kernel] / results["compiled"][kernel]
            row += f"  {ratio:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
