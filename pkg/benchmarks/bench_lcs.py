"""Compare the two LCS kernels on identical inputs.

Run from the repository root:

    python3 benchmarks/bench_lcs.py

The jitted path needs numba; when it is unavailable only the numpy row
kernel is timed.  Timings are best-of-N on pre-encoded id arrays, so they
isolate the DP loop itself.
"""

import time

import numpy as np

from kurosawa.metrics import _lcs

SIZES = (50, 200, 800, 2000)
REPEATS = 7
VOCAB = 64
SEED = 9


def best_of(fn, a, b):
    series = []
    for _ in range(REPEATS):
        started = time.perf_counter()
        fn(a, b)
        series.append(time.perf_counter() - started)
    return min(series)


def main():
    rng = np.random.default_rng(SEED)
    kernels = [("numpy", _lcs._lcs_len_numpy)]
    if _lcs.HAS_NUMBA:
        kernels.append(("numba", _lcs._lcs_len_jit))
    print(f"selected backend: {_lcs.LCS_BACKEND}")
    names = [name for name, _ in kernels]
    print(f"{'tokens':>8}  " + "  ".join(f"{name + ' (ms)':>12}" for name in names)
          + ("   numba gain" if len(kernels) == 2 else ""))
    for size in SIZES:
        a = rng.integers(0, VOCAB, size=size, dtype=np.int64)
        b = rng.integers(0, VOCAB, size=size, dtype=np.int64)
        # first call doubles as JIT warmup; both kernels must agree
        answers = {name: int(fn(a, b)) for name, fn in kernels}
        assert len(set(answers.values())) == 1, answers
        times = [best_of(fn, a, b) for _, fn in kernels]
        row = f"{size:>8}  " + "  ".join(f"{t * 1e3:>12.3f}" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>10.1f}x"
        print(row)


if __name__ == "__main__":
    main()
