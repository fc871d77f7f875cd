"""Benchmark the numba feature-evaluation kernels against the numpy fallback.

The fused kernels turn pre-activations Z = X W^T + b into feature values and
per-axis gradients in one pass; the numpy path computes the same with
broadcasting and two large temporaries.  Representative sizes are the volume
(70x70 points) and face (70 points) evaluations of the 2-d runs.

Run:  python benchmarks/bench_kernels.py
Select the path at import time with RNN_DG_NUMBA=0/1/auto.
"""

import time

import numpy as np

from rnn_dg import _kernels


def bench(fn, kind, z, w, scale, repeats=5):
    fn(kind, z, w, scale)  # warm-up (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(kind, z, w, scale)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    cases = [
        ("volume 2-d (4900 x 320)", 4900, 320, 2),
        ("volume 2-d (4900 x 640)", 4900, 640, 2),
        ("volume 1-d (70 x 1280)", 70, 1280, 1),
        ("face (70 x 320)", 70, 320, 2),
    ]
    print(f"numba available and selected: {_kernels.USING_NUMBA}")
    header = f"{'case':28s} {'act':5s} {'numpy':>10s}"
    if _kernels.USING_NUMBA:
        header += f" {'numba':>10s} {'speedup':>8s}"
    print(header)
    for name, n, m, d in cases:
        z = rng.normal(size=(n, m))
        w = rng.normal(size=(m, d))
        scale = np.ones(d)
        for kind in ("tanh", "sin"):
            t_np = bench(_kernels.activation_eval_numpy, kind, z, w, scale)
            line = f"{name:28s} {kind:5s} {t_np * 1e3:9.2f}ms"
            if _kernels.USING_NUMBA:
                t_nb = bench(_kernels.activation_eval, kind, z, w, scale)
                line += f" {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.2f}x"
            print(line)


if __name__ == "__main__":
    main()
