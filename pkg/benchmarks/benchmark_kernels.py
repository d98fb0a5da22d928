"""Timing comparison of the numba kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/benchmark_kernels.py [--repeats N]

Each kernel is exercised on frame-sized inputs (K = 768 trellis steps,
N = 256 QAM64 symbols). The numba functions are called once before timing
so JIT compilation is not counted.
"""

import argparse
import time

import numpy as np

from tbicm.kernels import numba_backend, numpy_backend
from tbicm.trellis import build_trellis


def make_inputs(rng, k=768, n=256, m=6):
    tr = build_trellis()
    gam = rng.standard_normal((k, 32))
    gsys = rng.standard_normal((k, 4))
    gpar = rng.standard_normal((k, 4))
    alpha0 = rng.standard_normal(8)
    beta_end = rng.standard_normal(8)
    alpha, beta = numpy_backend.bcjr_alpha_beta(
        gam, tr.from_state, tr.to_state, tr.edges_by_to, alpha0, beta_end)
    yi, yq = rng.standard_normal((2, n))
    ci, cq = rng.random((2, n)) + 0.1
    pts = np.exp(2j * np.pi * rng.random(2 ** m))
    labels = ((np.arange(2 ** m)[:, None] >> np.arange(m - 1, -1, -1)) & 1)
    sub0 = np.array([np.flatnonzero(labels[:, p] == 0) for p in range(m)])
    sub1 = np.array([np.flatnonzero(labels[:, p] == 1) for p in range(m)])
    dist = rng.standard_normal((n, 2 ** m))
    d_seq = rng.integers(0, 4, k)
    n_perm = 3072
    order = rng.permutation(n_perm)
    cases = {
        "bcjr_alpha_beta": (gam, tr.from_state, tr.to_state, tr.edges_by_to,
                            alpha0, beta_end),
        "bcjr_soft": (gam, alpha, beta, tr.from_state, tr.to_state),
        "bcjr_feedback": (gam, gsys, gpar, alpha, beta, tr.from_state,
                          tr.to_state, tr.par_of_edge),
        "euclid_distances": (yi, yq, ci, cq,
                             np.ascontiguousarray(pts.real),
                             np.ascontiguousarray(pts.imag)),
        "demap_llrs": (dist, sub0, sub1),
        "rsc_pass": (d_seq, tr.next_state, tr.out_y, tr.out_w, 0),
        "srandom_attempt": (order, int(np.sqrt(n_perm / 4)),
                            np.empty(n_perm, dtype=np.int64), 42),
    }
    return cases


def bench(fn, args, repeats):
    fn(*args)                               # warm-up / JIT compile
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=50)
    opts = ap.parse_args()
    cases = make_inputs(np.random.default_rng(0))
    print(f"{'kernel':<20} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for name, args in cases.items():
        t_np = bench(getattr(numpy_backend, name), args, opts.repeats)
        t_nb = bench(getattr(numba_backend, name), args, opts.repeats)
        print(f"{name:<20} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
