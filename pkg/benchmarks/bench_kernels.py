"""Time the numba and numpy versions of each GF(2) kernel on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 1024]

Outputs of the two paths are compared for equality before timing.
"""

import argparse
import timeit

import numpy as np

from graphcodes import kernels as K
from graphcodes._accel import HAVE_NUMBA


def _inputs(size, seed=7):
    key = K.seed_key(seed)
    thr = K.bernoulli_threshold(3 * np.log(size) / size)
    m = size // 2
    bits = K._bernoulli_bits_np(key, 0, m, size, thr)
    dense = K._bernoulli_bits_np(key, m, 256, 256, K.bernoulli_threshold(0.5))
    span = K._bernoulli_bits_np(key, m + 256, 18, 96, K.bernoulli_threshold(0.3))
    return {
        "key": key,
        "thr": thr,
        "m": m,
        "H": K.pack_bits(bits),
        "L": K.pack_bits(dense),
        "R": K.pack_bits(dense.T.copy()),
        "B": K.pack_bits(span),
    }


def cases(size):
    d = _inputs(size)
    empty = np.zeros((d["m"], 0), dtype=np.uint64)

    def elim(fn):
        return lambda: fn(d["H"].copy(), empty, size, False)

    return {
        "bernoulli_bits": (
            lambda: K._bernoulli_bits_jit(d["key"], 0, d["m"], size, d["thr"]),
            lambda: K._bernoulli_bits_np(d["key"], 0, d["m"], size, d["thr"]),
        ),
        "eliminate (rank)": (elim(K._eliminate_jit), elim(K._eliminate_np)),
        "matmul 256x256": (
            lambda: K._matmul_jit(d["L"], 256, d["R"]),
            lambda: K._matmul_np(d["L"], 256, d["R"]),
        ),
        "span_min_weight k=18": (
            lambda: K._span_min_weight_jit(d["B"]),
            lambda: K._span_min_weight_np(d["B"]),
        ),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=1024)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<24}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, (jit_fn, np_fn) in cases(args.size).items():
        a, b = jit_fn(), np_fn()  # also triggers compilation
        assert np.array_equal(np.asarray(a), np.asarray(b)), name
        t_jit = min(timeit.repeat(jit_fn, number=1, repeat=args.repeat)) * 1e3
        t_np = min(timeit.repeat(np_fn, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24}{t_jit:>12.3f}{t_np:>12.3f}{t_np / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
