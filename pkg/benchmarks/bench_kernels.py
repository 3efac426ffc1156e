"""Time the compiled kernels against the pure-Python fallback.

Run from the repository root after an editable install::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time per call for both backends, their
ratio, and the largest relative difference between the two outputs.
"""
import argparse
import timeit

import numpy as np

from fracckn import _specfun_py as py

try:
    from fracckn import _kernels as cy
except ImportError:  # extension not built
    cy = None


def cases():
    rng = np.random.default_rng(12345)
    x = np.sort(rng.uniform(0.0, 0.999, 2000))
    xi = np.linspace(-200.0, 200.0, 4096)
    z = rng.uniform(-20, 20, 4096) + 1j * rng.uniform(-50, 50, 4096)
    v = np.exp(-np.linspace(-10, 10, 4096) ** 2)
    w = 1.0 / (1.0 + np.arange(4098.0)) ** 2
    return [
        ("hyp2f1 scalar x=0.95", "hyp2f1", (1.75, 1.5, 1.5, 0.95)),
        ("hyp2f1 scalar near-integer c-a-b", "hyp2f1", (1.25, 1.5, 2.75 + 1e-10, 0.999)),
        ("hyp2f1_vec 2000 points", "hyp2f1_vec", (1.75, 1.5, 1.5, x)),
        ("loggamma_vec 4096 complex", "loggamma_vec", (z,)),
        ("gamma_ratio_sq_vec 4096", "gamma_ratio_sq_vec", (1.0, 0.5, xi)),
        ("paired_sum N=4096", "paired_sum", (v, w)),
    ]


def best_time(fn, args, repeat):
    number = 1
    while True:
        t = min(timeit.repeat(lambda: fn(*args), number=number, repeat=3))
        if t > 0.05 or number >= 1 << 16:
            break
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def rel_diff(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = np.maximum(np.abs(b), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if cy is None:
        print("compiled extension not available; only the fallback can run")
    print(f"{'kernel':36s} {'python':>12s} {'compiled':>12s} {'speedup':>9s} {'max rel diff':>13s}")
    for label, name, fargs in cases():
        tp = best_time(getattr(py, name), fargs, args.repeat)
        if cy is None:
            print(f"{label:36s} {tp * 1e6:10.1f}us")
            continue
        fc = getattr(cy, name)
        tc = best_time(fc, fargs, args.repeat)
        diff = rel_diff(fc(*fargs), getattr(py, name)(*fargs))
        print(f"{label:36s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:8.1f}x {diff:13.2e}")


if __name__ == "__main__":
    main()
