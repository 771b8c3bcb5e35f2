"""Time the compiled kernels against the numpy fallback.

Run ``python benchmarks/bench_kernels.py``; ``--repeat`` and ``--size`` tune
the workload. Prints best-of-N wall time per kernel and the speed-up.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from weilneg import _pykernels, kernels


def workloads(backend, size, rng):
    t = rng.uniform(-2000.0, 2000.0, size)
    zeros = np.sort(np.abs(t))
    delta = 1.0 / (2.0 * math.pi)
    return {
        "digamma_re_array": lambda: backend.digamma_re_array(0.75, t),
        "digamma_re (scalar x1000)": lambda: [backend.digamma_re(0.75, x) for x in t[:1000]],
        "fejer_f": lambda: backend.fejer_f(delta, t),
        "ell_integrand": lambda: backend.ell_integrand(0.25, delta, t),
        "zero_sum": lambda: backend.zero_sum(delta, zeros),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled kernels not built; only the numpy backend is available")
        return 1
    rng = np.random.default_rng(1)
    py = workloads(_pykernels, args.size, rng)
    rng = np.random.default_rng(1)
    cy = workloads(compiled, args.size, rng)
    print(f"{'kernel':28s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name in py:
        tp = min(timeit.repeat(py[name], number=1, repeat=args.repeat)) * 1e3
        tc = min(timeit.repeat(cy[name], number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {tp:11.2f} {tc:12.2f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
