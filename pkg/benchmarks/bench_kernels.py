"""Compare the compiled kernels with the numpy fallback.

Run ``python benchmarks/bench_kernels.py`` after building the package; it
times both backends on the same inputs and checks that they agree.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from fock_preserve import _kernels_py
from fock_preserve.poly import MPoly

try:
    from fock_preserve import _kernels
except ImportError:  # extension not built
    _kernels = None


def _poly_inputs(nvars: int, degree: int, trials: int, seed: int):
    rng = np.random.default_rng(seed)
    p = MPoly.constant(nvars)
    for _ in range(degree):
        lin = MPoly.constant(nvars, rng.normal())
        for j in range(nvars):
            lin = lin + MPoly.var(nvars, j, rng.uniform(0.1, 2.0))
        p = p * lin
    items = p.items()
    exps = np.ascontiguousarray([a for a, _ in items], dtype=np.int64)
    coeffs = np.ascontiguousarray([c for _, c in items], dtype=np.complex128)
    A = np.ascontiguousarray(rng.standard_cauchy((trials, nvars)))
    V = np.ascontiguousarray(10.0 ** rng.uniform(-3, 3, (trials, nvars)))
    return exps, coeffs, A, V


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nvars", type=int, default=3)
    parser.add_argument("--degree", type=int, default=8)
    parser.add_argument("--trials", type=int, default=2048)
    parser.add_argument("--sites", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _kernels is None:
        print("compiled extension not available; only the numpy backend can be timed")
    exps, coeffs, A, V = _poly_inputs(args.nvars, args.degree, args.trials, args.seed)
    rng = np.random.default_rng(args.seed)
    J = rng.uniform(0, 1, (args.sites, args.sites))
    J = np.ascontiguousarray(np.triu(J, 1) + np.triu(J, 1).T)

    cases = {
        f"line_restrict_batch (n={args.nvars}, deg={args.degree}, {len(coeffs)} terms, {args.trials} lines)":
            lambda impl: impl.line_restrict_batch(exps, coeffs, A, V),
        f"ising_energies ({args.sites} sites, {2 ** args.sites} configurations)":
            lambda impl: impl.ising_energies(J),
    }
    print(f"{'kernel':<72} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}")
    for name, call in cases.items():
        t_py = _time(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<72} {t_py:>10.4f} {'-':>11} {'-':>8}")
            continue
        t_cy = _time(lambda: call(_kernels), args.repeat)
        ref, got = call(_kernels_py), call(_kernels)
        err = float(np.max(np.abs(ref - got)) / max(1.0, float(np.max(np.abs(ref)))))
        print(f"{name:<72} {t_py:>10.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x   (max rel diff {err:.1e})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
