"""Time the compiled walk kernel against the numpy fallback.

    python benchmarks/bench_kernels.py [--steps 2000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qw1d import kernels
from qw1d.core import CoeffSite, WalkSpec, window_amplitudes


def setup(steps, seed=0):
    rng = np.random.default_rng(seed)
    sites = {}
    for n in range(-50, 51):
        r = rng.uniform(0.05, 0.95)
        a, b, c = rng.uniform(0, 2 * np.pi, 3)
        sites[n] = CoeffSite(r, a, b, c, c - a + b + np.pi)
    spec = WalkSpec(sites[-50], sites[50], sites)
    N = steps + 2
    psi = np.zeros((2 * N + 1, 2), dtype=complex)
    psi[N] = [1 / np.sqrt(2), 1j / np.sqrt(2)]
    return window_amplitudes(spec, N), psi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    amps, psi = setup(args.steps)
    impls = {"python": kernels.walk_evolve_python}
    if kernels.walk_evolve_compiled is not None:
        impls["cython"] = kernels.walk_evolve_compiled
    ref = None
    print(f"steps={args.steps} sites={amps.shape[0]} backend={kernels.BACKEND}")
    for name, fn in impls.items():
        best = min(timeit.repeat(lambda: fn(amps, psi, args.steps), number=1,
                                 repeat=args.repeat))
        final, _ = fn(amps, psi, args.steps)
        diff = 0.0 if ref is None else float(np.max(np.abs(final - ref)))
        ref = final if ref is None else ref
        print(f"{name:>7}: {best * 1e3:9.2f} ms  max |diff| vs python {diff:.1e}")


if __name__ == "__main__":
    main()
