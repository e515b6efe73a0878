"""Time the compiled and NumPy leapfrog kernels on the same ladder.

    python3 benchmarks/bench_lattice.py --cells 256 --steps 100000
"""

import argparse
import time

import numpy as np

from chrono_squid import lattice_sim as ls
from chrono_squid.squid_model import SquidParams


def bench(backend, spec, state, steps, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = ls.advance(state, spec, steps, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cells", type=int, default=256)
    parser.add_argument("--steps", type=int, default=100_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    params = SquidParams(1.25e-6, 90e-15, 10e-6)
    spec = ls.uniform_lattice(params, args.cells, boundary=ls.Boundary.REFLECTIVE)
    state = ls.zero_state(spec)
    state.voltages[:] = np.exp(-0.5 * ((np.arange(spec.n_nodes) - args.cells / 2) / 6.0) ** 2)

    results = {name: bench(name, spec, state, args.steps, args.repeats) for name in sorted(ls.KERNELS)}
    for name, (seconds, _) in results.items():
        rate = args.cells * args.steps / seconds / 1e6
        print(f"{name:>7}: {seconds:8.3f} s  ({rate:7.1f} Mcell-steps/s)")
    if len(results) == 2:
        (_, a), (_, b) = results["cython"], results["python"]
        print(f"speedup: {results['python'][0] / results['cython'][0]:.1f}x, "
              f"bit-identical: {np.array_equal(a.voltages, b.voltages) and np.array_equal(a.currents, b.currents)}")
    else:
        print("compiled kernel not built; only the NumPy backend ran")


if __name__ == "__main__":
    main()
