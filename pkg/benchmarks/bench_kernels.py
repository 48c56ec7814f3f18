"""Benchmark: compiled deletion-update kernels vs the numpy fallback.

Times three workloads on random Euclidean-cloud instances:

  chain   a full deletion chain (n-1 rank-1 pivots down to one point)
  table   magnitudes of all 2^n subsets via the lattice walk
  oracle  the same table recomputed per subset from the distance matrix

Run:  python3 benchmarks/bench_kernels.py [n]
"""

import sys
import time

import numpy as np

import magkit as mk
from magkit import _kernels_py

try:
    from magkit import _kernels_cy
except ImportError:
    _kernels_cy = None


def full_state(space):
    data = mk.similarity_data(space)
    coeffs = mk.coefficient_data(space)
    return (
        np.ascontiguousarray(coeffs.pinv),
        np.ascontiguousarray(data.weighting / data.magnitude),
        1.0 / data.magnitude,
    )


def time_call(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def run_chain(impl, kdag, p, inv):
    def go():
        state = (kdag.copy(), p.copy(), inv)
        while state[0].shape[0] > 1:
            state = impl.delete_index(
                np.ascontiguousarray(state[0]), np.ascontiguousarray(state[1]),
                state[2], 0,
            )
        return state[2]

    return go


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 14
    rng = np.random.default_rng(7)
    space = mk.from_points_euclidean(rng.normal(size=(n, 3)))
    kdag, p, inv = full_state(space)
    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.insert(0, ("cython", _kernels_cy))
    else:
        print("compiled kernels not built; showing the fallback only")
    print(f"n = {n} points, {2**n - 1} subsets, active backend: {mk.kernel_backend}\n")
    print(f"{'workload':<10} {'backend':<8} {'best time':>12}")

    results = {}
    for name, impl in backends:
        t, value = time_call(run_chain(impl, kdag, p, inv))
        results[("chain", name)] = value
        print(f"{'chain':<10} {name:<8} {t * 1e6:>10.1f} us")
    for name, impl in backends:
        t, table = time_call(
            lambda impl=impl: impl.subset_inverse_magnitudes(kdag, p, inv), repeat=3
        )
        results[("table", name)] = table
        print(f"{'table':<10} {name:<8} {t * 1e3:>10.1f} ms")
    t, oracle = time_call(
        lambda: mk.subset_magnitude_table(space, "recompute"), repeat=1
    )
    print(f"{'oracle':<10} {'numpy':<8} {t * 1e3:>10.1f} ms")

    # parity of every backend against the recompute oracle
    for name, _ in backends:
        table = results[("table", name)]
        dev = np.nanmax(np.abs(1.0 / table[1:] - oracle[1:]) / np.abs(oracle[1:]))
        chain_dev = abs(1.0 / results[("chain", name)] - 1.0)  # one point left
        print(f"\n{name} vs oracle: table {dev:.2e}, final chain magnitude {chain_dev:.2e}")
        assert dev < 1e-9 and chain_dev < 1e-9


if __name__ == "__main__":
    main()
