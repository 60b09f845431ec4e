"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each workload runs on both backends with identical inputs. Outputs are
compared before timing, and the best of ``--repeat`` runs is reported.
The first numba call is excluded because it pays for compilation.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from fracmatroid import kernels
from fracmatroid.algebra import DEFAULT_PRIME, primitive_root, random_skew
from fracmatroid.corpus import graph_instance
from fracmatroid.hitting_set import _block_dets
from fracmatroid.instance import build_Atilde

P = DEFAULT_PRIME


def workloads(rng: np.random.Generator):
    dense = rng.integers(0, P, size=(48, 48), dtype=np.int64)
    batch = rng.integers(0, P, size=(20000, 6, 6), dtype=np.int64)
    skew = random_skew(40, rng)
    size = 1 << 12
    root = pow(primitive_root(P), (P - 1) // size, P)
    table = np.array([pow(root, k, P) for k in range(size)], dtype=np.int64)
    coeffs = rng.integers(0, P, size=(5, 6, 6), dtype=np.int64)
    degs = np.arange(5, dtype=np.int64) * 3
    vec = rng.integers(0, P, size=1 << 14, dtype=np.int64)
    atilde = build_Atilde(graph_instance([(0, 1), (1, 2), (2, 3), (3, 0)]), (5, 6, 7, 9)).project((1, 2, 3, 4))
    a_degs = np.array(sorted(atilde), dtype=np.int64)
    a_coeffs = np.stack([atilde[int(d)] for d in a_degs])
    a_size = 1 << 10
    a_root = pow(primitive_root(P), (P - 1) // a_size, P)
    a_table = np.array([pow(a_root, k, P) for k in range(a_size)], dtype=np.int64)
    k3 = graph_instance([(0, 1), (1, 2), (0, 2)])

    return {
        "det 48x48": lambda b: b.det(dense, P),
        "rank 48x48": lambda b: b.rank(dense, P),
        "batched det 20000 x 6x6": lambda b: b.batched_det(batch, P),
        "pfaffian 40x40": lambda b: b.pfaffian(skew, P),
        "det on 4096-point root grid (6x6)": lambda b: b.det_on_root_grid(coeffs, degs, table, P),
        "degree probe grid, C4 (8x8, 1024 pts)": lambda b: b.det_on_root_grid(a_coeffs, a_degs, a_table, P),
        "ntt 2^14": lambda b: b.ntt(vec, root, P),
        "hitting-set block, K3 (16384 tuples)": lambda b: _with_backend(b, lambda: _block_dets(k3, (1, 2, 3), 19, 0, 1 << 14)),
    }


def _with_backend(backend, fn):
    saved = kernels.ACTIVE
    kernels.ACTIVE = backend
    try:
        return fn()
    finally:
        kernels.ACTIVE = saved


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", help="also write results to this file")
    args = parser.parse_args()

    if kernels.NUMBA is None:
        raise SystemExit("numba is not importable (or FRACMATROID_DISABLE_NUMBA is set); nothing to compare")
    rows = []
    print(f"{'workload':42s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, run in workloads(np.random.default_rng(args.seed)).items():
        ref = run(kernels.NUMPY)
        got = run(kernels.NUMBA)  # also triggers compilation
        if not np.array_equal(np.asarray(ref), np.asarray(got)):
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(lambda: run(kernels.NUMPY), args.repeat)
        t_nb = best_of(lambda: run(kernels.NUMBA), args.repeat)
        rows.append({"workload": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
        print(f"{name:42s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
