"""Time each edge-scan kernel in its numba and numpy variants.

    python3 benchmarks/bench_kernels.py [--n 90] [--p 0.3] [--repeat 5]

The numba timings exclude the first (compiling) call.  Outputs are compared
before timing, so a mismatch aborts the run.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from loosetile import _kernels as K
from loosetile.constructions import random_3graph


def kernel_inputs(n: int, p: float, seed: int) -> dict[str, tuple]:
    H = random_3graph(n, p, seed).hypergraph
    rng = np.random.default_rng(seed)
    edges = np.ascontiguousarray(H.edges, dtype=np.int64)
    mask = rng.random(n) < 0.5
    member = rng.random((n, 3)) < 0.5
    labels = rng.integers(0, 3, n).astype(np.int64)
    adj = rng.random((n, n)) < 0.5
    adj = np.triu(adj, 1)
    adj = adj | adj.T
    return {
        "codegree_matrix": (edges, n),
        "vertex_degrees": (edges, n),
        "degree_into": (edges, n, mask),
        "pair_degree_into": (edges, n, mask),
        "induced_count": (edges, mask),
        "assignable_count": (edges, member),
        "index_histogram": (edges, labels, 3),
        "pack_pair_bits": (edges, n),
        "triangle_count": (adj,),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=90)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    inputs = kernel_inputs(args.n, args.p, args.seed)
    print(f"n={args.n} p={args.p} edges={len(inputs['vertex_degrees'][0])} numba={K.HAVE_NUMBA}")
    print(f"{'kernel':<18} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name in K.KERNELS:
        call_np = getattr(K, f"{name}_numpy")
        call_nb = getattr(K, f"{name}_numba")
        a = inputs[name]
        if not np.array_equal(np.asarray(call_np(*a)), np.asarray(call_nb(*a))):
            raise SystemExit(f"{name}: numba and numpy outputs differ")
        t_np = min(timeit.repeat(lambda: call_np(*a), number=1, repeat=args.repeat)) * 1000
        t_nb = min(timeit.repeat(lambda: call_nb(*a), number=1, repeat=args.repeat)) * 1000
        print(f"{name:<18} {t_np:>10.3f} {t_nb:>10.3f} {t_np / max(t_nb, 1e-9):>7.1f}x")


if __name__ == "__main__":
    main()
