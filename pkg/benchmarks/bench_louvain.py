#!/usr/bin/env python3
"""Benchmark the Louvain local-move kernel: compiled extension vs pure Python.

Builds planted-partition graphs of increasing size, then times (a) a single
local-move pass through each backend and (b) a full multi-level Louvain run
with the backend swapped in.  Both backends must produce identical labels;
the script aborts if they ever disagree.
"""

import argparse
import importlib
from time import perf_counter

import numpy as np

from mosaicstream._kernels import COMPILED, _louvain_py
from mosaicstream.detect import Graph, louvain

detect_mod = importlib.import_module("mosaicstream.detect")

BACKENDS = [("pure", _louvain_py.local_move_pass)]
if COMPILED:
    from mosaicstream._kernels import _louvain_cy

    BACKENDS.append(("compiled", _louvain_cy.local_move_pass))


def planted_graph(n: int, communities: int, rng: np.random.Generator) -> Graph:
    """Planted-partition graph: dense inside blocks, sparse across."""
    labels = rng.integers(0, communities, n)
    p_in, p_out = min(1.0, 16.0 / (n / communities)), 2.0 / n
    pairs = {}
    us, vs = np.triu_indices(n, k=1)
    same = labels[us] == labels[vs]
    draw = rng.random(us.size)
    keep = draw < np.where(same, p_in, p_out)
    for u, v in zip(us[keep], vs[keep]):
        pairs[(int(u), int(v))] = 1.0
    return Graph.from_pairs(n, pairs)


def time_kernel(fn, g: Graph, repeats: int, rng: np.random.Generator) -> float:
    node_comm0 = np.arange(g.n, dtype=np.int64)
    order = rng.permutation(g.n).astype(np.int64)
    inv_two_m = 1.0 / (2.0 * g.m) if g.m else 0.0
    best = np.inf
    for _ in range(repeats):
        node_comm = node_comm0.copy()
        comm_deg = g.degrees.copy()
        t0 = perf_counter()
        fn(
            g.indptr,
            g.indices,
            g.weights,
            g.degrees,
            node_comm,
            comm_deg,
            order,
            inv_two_m,
            1.0,
        )
        best = min(best, perf_counter() - t0)
    return best


def time_louvain(fn, g: Graph, repeats: int) -> tuple[float, np.ndarray]:
    detect_mod.local_move_pass = fn
    best, labels = np.inf, None
    try:
        for _ in range(repeats):
            t0 = perf_counter()
            labels = louvain(g, seed=0)
            best = min(best, perf_counter() - t0)
    finally:
        detect_mod.local_move_pass = BACKENDS[-1][1]
    return best, labels


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        type=lambda s: [int(x) for x in s.split(",")],
        default=[500, 2000, 8000],
        help="comma-separated node counts",
    )
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not COMPILED:
        print("note: compiled kernel unavailable, timing pure backend only")
    header = f"{'n':>7} {'edges':>9} {'backend':>9} {'pass ms':>9} {'louvain ms':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        rng = np.random.default_rng(args.seed)
        g = planted_graph(n, max(2, n // 100), rng)
        base_pass = base_full = None
        ref_labels = None
        for name, fn in BACKENDS:
            t_pass = time_kernel(fn, g, args.repeats, np.random.default_rng(1))
            t_full, labels = time_louvain(fn, g, args.repeats)
            if ref_labels is None:
                ref_labels = labels
            elif not np.array_equal(ref_labels, labels):
                print(f"FATAL: backends disagree at n={n}")
                return 1
            if base_pass is None:
                base_pass, base_full = t_pass, t_full
                speedup = ""
            else:
                speedup = f"{base_full / t_full:7.1f}x"
            print(
                f"{n:>7} {int(g.m):>9} {name:>9} "
                f"{t_pass * 1e3:>9.2f} {t_full * 1e3:>11.2f} {speedup:>8}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
