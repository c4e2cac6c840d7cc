"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--sizes 100,300,1000] [--dims 2,10] [--repeat 3]

Reports the best-of-``repeat`` wall time of one full-search epoch and of
all-pairs Dijkstra on a Swiss-roll k-NN graph, per backend, plus the ratio.
"""

import argparse
import time

import numpy as np

from csmds import compute_distance_matrix, config_for_variant, validate_target
from csmds._backend import BACKENDS
from csmds.engine import init_run
from csmds.geometry import generate_swissroll, knn_graph


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def epoch_case(n, l, repeat):
    pts = np.random.default_rng(n).random((n, 5))
    t = validate_target(compute_distance_matrix(pts))
    cfg = config_for_variant("fs", l, {"seed": 1})
    emb, probs, state = init_run(t, cfg)
    uniforms = np.zeros((n, 2 * l))  # full search evaluates everything regardless

    def run(kernels):
        x, d, p = emb.coords.copy(), emb.distances.copy(), probs.probs.copy()
        moves, ps = np.empty(n, dtype=np.int64), np.empty(n)
        kernels.csmds_epoch(t.values, x, d, p, uniforms, 1.0, state.stress, 0.0, 0.0, moves, ps)

    return {name: best_of(lambda k=k: run(k), repeat) for name, k in BACKENDS.items()}


def dijkstra_case(n, repeat):
    g = knn_graph(generate_swissroll(n, 0.0, seed=0), 8)
    return {name: best_of(lambda k=k: k.dijkstra_all_pairs(g.indptr, g.indices, g.weights, g.n),
                          repeat)
            for name, k in BACKENDS.items()}


def row(label, times):
    py = times["python"]
    cy = times.get("cython")
    ratio = f"{py / cy:8.1f}x" if cy else "       -"
    cy_text = f"{cy * 1e3:10.2f}" if cy else "         -"
    print(f"{label:<28}{py * 1e3:10.2f}{cy_text}{ratio}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,300,1000")
    ap.add_argument("--dims", default="2,10")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    dims = [int(s) for s in args.dims.split(",")]
    if "cython" not in BACKENDS:
        print("compiled extension not built; timing the Python backend only")
    print(f"{'case':<28}{'python ms':>10}{'cython ms':>10}{'speedup':>9}")
    for n in sizes:
        for l in dims:
            row(f"FS epoch N={n} L={l}", epoch_case(n, l, args.repeat))
    for n in sizes:
        row(f"Dijkstra all-pairs N={n}", dijkstra_case(n, args.repeat))


if __name__ == "__main__":
    main()
