"""Time the compiled and numpy first-meeting kernels on the two real
workloads: the 15x15 not-meet matrix and the full 12-step game.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from rendezvous import kernels
from rendezvous.blocks import BLOCK_LEN, _tour_sequences, outcome_tables
from rendezvous.game import _class_polys, enumerate_paths
from rendezvous.patterns import y_distribution


def workloads():
    tables = outcome_tables()
    acts, cls, pats = _tour_sequences(4)
    yield "not-meet matrix k=4", (acts, cls, acts, cls, tables, len(pats), len(pats), BLOCK_LEN)
    paths = enumerate_paths(y_distribution())
    pacts = np.array([p.actions for p in paths], dtype=np.int8)
    pcls, weights, _ = _class_polys(paths)
    yield "full game, y law", (pacts, pcls, pacts, pcls, tables, len(weights), len(weights), BLOCK_LEN)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the numpy fallback is timed")
    for name, wl in workloads():
        results = {}
        for backend in backends:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = kernels.first_meet_counts(*wl, backend=backend)
                best = min(best, time.perf_counter() - t0)
            results[backend] = (best, out)
        outs = [o for _, o in results.values()]
        same = all(np.array_equal(outs[0], o) for o in outs[1:])
        line = ", ".join(f"{b}: {t:.3f}s" for b, (t, _) in results.items())
        if len(results) == 2:
            line += f", speedup x{results['python'][0] / results['cython'][0]:.1f}"
        print(f"{name:<22} {line}  (identical output: {same})")


if __name__ == "__main__":
    main()
