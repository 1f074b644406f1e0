"""Timing and memory probe, run in a fresh interpreter by the acceptance suite.

Computes one correlation surface per variable pair of a synthetic dataset
(bisquare kernel, adaptive proportion 0.2, Pearson) after a small warm-up
run, and reports the best wall time plus the peak resident-set growth
observed while computing. Usage: perf_probe.py N N_VARS REPEATS
"""

import json
import sys
import threading
import time

import psutil

from gwcorr.engine import AnalysisSpec, compute_surface
from gwcorr.geodata import listwise_complete
from gwcorr.synth import synth_dataset


def surface_sweep(dataset):
    names = dataset.variable_names
    dm, coords, _ = listwise_complete(dataset, names)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            spec = AnalysisSpec(mode="correlation", method="pearson",
                                var_a=names[a], var_b=names[b],
                                kernel="bisquare", bandwidth_proportion=0.2)
            compute_surface(dm, coords, spec)


def main():
    n = int(sys.argv[1])
    n_vars = int(sys.argv[2])
    repeats = int(sys.argv[3])

    surface_sweep(synth_dataset(64, n_vars, seed=0))  # JIT warm-up

    dataset = synth_dataset(n, n_vars, seed=0)
    dm_ready = listwise_complete(dataset, dataset.variable_names)  # touch data
    del dm_ready

    proc = psutil.Process()
    baseline = proc.memory_info().rss
    peak = [baseline]
    stop = threading.Event()

    def sample():
        while not stop.is_set():
            rss = proc.memory_info().rss
            if rss > peak[0]:
                peak[0] = rss
            time.sleep(0.002)

    sampler = threading.Thread(target=sample, daemon=True)
    sampler.start()
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        surface_sweep(dataset)
        best = min(best, time.perf_counter() - t0)
    stop.set()
    sampler.join()

    print(json.dumps({
        "n": n,
        "wall_s": best,
        "aux_mb": (peak[0] - baseline) / (1024.0 * 1024.0),
    }))


if __name__ == "__main__":
    main()
