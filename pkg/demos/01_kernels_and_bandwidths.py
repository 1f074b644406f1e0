"""
Kernels and adaptive bandwidths
===============================

The weighting scheme behind every surface: distances from a focal point,
an adaptive bandwidth (k nearest neighbors as a proportion of the data),
and five distance-decay kernels.
"""

import numpy as np

from gwcorr import adaptive_bandwidth_at, kernel_weight, weight_vector_at
from gwcorr.weights import KERNELS, adaptive_k

rng = np.random.default_rng(0)
coords = rng.uniform(0.0, 100.0, size=(200, 2))

# An adaptive bandwidth is the distance to the k-th nearest neighbor,
# counting the focal point itself as neighbor #1.
for proportion in (0.1, 0.25, 0.5, 1.0):
    k = adaptive_k(len(coords), proportion)
    b = adaptive_bandwidth_at(0, coords, proportion)
    print(f"proportion {proportion:>4}: k = {k:>3} neighbors -> bandwidth {b:7.2f}")

# The five kernels at a few distances, with bandwidth 10. The compact
# kernels cut off strictly below the bandwidth; gaussian and exponential
# never reach zero.
print(f"\n{'d':>6} " + " ".join(f"{k:>12}" for k in KERNELS))
for d in (0.0, 2.5, 5.0, 9.99, 10.0, 20.0):
    row = " ".join(f"{kernel_weight(k, d, 10.0):12.6f}" for k in KERNELS)
    print(f"{d:6.2f} {row}")

# A full weight vector bundles all of that for one focal location.
wv = weight_vector_at(0, coords, "bisquare", 0.25)
print(f"\nfocal 0, bisquare, proportion 0.25: bandwidth {wv.bandwidth_used:.2f}, "
      f"{np.count_nonzero(wv.weights)} of {len(coords)} weights nonzero, "
      f"self weight {wv.weights[0]:.0f}")
