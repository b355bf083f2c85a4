"""
Couplings from doubly stochastic matrices
=========================================

A doubly stochastic matrix is a mixture of permutations. The coupling
distance it induces equals the average aligned distance when the row and
column permutations are drawn independently from that mixture.
"""

import numpy as np

from graphonlab.transport import (
    birkhoff_decompose,
    coupling_distance_sq,
    expected_over_decomposition,
    random_doubly_stochastic,
)

rng = np.random.default_rng(5)
p, truth = random_doubly_stochastic(5, 3, rng)
print(np.round(p.p, 3))

decomp = birkhoff_decompose(p)
for weight, perm in decomp.terms:
    print(f"{weight:.3f}", perm)
print("reconstruction error:", np.abs(decomp.reconstruct() - p.p).max())

a = rng.uniform(size=(5, 5))
b = rng.uniform(size=(5, 5))
a, b = (a + a.T) / 2, (b + b.T) / 2
print("coupling distance^2:", coupling_distance_sq(a, b, p))
print("mixture average:    ", expected_over_decomposition(a, b, decomp))
