"""
Step graphons and W-random graphs
=================================

Build a planted-partition graphon, draw graphs from it and look at how the
edge density tracks the graphon's mean.
"""

import numpy as np

from graphonlab import RngSeed, blow_up, empirical_edge_density, planted_partition, sample_graph

# three equal communities, denser inside than across
w = planted_partition(3, 0.6, 0.1)
print(w.entries)

# the mean entry is the expected edge density
print("graphon mean:", w.entries.mean())
for n in (50, 200, 1000):
    g = sample_graph(w, n, RngSeed(1, n), keep_latents=True)
    print(n, "nodes:", g.m, "edges, density", round(empirical_edge_density(g), 4))

# labels are kept on request; count the community sizes
g = sample_graph(w, 300, RngSeed(2), keep_latents=True)
print("community sizes:", np.bincount(g.labels, minlength=3))

# splitting every block into two gives the same graphon
print("blown-up shape:", blow_up(w, 2).entries.shape)

# sparse graphons use geometric skipping instead of a dense coin flip per pair
sparse = planted_partition(2, 0.002, 0.001)
g = sample_graph(sparse, 5000, RngSeed(3))
print("sparse graph:", g.m, "edges among", g.n, "nodes")
