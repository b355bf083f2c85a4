"""
Aligning block matrices
=======================

Two block matrices can describe the same graphon up to relabeling. The
joint-permutation distance aligns rows and columns together; the separate
version lets them move independently and can only be smaller.
"""

import numpy as np

from graphonlab import RngSeed
from graphonlab.core import l2_distance, make_block_matrix
from graphonlab.align import delta2_upper_via_blowup, delta_hat2_exact, delta_hathat2_exact

a = make_block_matrix([[1, 0, 1], [0, 1, 0], [1, 0, 1]])
b = make_block_matrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]])

print("entrywise distance:", l2_distance(a, b))
res = delta_hat2_exact(a, b)
print("joint alignment:", res.distance, "via", res.row_perm)
print("separate alignment:", delta_hathat2_exact(a, b).distance)

# random pair: the blow-up bound sits between the two exact distances
rng = np.random.default_rng(0)
x = rng.uniform(size=(4, 4))
y = rng.uniform(size=(4, 4))
x, y = (x + x.T) / 2, (y + y.T) / 2
lo = delta_hathat2_exact(x, y).distance
hi = delta_hat2_exact(x, y).distance
mid = delta2_upper_via_blowup(x, y, m=2, rng=RngSeed(0))
print(f"{lo:.4f} <= {mid:.4f} <= {hi:.4f}")
