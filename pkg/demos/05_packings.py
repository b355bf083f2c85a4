"""
Packings of hard instances
==========================

Sample binary matrices that stay far apart under every row and column
relabeling, then turn them into small perturbations of a constant graphon.
"""

import itertools

from graphonlab import RngSeed
from graphonlab.align import delta_hathat2_exact
from graphonlab.core import HardInstanceParams
from graphonlab.packing import (
    chernoff_collision_bound,
    packing_to_graphons,
    sample_packing_set,
    separation_lower_bound,
    verify_packing,
)

s = sample_packing_set(k=6, count=8, target=4, rng=RngSeed(11))
print("members:", [b.to_bitstring() for b in s.members])
print("certified min distance:", s.certified_min_distance, "recheck:", verify_packing(s))

params = HardInstanceParams(n=6, k=6, rho=1.0, c=0.25)
ws = packing_to_graphons(s, params)
d = min(delta_hathat2_exact(x, y).distance for x, y in itertools.combinations(ws, 2))
print(f"closest pair {d:.4f}, guaranteed {separation_lower_bound(4, params):.4f}")

# the union bound is vacuous at this size
print("collision bound k=8, t=11:", chernoff_collision_bound(8, 11))
