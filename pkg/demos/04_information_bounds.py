"""
How distinguishable are two graphons?
=====================================

Exact KL divergences between small-graph laws, the quadratic upper bound,
and Fano's inequality turning a packing and a KL diameter into an error
lower bound.
"""

import math

from graphonlab import infotheory
from graphonlab.core import HardInstanceParams, planted_partition

w, wp = [[0.5]], [[0.75]]
for n in (2, 3, 4):
    print(n, "nodes: KL", round(infotheory.exact_kl(w, wp, n), 4),
          "bound", infotheory.kl_upper_bound(w, wp, n))

# two communities with p = q collapse to a single block
a = infotheory.exact_graph_distribution(planted_partition(2, 0.4, 0.4), 4).probs
b = infotheory.exact_graph_distribution([[0.4]], 4).probs
print("mixture collapse gap:", abs(a - b).max())

params = HardInstanceParams(n=200, k=10, rho=0.01, c=0.1)
diam = infotheory.kl_diameter_qfamily(params)
print("KL diameter:", diam)
for m in (10, 1e3, 1e6):
    print(f"M={m:g}: Fano bound {max(infotheory.fano_bound(diam['raw'], m), 0):.3f}")

r = infotheory.contiguity_report(10_000, 4, 0.01)
print(f"eps={r.epsilon:.4f} p={r.p:.4f} q={r.q:.4f} condition holds: {r.condition_holds}")
print("log(k-1) =", math.log(3))
