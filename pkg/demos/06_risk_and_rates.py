"""
Estimation risk against the rate curves
=======================================

Monte-Carlo risk of a few estimators on a hard instance, next to the
unit-constant lower and upper rate curves. The rates only describe shape,
so compare orderings rather than values.
"""

from graphonlab import RngSeed
from graphonlab.bench import RateQuery, lower_rate, upper_rate
from graphonlab.core import HardInstanceParams, q_matrix
from graphonlab.estimators import empirical_risk, make_estimator
from graphonlab.packing import random_binary_sym

n, k = 64, 8
b = random_binary_sym(k, RngSeed(1))
for rho in (k * k / n**2, 0.1, 0.5):
    truth = q_matrix(b, HardInstanceParams(n, k, rho))
    q = RateQuery(n, k, rho)
    print(f"rho={rho:.4f} lower={lower_rate(q)['total']:.4f} upper={upper_rate(q):.4f}")
    for name, k_fit in (("trivial", None), ("density", None), ("blocklsq", 2), ("blocklsq", k)):
        est = make_estimator(name, k_fit=k_fit)
        r = empirical_risk(est, truth, n, trials=5, rng=RngSeed(2))
        label = name if k_fit is None else f"{name}(k={k_fit})"
        print(f"   {label:14s} risk in [{r.mean_lower:.4f}, {r.mean_upper:.4f}]")
