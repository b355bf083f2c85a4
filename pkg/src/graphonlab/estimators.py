"""Baseline graphon estimators and a Monte-Carlo risk harness.

Risk is reported as a bracket: the separate-permutation distance (a lower
proxy for the graphon distance) and a joint-permutation distance on a common
refinement (a certified upper proxy). Estimates with ``k_hat`` blocks are
compared to a ``k``-block truth after blowing both up to ``lcm(k_hat, k)``
blocks, which is exact for equal-block step graphons.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .align import HATHAT2_EXACT_CAP, delta2_upper_via_blowup, delta_hathat2
from .core import BlockMatrix, as_array, blow_up, make_block_matrix
from .errors import ConfigInvalid, TooFewNodes
from .rng import RngSeed, as_generator
from .sampler import SampledGraph, empirical_edge_density, sample_graph

MAX_LSQ_ITERS = 100


@dataclass(frozen=True)
class Estimate:
    matrix: BlockMatrix
    meta: dict = field(default_factory=dict)

    @property
    def k_hat(self) -> int:
        return self.matrix.k


def trivial_estimator(g: SampledGraph, rng=None) -> Estimate:
    """The input-independent zero graphon."""
    return Estimate(make_block_matrix([[0.0]]), {"objective": None, "iterations": 0, "restarts": 0})


def density_estimator(g: SampledGraph, rng=None) -> Estimate:
    if g.n < 2:
        raise TooFewNodes("density estimator needs at least two nodes")
    rho_hat = empirical_edge_density(g)
    return Estimate(make_block_matrix([[rho_hat]]), {"objective": None, "iterations": 0, "restarts": 0})


def oracle_estimator(truth):
    """Estimator that ignores the graph and returns the truth (for testing the harness)."""
    truth = truth if isinstance(truth, BlockMatrix) else make_block_matrix(truth)

    def estimate(g, rng=None):
        return Estimate(make_block_matrix(truth.entries), {"objective": 0.0, "iterations": 0, "restarts": 0})

    return estimate


def _block_means(adj, z, k):
    onehot = np.zeros((len(z), k))
    onehot[np.arange(len(z)), z] = 1.0
    sizes = onehot.sum(axis=0)
    edge_sums = onehot.T @ adj @ onehot
    pairs = np.outer(sizes, sizes) - np.diag(sizes)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(pairs > 0, edge_sums / np.where(pairs > 0, pairs, 1), 0.0)
    return theta


def lsq_objective(adj, z, theta) -> float:
    """Sum over node pairs i < j of (A_ij - theta[z_i, z_j])^2."""
    fitted = theta[z[:, None], z[None, :]]
    r = adj - fitted
    np.fill_diagonal(r, 0.0)
    return float(np.sum(r * r)) / 2


def _reassign_pass(adj, z, theta):
    n, k = len(z), theta.shape[0]
    changed = False
    mask = np.ones(n, dtype=bool)
    for v in range(n):
        mask[v] = False
        cost = np.sum((adj[v, mask][None, :] - theta[:, z[mask]]) ** 2, axis=1)
        mask[v] = True
        cur = z[v]
        best = int(np.argmin(cost))
        # stay put on ties; otherwise argmin already picks the lowest index
        if cost[best] < cost[cur]:
            z[v] = best
            changed = True
    return changed


def _fit_once(adj, k, gen, max_iters=MAX_LSQ_ITERS):
    n = adj.shape[0]
    z = gen.integers(0, k, size=n)
    theta = _block_means(adj, z, k)
    obj = lsq_objective(adj, z, theta)
    history = [obj]
    it = 0
    for it in range(1, max_iters + 1):
        changed = _reassign_pass(adj, z, theta)
        theta = _block_means(adj, z, k)
        new = lsq_objective(adj, z, theta)
        assert new <= obj + 1e-9 * max(1.0, obj), "least-squares objective increased"
        obj = new
        history.append(obj)
        if not changed:
            break
    return z, theta, obj, it, history


def block_least_squares(g: SampledGraph, k, restarts=5, rng=None) -> Estimate:
    """Least-squares k-block fit by alternating block means and greedy node moves.

    Best of ``restarts`` random initializations. Groups are reported as
    equal-measure blocks of the estimate.
    """
    if not 1 <= k <= g.n:
        raise ConfigInvalid(f"need 1 <= k <= n, got k={k}, n={g.n}")
    gen = as_generator(rng)
    adj = g.adjacency().astype(np.float64)
    best = None
    for _ in range(max(restarts, 1)):
        z, theta, obj, iters, history = _fit_once(adj, k, gen)
        if best is None or obj < best[2]:
            best = (z.copy(), theta, obj, iters, history)
    z, theta, obj, iters, history = best
    theta = np.clip((theta + theta.T) / 2, 0.0, 1.0)
    meta = {"objective": obj, "iterations": iters, "restarts": max(restarts, 1), "labels": z, "history": history}
    return Estimate(make_block_matrix(theta), meta)


ESTIMATORS = ("trivial", "density", "blocklsq", "oracle")


def make_estimator(name, truth=None, k_fit=None, restarts=5):
    """Look up an estimator by name; returns ``f(graph, rng) -> Estimate``."""
    if name == "trivial":
        return trivial_estimator
    if name == "density":
        return density_estimator
    if name == "blocklsq":
        if k_fit is None:
            raise ConfigInvalid("blocklsq needs k_fit")
        return lambda g, rng=None: block_least_squares(g, k_fit, restarts, rng)
    if name == "oracle":
        if truth is None:
            raise ConfigInvalid("oracle estimator needs the truth")
        return oracle_estimator(truth)
    raise ConfigInvalid(f"unknown estimator {name!r}; choose from {ESTIMATORS}")


def common_refinement(a, b):
    ka, kb = as_array(a).shape[0], as_array(b).shape[0]
    L = math.lcm(ka, kb)
    return blow_up(as_array(a), L // ka), blow_up(as_array(b), L // kb)


def risk_proxies(estimate, truth, m=2, restarts=10, rng=None, cap=HATHAT2_EXACT_CAP):
    """(lower, upper) proxies for the graphon distance between two block graphons."""
    gen = as_generator(rng)
    a, b = common_refinement(estimate, truth)
    upper = delta2_upper_via_blowup(a, b, m=m, restarts=restarts, rng=gen)
    lower = delta_hathat2(a, b, restarts=restarts, rng=gen, cap=cap).distance
    # past the exact cap the lower proxy is a heuristic over-estimate; the
    # upper proxy also bounds it from above, so the tighter of the two is kept
    return min(lower, upper), upper


@dataclass(frozen=True)
class RiskResult:
    lower: np.ndarray
    upper: np.ndarray

    @property
    def trials(self):
        return len(self.lower)

    @staticmethod
    def _se(x):
        return float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0

    @property
    def mean_lower(self):
        return float(np.mean(self.lower))

    @property
    def mean_upper(self):
        return float(np.mean(self.upper))

    @property
    def se_lower(self):
        return self._se(self.lower)

    @property
    def se_upper(self):
        return self._se(self.upper)


def empirical_risk(estimator, w, n, trials, rng=None, m=2, restarts=10) -> RiskResult:
    """Monte-Carlo risk of ``estimator`` against truth ``w`` on ``n``-node graphs.

    Trial ``t`` uses substream ``t`` of ``rng`` so trials are independent and
    replayable in any order.
    """
    if trials < 1:
        raise ConfigInvalid("trials must be at least 1")
    seed = rng if isinstance(rng, RngSeed) else RngSeed(0 if rng is None else int(rng))
    lows, ups = [], []
    for t in range(trials):
        ts = seed.substream(t)
        g = sample_graph(w, n, ts.substream(0))
        est = estimator(g, ts.substream(1))
        lo, up = risk_proxies(est.matrix, w, m=m, restarts=restarts, rng=ts.substream(2))
        lows.append(lo)
        ups.append(up)
    return RiskResult(np.array(lows), np.array(ups))
