"""KL divergences between W-random graph laws, Fano's bound, and the
planted-partition contiguity check.

All logarithms are natural; divergences are in nats.
"""

from dataclasses import dataclass
import math

import numpy as np

from .core import HardInstanceParams, as_array, blow_up
from .errors import (
    DegenerateParameters,
    DimensionMismatch,
    HypothesisViolated,
    InfiniteDivergence,
    PackingTooSmall,
    TooLargeToEnumerate,
)

MAX_ENUM_NODES = 5
MAX_LABELINGS = 10**6
_LABEL_CHUNK = 512


@dataclass(frozen=True, eq=False)
class GraphDistribution:
    """Exact law of ``G_n(W)`` over all labeled graphs on ``n`` nodes.

    Graph ``g`` is the bitmask whose bit ``e`` says whether ``pairs[e]`` is
    an edge; ``pairs`` lists ``(i, j)``, ``i < j``, in row-major order.
    """

    n: int
    probs: np.ndarray
    pairs: tuple

    @property
    def log_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.probs)

    def prob(self, edges) -> float:
        index = {p: e for e, p in enumerate(self.pairs)}
        mask = 0
        for i, j in edges:
            mask |= 1 << index[(min(i, j), max(i, j))]
        return float(self.probs[mask])


@dataclass(frozen=True)
class FanoInput:
    kl_diameter: float
    packing_count: float
    epsilon: float = 1.0


@dataclass(frozen=True)
class ContiguityReport:
    n: int
    k: int
    rho: float
    epsilon: float
    q: float
    p: float
    d: float
    lam: float
    lhs: float
    rhs: float
    condition_holds: bool
    separation: float


def _enumeration_guard(k, n):
    if n > MAX_ENUM_NODES or k**n > MAX_LABELINGS:
        raise TooLargeToEnumerate(f"n={n}, k={k}: need n <= {MAX_ENUM_NODES} and k^n <= {MAX_LABELINGS}")


def exact_graph_distribution(w, n) -> GraphDistribution:
    """Mixture over all ``k^n`` label assignments of the product Bernoulli laws."""
    wa = as_array(w)
    k = wa.shape[0]
    _enumeration_guard(k, n)
    iu, ju = np.triu_indices(n, 1)
    pairs = tuple(zip(iu.tolist(), ju.tolist()))
    n_graphs = 1 << len(pairs)
    total = np.zeros(n_graphs)
    n_lab = k**n
    for start in range(0, n_lab, _LABEL_CHUNK):
        idx = np.arange(start, min(start + _LABEL_CHUNK, n_lab))
        labels = np.stack(np.unravel_index(idx, (k,) * n), axis=1) if n else np.zeros((len(idx), 0), int)
        h = wa[labels[:, iu], labels[:, ju]]
        probs = np.ones((len(idx), 1))
        # append edge e as the next most significant bit
        for e in range(len(pairs)):
            he = h[:, e : e + 1]
            probs = np.concatenate([probs * (1.0 - he), probs * he], axis=1)
        total += probs.sum(axis=0)
    total /= n_lab
    total.setflags(write=False)
    return GraphDistribution(n, total, pairs)


def exact_kl(w, wp, n, lenient=False) -> float:
    """``D(G_n(w) || G_n(wp))`` by full enumeration.

    Returns ``inf`` in lenient mode when ``wp`` gives zero probability to a
    graph ``w`` can produce; raises :class:`InfiniteDivergence` otherwise.
    """
    p = exact_graph_distribution(w, n).probs
    q = exact_graph_distribution(wp, n).probs
    pos = p > 0
    if np.any(q[pos] <= 0):
        if lenient:
            return math.inf
        raise InfiniteDivergence("second law assigns zero probability to a reachable graph")
    val = float(np.sum(p[pos] * np.log(p[pos] / q[pos])))
    return max(val, 0.0)


def _common_refinement(a, b):
    ka, kb = a.shape[0], b.shape[0]
    if ka == kb:
        return a, b
    L = math.lcm(ka, kb)
    return blow_up(a, L // ka), blow_up(b, L // kb)


def kl_upper_bound(w, wp, n) -> float:
    """``8 n^2 ||w - wp||_2^2``, valid when both graphons take values in [1/2, 3/4]."""
    a, b = as_array(w), as_array(wp)
    for m in (a, b):
        if m.min() < 0.5 or m.max() > 0.75:
            raise HypothesisViolated("kl_upper_bound needs all entries in [1/2, 3/4]")
    a, b = _common_refinement(a, b)
    if a.shape != b.shape:
        raise DimensionMismatch("could not refine to a common block count")
    return 8.0 * n * n * float(np.mean((a - b) ** 2))


def kl_diameter_qfamily(params: HardInstanceParams) -> dict:
    """KL diameter bound for the perturbed family: raw ``8 n^2 (2 c rho eta)^2`` and simplified ``32 c^2 k^2 rho``.

    The family's entries lie in ``rho (1/2 +- c eta)``, not in [1/2, 3/4], so
    :func:`kl_upper_bound` does not literally apply; the bound is evaluated
    as stated rather than checked.
    """
    n, k, rho, c, eta = params.n, params.k, params.rho, params.c, params.eta
    raw = 8.0 * n * n * (2.0 * c * rho * eta) ** 2
    simplified = 32.0 * c * c * k * k * rho
    return {"raw": raw, "simplified": simplified, "eta": eta}


def fano_bound(kl_diameter, packing_count=None) -> float:
    """``1 - (kl + 1) / ln M``; may be negative, clamp at 0 to interpret."""
    if isinstance(kl_diameter, FanoInput):
        kl_diameter, packing_count = kl_diameter.kl_diameter, kl_diameter.packing_count
    if packing_count is None or packing_count < 2:
        raise PackingTooSmall(f"packing count must be at least 2, got {packing_count}")
    return 1.0 - (kl_diameter + 1.0) / math.log(packing_count)


def contiguity_report(n, k, rho) -> ContiguityReport:
    """Planted partition vs Erdos-Renyi parameters and the contiguity condition.

    eps = min(sqrt(rho k ln k / n), rho), q = (k-1)/(2k^2) * n eps^2 / ln(k-1),
    p = eps + q, d = n (p + (k-1) q) / k, lam = n (p - q) / (d k); the
    condition is d lam^2 (k-1) / 2 <= ln(k-1).
    """
    if k < 3:
        raise DegenerateParameters("need k >= 3 so that ln(k - 1) > 0")
    if not 0 < rho <= 1 or n < 1:
        raise DegenerateParameters(f"invalid n={n} or rho={rho}")
    eps = min(math.sqrt(rho * k * math.log(k) / n), rho)
    q = 0.5 * (k - 1) / k**2 * n * eps**2 / math.log(k - 1)
    p = eps + q
    if p > 1:
        raise DegenerateParameters(f"within-block probability p={p} exceeds 1")
    d = n * (p + (k - 1) * q) / k
    if d == 0:
        raise DegenerateParameters("expected degree is zero")
    lam = n * (p - q) / (d * k)
    lhs = d * lam**2 * (k - 1) / 2
    rhs = math.log(k - 1)
    return ContiguityReport(
        n=n, k=k, rho=rho, epsilon=eps, q=q, p=p, d=d, lam=lam,
        lhs=lhs, rhs=rhs, condition_holds=lhs <= rhs, separation=eps / math.sqrt(k),
    )
