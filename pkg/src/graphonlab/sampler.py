"""W-random graphs from block graphons.

Node labels are drawn i.i.d. uniform over the ``k`` equal blocks, then each
pair is joined independently with the block-pair probability. Two exact
samplers are provided: a dense one that draws a uniform per pair, and a
sparse one that walks each block-pair class with geometric skips so the work
is proportional to the number of edges produced.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .core import as_array
from .errors import TooFewNodes
from .rng import as_generator

SPARSE_MEAN_THRESHOLD = 0.05


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """Undirected simple graph with 0-based nodes.

    ``edges`` is an ``(m, 2)`` integer array of pairs ``i < j`` sorted
    lexicographically. ``labels`` (0-based block indices) and the pair
    probability matrix ``h`` are present only when latents were kept.
    """

    n: int
    edges: np.ndarray
    labels: np.ndarray | None = None
    h: np.ndarray | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    def has_edge(self, i, j) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.int8)
        if self.m:
            adj[self.edges[:, 0], self.edges[:, 1]] = 1
            adj[self.edges[:, 1], self.edges[:, 0]] = 1
        return adj

    def __eq__(self, other):
        if not isinstance(other, SampledGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)


def from_edges(n, edges, labels=None, h=None) -> SampledGraph:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e):
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
        if e.min() < 0 or e.max() >= n:
            raise ValueError("edge endpoint out of range")
    e.setflags(write=False)
    return SampledGraph(int(n), e, labels, h)


def sample_labels(n, k, rng=None) -> np.ndarray:
    """``n`` i.i.d. uniform block indices in ``0..k-1``."""
    gen = as_generator(rng)
    return gen.integers(0, k, size=n, dtype=np.int64)


def _triu_unrank(t, m):
    """Map linear indices over the strict upper triangle of an m x m grid to (i, j)."""
    t = np.asarray(t, dtype=np.int64)
    b = 2 * m - 1
    i = np.floor((b - np.sqrt(np.maximum(b * b - 8.0 * t, 0.0))) / 2).astype(np.int64)
    i = np.clip(i, 0, m - 2)

    def start(r):
        return r * (2 * m - r - 1) // 2

    i = np.where(start(i) > t, i - 1, i)
    i = np.where(start(i + 1) <= t, i + 1, i)
    j = t - start(i) + i + 1
    return i, j


def _geometric_hits(total, p, gen):
    """Sorted indices in ``[0, total)`` each included independently with probability ``p``."""
    if total <= 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    batch = max(16, int(total * p * 1.1) + 16)
    while True:
        gaps = gen.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        keep = idx[idx < total]
        out.append(keep)
        if len(keep) < batch:
            break
        pos = int(idx[-1])
    return np.concatenate(out).astype(np.int64)


def _edges_dense(w, labels, gen):
    n = len(labels)
    iu, ju = np.triu_indices(n, 1)
    probs = w[labels[iu], labels[ju]]
    hit = gen.random(len(iu)) < probs
    return np.stack([iu[hit], ju[hit]], axis=1)


def _edges_sparse(w, labels, gen):
    k = w.shape[0]
    groups = [np.flatnonzero(labels == a) for a in range(k)]
    parts = []
    for a in range(k):
        na = len(groups[a])
        for b in range(a, k):
            p = float(w[a, b])
            if a == b:
                hits = _geometric_hits(na * (na - 1) // 2, p, gen)
                i, j = _triu_unrank(hits, na)
                u, v = groups[a][i], groups[a][j]
            else:
                nb = len(groups[b])
                hits = _geometric_hits(na * nb, p, gen)
                u, v = groups[a][hits // nb], groups[b][hits % nb]
            parts.append(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1))
    return np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)


def sample_graph(w, n, rng=None, keep_latents=False, method="auto") -> SampledGraph:
    """Draw one graph from ``G_n(W)``.

    ``method`` is ``"dense"``, ``"sparse"`` or ``"auto"`` (sparse when the
    mean block value is below 0.05). Both paths give the same distribution.
    """
    if n < 1:
        raise TooFewNodes("need at least one node")
    wa = as_array(w)
    gen = as_generator(rng)
    labels = sample_labels(n, wa.shape[0], gen)
    if method == "auto":
        method = "sparse" if wa.mean() < SPARSE_MEAN_THRESHOLD else "dense"
    if method == "dense":
        edges = _edges_dense(wa, labels, gen)
    elif method == "sparse":
        edges = _edges_sparse(wa, labels, gen)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    g = from_edges(n, edges)
    if keep_latents:
        h = wa[labels[:, None], labels[None, :]]
        labels.setflags(write=False)
        h.setflags(write=False)
        g = SampledGraph(g.n, g.edges, labels, h)
    return g


def empirical_edge_density(g: SampledGraph) -> float:
    if g.n < 2:
        raise TooFewNodes("edge density needs at least two nodes")
    return g.m / math.comb(g.n, 2)
