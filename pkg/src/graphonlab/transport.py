"""Doubly stochastic block couplings and their Birkhoff decompositions.

A measure-preserving relabeling of ``[0, 1]`` moves mass between the ``k``
blocks of a step graphon; scaled by ``k``, the block-to-block mass matrix is
doubly stochastic. Writing it as a mixture of permutations turns the
relabeled distance into an expectation over independently drawn row and
column permutations, which is what this module computes.

Convention: the permutation matrix of ``sigma`` has a one at
``(sigma[i], i)``, so ``P[a, b]`` is the probability that position ``b`` is
fed from block ``a``.
"""

from dataclasses import dataclass, field

import numpy as np

from .align import apply_perms, objective_sq
from .core import as_array
from .errors import DimensionMismatch, NotDoublyStochastic, NumericalBreakdown
from .rng import as_generator

SUM_TOL = 1e-9
ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DoublyStochastic:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {p.shape}")
        if p.min() < -ZERO_TOL:
            raise NotDoublyStochastic(f"negative entry {p.min()}")
        p[p < 0] = 0.0
        rows, cols = p.sum(axis=1), p.sum(axis=0)
        err = max(np.abs(rows - 1).max(), np.abs(cols - 1).max())
        if err > SUM_TOL:
            raise NotDoublyStochastic(f"row/column sums deviate from 1 by {err:.3g}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def k(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: list = field(default_factory=list)  # [(weight, perm tuple)]

    @property
    def weights(self):
        return np.array([w for w, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        k = len(self.terms[0][1])
        out = np.zeros((k, k))
        for w, perm in self.terms:
            out += w * perm_matrix(perm)
        return out

    def to_json(self):
        return [{"weight": float(w), "perm": [int(i) + 1 for i in perm]} for w, perm in self.terms]


def perm_matrix(perm) -> np.ndarray:
    k = len(perm)
    m = np.zeros((k, k))
    m[np.asarray(perm), np.arange(k)] = 1.0
    return m


def _perfect_matching(support):
    """Kuhn's augmenting paths; columns tried in ascending order for determinism.

    Returns ``match[col] = row`` or None if no perfect matching exists.
    """
    k = support.shape[0]
    adj = [np.flatnonzero(support[r]) for r in range(k)]
    match_col = [-1] * k

    def augment(r, seen):
        for c in adj[r]:
            if seen[c]:
                continue
            seen[c] = True
            if match_col[c] < 0 or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in range(k):
        if not augment(r, [False] * k):
            return None
    return match_col


def birkhoff_decompose(p) -> BirkhoffDecomposition:
    """Greedy peeling into a convex combination of permutation matrices."""
    if not isinstance(p, DoublyStochastic):
        p = DoublyStochastic(p)
    k = p.k
    resid = p.p.copy()
    terms = []
    total = 0.0
    while True:
        support = resid > ZERO_TOL
        if not support.any():
            break
        match = _perfect_matching(support)
        if match is None:
            left = resid.sum() / k
            if left < k * 1e-10:
                break
            raise NumericalBreakdown(f"no perfect matching on the positive support; residual mass {left:.3g}")
        perm = tuple(int(r) for r in match)
        cols = np.arange(k)
        w = float(resid[np.asarray(perm), cols].min())
        resid[np.asarray(perm), cols] -= w
        resid[resid <= ZERO_TOL] = 0.0
        terms.append((w, perm))
        total += w
    if not terms:
        raise NumericalBreakdown("empty decomposition")
    # leftover rounding mass goes onto the last permutation
    w, perm = terms[-1]
    terms[-1] = (w + (1.0 - total), perm)
    return BirkhoffDecomposition(terms)


def random_doubly_stochastic(k, n_terms, rng=None):
    """Explicit convex combination of random permutations.

    Returns ``(DoublyStochastic, [(weight, perm), ...])`` so tests know a
    ground-truth decomposition.
    """
    gen = as_generator(rng)
    w = gen.dirichlet(np.ones(n_terms))
    perms = [tuple(int(x) for x in gen.permutation(k)) for _ in range(n_terms)]
    m = sum(wi * perm_matrix(s) for wi, s in zip(w, perms))
    # renormalize away the Dirichlet rounding
    m = m / m.sum(axis=1, keepdims=True)
    return DoublyStochastic(m), list(zip(w.tolist(), perms))


def coupling_distance_sq(a, b, p) -> float:
    """``sum p[i,i'] p[j,j'] (a[i,j] - b[i',j'])^2`` with block masses ``p = P / k``."""
    a, b = as_array(a), as_array(b)
    pm = p.p if isinstance(p, DoublyStochastic) else np.asarray(p, dtype=np.float64)
    k = a.shape[0]
    if a.shape != b.shape or pm.shape != a.shape:
        raise DimensionMismatch(f"shapes {a.shape}, {b.shape}, {pm.shape} do not agree")
    q = pm / k
    if k <= 40:
        diff2 = (a[:, :, None, None] - b[None, None, :, :]) ** 2
        return float(np.einsum("ia,jb,ijab->", q, q, diff2))
    # expanded form; row and column masses are all 1/k
    cross = np.sum(a * (q @ b @ q.T))
    val = np.mean(a * a) + np.mean(b * b) - 2.0 * cross
    return float(max(val, 0.0))


def expected_over_decomposition(a, b, decomp: BirkhoffDecomposition) -> float:
    """Double expectation of ``||a[s][:, t] - b||^2`` with s, t drawn independently."""
    total = 0.0
    for ws, s in decomp.terms:
        for wt, t in decomp.terms:
            total += ws * wt * objective_sq(a, b, s, t)
    return total


def coupling_min_lower(a, b, p) -> float:
    """Smallest aligned distance over pairs of permutations in the decomposition of ``p``."""
    a, b = as_array(a), as_array(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    decomp = birkhoff_decompose(p)
    best = min(
        float(np.sum((apply_perms(a, s, t) - b) ** 2))
        for _, s in decomp.terms
        for _, t in decomp.terms
    )
    return float(np.sqrt(best)) / a.shape[0]
