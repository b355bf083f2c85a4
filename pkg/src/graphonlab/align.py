"""Permutation-alignment distances between block matrices.

Two distances bracket the graphon distance between step graphons:

* ``delta_hat2``: one permutation applied to rows and columns jointly,
  ``min_s ||A[s][:, s] - B||``. Restricting relabelings to block swaps
  makes this an upper bound.
* ``delta_hathat2``: independent row and column permutations,
  ``min_{s,t} ||A[s][:, t] - B||``. Averaging over the couplings a
  measure-preserving map induces between blocks shows this is a lower bound.

Norms are the normalized ones from :func:`graphonlab.core.normalized_l2`.
Permutations are 0-based integer tuples; ``perm[i]`` is the source index
placed at position ``i``.
"""

from dataclasses import dataclass
import itertools
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import as_array, blow_up
from .errors import DimensionMismatch, TooLargeForExact
from .rng import as_generator

HAT2_EXACT_CAP = 9
HATHAT2_EXACT_CAP = 7
MAX_ALT_ITERS = 200
IMPROVE_TOL = 1e-12
# squared-sum ties closer than this are broken lexicographically
TIE_TOL = 1e-12

_CHUNK = 20000


@dataclass(frozen=True)
class AlignResult:
    distance: float
    row_perm: tuple
    col_perm: tuple
    exact: bool

    def to_dict(self, one_based=True):
        off = 1 if one_based else 0
        return {
            "distance": self.distance,
            "row_perm": [int(i) + off for i in self.row_perm],
            "col_perm": [int(i) + off for i in self.col_perm],
            "exact": self.exact,
        }


def _pair(a, b):
    a, b = as_array(a), as_array(b)
    if a.ndim != 2 or a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"need two square matrices of equal size, got {a.shape} and {b.shape}")
    return a, b


def identity(k):
    return tuple(range(k))


def inverse(perm):
    inv = np.empty(len(perm), dtype=np.intp)
    inv[np.asarray(perm)] = np.arange(len(perm))
    return tuple(int(i) for i in inv)


def apply_perms(a, sigma, tau=None):
    """Return the matrix with entries ``a[sigma[i], tau[j]]`` (``tau`` defaults to ``sigma``)."""
    a = as_array(a)
    tau = sigma if tau is None else tau
    k = a.shape[0]
    if len(sigma) != k or len(tau) != k:
        raise DimensionMismatch(f"permutations of length {len(sigma)}/{len(tau)} for a {k}x{k} matrix")
    return a[np.ix_(np.asarray(sigma), np.asarray(tau))]


def objective_sq(a, b, sigma, tau=None):
    """Squared normalized distance ``||a[sigma][:, tau] - b||^2``."""
    a, b = _pair(a, b)
    d = apply_perms(a, sigma, tau) - b
    return float(np.sum(d * d)) / a.shape[0] ** 2


def _perm_chunks(k):
    it = itertools.permutations(range(k))
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def delta_hat2_exact(a, b, cap=HAT2_EXACT_CAP) -> AlignResult:
    """Exhaustive joint-permutation distance; ties go to the lexicographically smallest permutation."""
    a, b = _pair(a, b)
    k = a.shape[0]
    if k > cap:
        raise TooLargeForExact(f"k={k} exceeds the exhaustive cap {cap} for delta_hat2")
    best, best_perm = math.inf, None
    for perms in _perm_chunks(k):
        ap = a[perms[:, :, None], perms[:, None, :]]
        vals = np.sum((ap - b) ** 2, axis=(1, 2))
        i = int(np.argmin(vals))
        if vals[i] < best - TIE_TOL:
            # first index within tolerance of the chunk minimum is lex smallest
            i = int(np.flatnonzero(vals <= vals[i] + TIE_TOL)[0])
            best, best_perm = float(vals[i]), tuple(int(x) for x in perms[i])
    dist = math.sqrt(objective_sq(a, b, best_perm))
    return AlignResult(dist, best_perm, best_perm, True)


def _col_cost(a_rows, b):
    """Cost of placing source column j' at target column j given fixed row order."""
    # C[j, j'] = sum_i (a_rows[i, j'] - b[i, j])^2
    return np.sum((a_rows[:, None, :] - b[:, :, None]) ** 2, axis=0)


def _row_cost(a_cols, b):
    # C[i, i'] = sum_j (a_cols[i', j] - b[i, j])^2
    return np.sum((a_cols[None, :, :] - b[:, None, :]) ** 2, axis=2)


def _lap(cost):
    _, cols = linear_sum_assignment(cost)
    return tuple(int(c) for c in cols), float(cost[np.arange(len(cols)), cols].sum())


def _lex_smallest_assignment(cost, target, tol):
    """Lexicographically smallest assignment whose total is within ``tol`` of ``target``."""
    k = cost.shape[0]
    big = 1e6 * (1.0 + np.abs(cost).max()) * k
    fixed = []
    used = set()
    work = cost.copy()
    for i in range(k):
        for c in range(k):
            if c in used:
                continue
            trial = work.copy()
            trial[i, :] = big
            trial[:, c] = big
            trial[i, c] = cost[i, c]
            for r, cc in fixed:
                trial[r, :] = big
                trial[:, cc] = big
                trial[r, cc] = cost[r, cc]
            _, val = _lap(trial)
            if val <= target + tol:
                fixed.append((i, c))
                used.add(c)
                break
        else:  # pragma: no cover - only reachable through rounding
            return _lap(cost)[0]
    return tuple(c for _, c in sorted(fixed))


def delta_hathat2_exact(a, b, cap=HATHAT2_EXACT_CAP) -> AlignResult:
    """Exact separate-permutation distance.

    Row permutations are enumerated in lexicographic order; for each one
    the optimal column permutation is a linear assignment problem, so the
    search is exhaustive over all (k!)^2 pairs without visiting them.
    Ties go to the lexicographically smallest (sigma, tau).
    """
    a, b = _pair(a, b)
    k = a.shape[0]
    if k > cap:
        raise TooLargeForExact(f"k={k} exceeds the exhaustive cap {cap} for delta_hathat2")
    b_col_sq = np.sum(b * b, axis=0)
    a_col_sq = np.sum(a * a, axis=0)
    best, best_sigma = math.inf, None
    for perms in _perm_chunks(k):
        # cross[c, j', j] = sum_i a[perm_c(i), j'] * b[i, j]
        cross = np.einsum("cij,il->cjl", a[perms], b)
        for c in range(len(perms)):
            cost = b_col_sq[:, None] + a_col_sq[None, :] - 2.0 * cross[c].T
            tau, val = _lap(cost)
            if val < best - TIE_TOL:
                sigma = tuple(int(x) for x in perms[c])
                exact_val = objective_sq(a, b, sigma, tau) * k * k
                if exact_val < best - TIE_TOL:
                    best, best_sigma = exact_val, sigma
    rows = a[np.asarray(best_sigma)]
    tau = _lex_smallest_assignment(_col_cost(rows, b), best, 1e-9 * max(1.0, best))
    dist = math.sqrt(objective_sq(a, b, best_sigma, tau))
    return AlignResult(dist, best_sigma, tau, True)


def _alternate(a, b, tau, max_iters=MAX_ALT_ITERS):
    """Alternating LAP descent from a starting column permutation."""
    prev = math.inf
    sigma = None
    for _ in range(max_iters):
        sigma, _ = _lap(_row_cost(a[:, np.asarray(tau)], b))
        tau, val = _lap(_col_cost(a[np.asarray(sigma)], b))
        if prev - val < IMPROVE_TOL:
            break
        prev = val
    return sigma, tau


def _sum_matched(a, b, axis):
    """Permutation pairing the sorted row (or column) sums of ``a`` and ``b``."""
    sa = np.argsort(a.sum(axis=axis), kind="stable")
    sb = np.argsort(b.sum(axis=axis), kind="stable")
    perm = np.empty(len(sa), dtype=np.intp)
    perm[sb] = sa
    return tuple(int(x) for x in perm)


def delta_hathat2_heuristic(a, b, restarts=20, rng=None) -> AlignResult:
    """Upper bound on ``delta_hathat2`` by alternating linear assignment.

    With one permutation fixed the other is an exact LAP, so each half-step
    cannot increase the objective. Starts are the identity, a row-sum
    matching, then random column permutations.
    """
    a, b = _pair(a, b)
    k = a.shape[0]
    gen = as_generator(rng)
    starts = [identity(k), _col_start_from_sums(a, b)]
    while len(starts) < max(restarts, 1):
        starts.append(tuple(int(x) for x in gen.permutation(k)))
    starts = starts[: max(restarts, 1)]
    best, best_pair = math.inf, None
    for tau0 in starts:
        sigma, tau = _alternate(a, b, tau0)
        val = objective_sq(a, b, sigma, tau)
        if val < best - TIE_TOL or (abs(val - best) <= TIE_TOL and (sigma, tau) < best_pair):
            best, best_pair = val, (sigma, tau)
    return AlignResult(math.sqrt(best), best_pair[0], best_pair[1], False)


def _col_start_from_sums(a, b):
    return _sum_matched(a, b, axis=0)


def delta_hathat2(a, b, restarts=20, rng=None, cap=HATHAT2_EXACT_CAP) -> AlignResult:
    """Exact when ``k <= cap``, otherwise the heuristic upper estimate."""
    if as_array(a).shape[0] <= cap:
        return delta_hathat2_exact(a, b, cap)
    return delta_hathat2_heuristic(a, b, restarts, rng)


def permuted_hamming_min(b1, b2, cap=HATHAT2_EXACT_CAP) -> int:
    """Fewest differing entries (all k^2 positions) over independent row/column permutations."""
    x, y = as_array(b1), as_array(b2)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    res = delta_hathat2_exact(x, y, cap)
    k = x.shape[0]
    return int(round(res.distance ** 2 * k * k))


def _swap_deltas(x, b):
    """Objective change for every transposition of a joint permutation.

    ``x`` is the currently permuted matrix; both ``x`` and ``b`` are
    symmetric. Entry ``[r, s]`` is the change in the unnormalized squared
    distance if positions ``r`` and ``s`` are exchanged.
    """
    g = x @ b
    dg = np.diag(g)
    s = dg[:, None] + dg[None, :] - g - g.T
    xd, bd = np.diag(x), np.diag(b)
    # remove the j in {r, s} terms from the row sums
    corr = (xd[:, None] - x) * (bd[:, None] - b) + (x - xd[None, :]) * (b - bd[None, :])
    diag_part = (xd[:, None] - xd[None, :]) * (bd[:, None] - bd[None, :])
    return 4.0 * (s - corr) + 2.0 * diag_part


def _local_search(a, b, sigma, max_iters=MAX_ALT_ITERS):
    sigma = np.array(sigma, dtype=np.intp)
    for _ in range(max_iters):
        x = a[np.ix_(sigma, sigma)]
        d = _swap_deltas(x, b)
        np.fill_diagonal(d, np.inf)
        r, s = np.unravel_index(int(np.argmin(d)), d.shape)
        if d[r, s] >= -IMPROVE_TOL:
            break
        sigma[[r, s]] = sigma[[s, r]]
    return tuple(int(v) for v in sigma)


def delta_hat2_heuristic(a, b, restarts=20, rng=None, seeds=()) -> AlignResult:
    """Upper bound on ``delta_hat2`` by best-improvement transposition search.

    Starts from the given ``seeds``, the identity, a row-sum matching, both
    halves of an alternating-LAP solution, then random permutations.
    """
    a, b = _pair(a, b)
    k = a.shape[0]
    gen = as_generator(rng)
    alt = delta_hathat2_heuristic(a, b, restarts=2, rng=gen)
    starts = [tuple(s) for s in seeds] + [identity(k), _sum_matched(a, b, axis=1), alt.row_perm, alt.col_perm]
    while len(starts) < len(seeds) + max(restarts, 1) + 4:
        starts.append(tuple(int(x) for x in gen.permutation(k)))
    best, best_perm = math.inf, None
    for s0 in starts:
        cand = [tuple(s0)]
        cand.append(_local_search(a, b, s0))
        for sigma in cand:
            val = objective_sq(a, b, sigma)
            if val < best - TIE_TOL or (abs(val - best) <= TIE_TOL and sigma < best_perm):
                best, best_perm = val, sigma
    return AlignResult(math.sqrt(best), best_perm, best_perm, False)


def delta_hat2(a, b, restarts=20, rng=None, cap=HAT2_EXACT_CAP) -> AlignResult:
    if as_array(a).shape[0] <= cap:
        return delta_hat2_exact(a, b, cap)
    return delta_hat2_heuristic(a, b, restarts, rng)


def _blow_perm(perm, m):
    perm = np.asarray(perm, dtype=np.intp)
    return tuple(int(v) for v in (perm[:, None] * m + np.arange(m)[None, :]).ravel())


def delta2_upper_via_blowup(a, b, m=2, restarts=10, rng=None, cap=HAT2_EXACT_CAP) -> float:
    """Certified upper bound on the graphon distance between ``W[a]`` and ``W[b]``.

    Any joint permutation of a common refinement is a measure-preserving
    relabeling, so every evaluated candidate is an upper bound. The search
    on the ``m``-fold blow-up is seeded with the refined optimum of the
    unrefined problem, so the result never exceeds ``delta_hat2(a, b)``.
    """
    a, b = _pair(a, b)
    gen = as_generator(rng)
    base = delta_hat2(a, b, restarts, gen, cap)
    if m == 1:
        return base.distance
    am, bm = blow_up(a, m), blow_up(b, m)
    refined = delta_hat2_heuristic(am, bm, restarts, gen, seeds=[_blow_perm(base.row_perm, m)])
    return min(base.distance, refined.distance)
