"""Families of symmetric binary matrices that stay far apart under any
independent row and column relabeling, and the graphon families built from
them.

Distances count disagreements over all ``k^2`` positions, diagonal
included. The Chernoff helper instead follows the union-bound argument,
which treats the ``C(k, 2)`` strict upper-triangle positions as independent
fair coins; an off-diagonal disagreement of a symmetric pair shows up twice
in the full count.
"""

from dataclasses import dataclass
import itertools
import math

import numpy as np

from .align import HATHAT2_EXACT_CAP, delta_hathat2_heuristic, permuted_hamming_min
from .core import BinarySymMatrix, HardInstanceParams, q_matrix
from .errors import DimensionMismatch, ExhaustedAttempts, InvalidProbabilities
from .rng import as_generator


@dataclass(frozen=True)
class PackingSet:
    k: int
    members: tuple
    target: int
    certified_min_distance: int | None  # None means uncertified

    @property
    def certified(self) -> bool:
        return self.certified_min_distance is not None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "target": self.target,
            "count": len(self.members),
            "members": [b.to_bitstring() for b in self.members],
            "certified": self.certified,
            "certified_min_distance": self.certified_min_distance,
        }


def random_binary_sym(k, rng=None) -> BinarySymMatrix:
    """Uniform symmetric 0/1 matrix (upper triangle with diagonal drawn, then mirrored)."""
    gen = as_generator(rng)
    upper = np.triu(gen.integers(0, 2, size=(k, k), dtype=np.int8))
    return BinarySymMatrix(upper + np.triu(upper, 1).T)


def all_binary_sym(k):
    """Every symmetric k x k binary matrix (2^(k(k+1)/2) of them)."""
    iu, ju = np.triu_indices(k)
    for bits in itertools.product((0, 1), repeat=len(iu)):
        m = np.zeros((k, k), dtype=np.int8)
        m[iu, ju] = bits
        m[ju, iu] = bits
        yield BinarySymMatrix(m)


def _heuristic_hamming(b1, b2, gen):
    k = b1.k
    res = delta_hathat2_heuristic(b1.bits.astype(float), b2.bits.astype(float), restarts=10, rng=gen)
    return int(round(res.distance**2 * k * k))


def sample_packing_set(k, count, target, max_attempts=10_000, rng=None, cap=HATHAT2_EXACT_CAP) -> PackingSet:
    """Greedy rejection sampling of a permuted-Hamming packing.

    Uniform draws are kept when they are at distance at least ``target``
    from every member kept so far, in draw order. With ``k <= cap`` every
    distance is exact and the set is certified; larger ``k`` falls back to
    a heuristic distance (an over-estimate) and the set is uncertified.
    """
    if count < 2:
        raise InvalidProbabilities("count must be at least 2")
    if target > k * k:
        raise InvalidProbabilities(f"target {target} exceeds k^2 = {k * k}")
    gen = as_generator(rng)
    exact = k <= cap
    members = []
    min_dist = None
    for _ in range(max_attempts):
        cand = random_binary_sym(k, gen)
        dists = []
        for b in members:
            d = permuted_hamming_min(cand, b, cap) if exact else _heuristic_hamming(cand, b, gen)
            dists.append(d)
            if d < target:
                break
        else:
            members.append(cand)
            if dists:
                low = min(dists)
                min_dist = low if min_dist is None else min(min_dist, low)
            if len(members) == count:
                break
    result = PackingSet(k, tuple(members), target, (min_dist if min_dist is not None else k * k) if exact else None)
    if len(members) < count:
        raise ExhaustedAttempts(
            f"kept {len(members)} of {count} members after {max_attempts} draws", achieved=result
        )
    return result


def verify_packing(s: PackingSet, cap=HATHAT2_EXACT_CAP) -> int:
    """Recompute the smallest pairwise permuted-Hamming distance exhaustively."""
    return min(permuted_hamming_min(a, b, cap) for a, b in itertools.combinations(s.members, 2))


def packing_to_graphons(s: PackingSet, params: HardInstanceParams) -> list:
    if params.k != s.k:
        raise DimensionMismatch(f"packing has k={s.k}, params have k={params.k}")
    return [q_matrix(b, params) for b in s.members]


def separation_lower_bound(target, params: HardInstanceParams) -> float:
    """Pairwise aligned distance guaranteed by a packing at permuted distance ``target``."""
    return 2.0 * params.rho * params.c * params.eta * math.sqrt(target) / params.k


def chernoff_collision_bound(k, threshold) -> float:
    """Union bound on some alignment bringing two uniform draws within ``threshold``.

    ``exp(-2 (threshold - C/2)^2 / C) * (k!)^2`` with ``C = C(k, 2)``;
    values of 1 or more are vacuous.
    """
    if k < 2:
        raise InvalidProbabilities("need k >= 2")
    trials = math.comb(k, 2)
    if threshold > trials:
        raise InvalidProbabilities(f"threshold {threshold} exceeds C(k,2) = {trials}")
    log_bound = -2.0 * (threshold - trials / 2) ** 2 / trials + 2 * math.lgamma(k + 1)
    return math.exp(log_bound)
