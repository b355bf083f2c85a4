"""Block graphons and the hard-instance constructions built from them.

A k-block graphon with equal block measures is stored as its k x k matrix of
connection probabilities. All types are immutable: their arrays are marked
read-only after validation.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    AmplitudeTooLarge,
    AsymmetricInput,
    DimensionMismatch,
    InvalidProbabilities,
    OutOfRange,
)

SYMMETRY_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Symmetric k x k matrix of probabilities in ``[0, rho]``.

    Use :func:`make_block_matrix` to build one from raw entries.
    """

    entries: np.ndarray
    rho: float = 1.0

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return self.rho == other.rho and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"BlockMatrix(k={self.k}, rho={self.rho!r}, entries={self.entries.tolist()!r})"


@dataclass(frozen=True, eq=False)
class BinarySymMatrix:
    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {b.shape}")
        if not np.all((b == 0) | (b == 1)):
            raise OutOfRange("binary matrix entries must be exactly 0 or 1")
        if not np.array_equal(b, b.T):
            raise AsymmetricInput("binary matrix must be symmetric")
        b = b.astype(np.int8)
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def k(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BinarySymMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def to_bitstring(self) -> str:
        return "".join(str(int(x)) for x in self.bits.ravel())

    @classmethod
    def from_bitstring(cls, s: str, k: int) -> "BinarySymMatrix":
        bits = np.array([int(ch) for ch in s], dtype=np.int8).reshape(k, k)
        return cls(bits)


@dataclass(frozen=True)
class HardInstanceParams:
    """Parameters of the amplitude-perturbed family around the constant rho/2."""

    n: int
    k: int
    rho: float
    c: float = 0.25

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise InvalidProbabilities("n and k must be positive")
        if not 0 < self.rho <= 1:
            raise InvalidProbabilities(f"rho must lie in (0, 1], got {self.rho}")
        # c = 0 is allowed as the degenerate unperturbed family
        if self.c < 0:
            raise InvalidProbabilities("amplitude constant c must be nonnegative")

    @property
    def eta(self) -> float:
        return min(1.0, self.k / (self.n * math.sqrt(self.rho)))


def make_block_matrix(entries, rho: float = 1.0) -> BlockMatrix:
    """Validate ``entries`` and wrap them as a :class:`BlockMatrix`.

    Entries must be symmetric to within 1e-12 and lie in ``[0, rho]``; the
    stored matrix is symmetrized by averaging, never clamped.
    """
    a = np.array(entries, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise OutOfRange("entries must be finite")
    rho = float(rho)
    if not 0 < rho <= 1:
        raise OutOfRange(f"rho must lie in (0, 1], got {rho}")
    asym = np.max(np.abs(a - a.T))
    if asym > SYMMETRY_TOL:
        raise AsymmetricInput(f"max |e[i][j] - e[j][i]| = {asym:.3g} exceeds {SYMMETRY_TOL}")
    if a.min() < 0 or a.max() > rho:
        raise OutOfRange(f"entries must lie in [0, {rho}]; got range [{a.min()}, {a.max()}]")
    a = (a + a.T) / 2
    return BlockMatrix(_frozen(a), rho)


def as_array(m) -> np.ndarray:
    if isinstance(m, BlockMatrix):
        return m.entries
    if isinstance(m, BinarySymMatrix):
        return m.bits.astype(np.float64)
    return np.asarray(m, dtype=np.float64)


def normalized_l2(a) -> float:
    """L2 norm of the step graphon ``W[a]``: sqrt(mean of squared entries)."""
    a = as_array(a)
    return float(np.sqrt(np.mean(a * a)))


def l2_distance(a, b) -> float:
    a, b = as_array(a), as_array(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return normalized_l2(a - b)


def q_matrix(b: BinarySymMatrix, params: HardInstanceParams) -> BlockMatrix:
    """rho * (1/2 + c*eta) where ``b`` is 1 and rho * (1/2 - c*eta) where it is 0."""
    if b.k != params.k:
        raise DimensionMismatch(f"binary matrix has k={b.k}, params have k={params.k}")
    amp = params.c * params.eta
    if amp > 0.5:
        raise AmplitudeTooLarge(f"c * eta = {amp} exceeds 1/2")
    rho = params.rho
    q = rho * (0.5 + amp * (2.0 * b.bits - 1.0))
    return BlockMatrix(_frozen(q), rho)


def planted_partition(k: int, p: float, q: float) -> BlockMatrix:
    """``p`` on the diagonal, ``q`` elsewhere; the declared bound is ``p``."""
    if not 0 <= q <= p <= 1:
        raise InvalidProbabilities(f"need 0 <= q <= p <= 1, got p={p}, q={q}")
    if k < 1:
        raise InvalidProbabilities("k must be positive")
    a = np.full((k, k), float(q))
    np.fill_diagonal(a, float(p))
    # p == 0 would make the declared bound zero; fall back to 1
    return BlockMatrix(_frozen(a), float(p) if p > 0 else 1.0)


def blow_up(a, m: int):
    """Split every block into ``m`` equal sub-blocks, replicating values."""
    if m < 1:
        raise InvalidProbabilities("blow-up factor must be at least 1")
    arr = np.kron(as_array(a), np.ones((m, m)))
    if isinstance(a, BlockMatrix):
        return BlockMatrix(_frozen(arr), a.rho)
    return arr


def constant(k: int, value: float, rho: float | None = None) -> BlockMatrix:
    """Constant graphon; the bound defaults to the value itself (1 for zero)."""
    return make_block_matrix(np.full((k, k), float(value)), rho if rho is not None else (value or 1.0))
