"""Universal uncertainty relation for two orthonormal bases.

For bases ``{|a_m>}`` and ``{|b_n>}`` the joint distribution ``p ⊗ q`` of any
state is majorized by the vector built from the differences of the bounds

    Ω̃_k = max_{|R|+|S|=k+1} ¼ ||Σ_R |a_m><a_m| + Σ_S |b_n><b_n|||²_∞,

which are exact for k = 1, 2 and saturate at 1 from k = d onwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetExceeded, DimensionMismatch, InvariantError
from .majorization import MAJORIZATION_SLACK, majorization_margins, tensor_product
from .quantum import (
    DensityMatrix,
    OrthonormalBasis,
    gram_matrix,
    measure_basis,
    overlap_matrix,
    operator_norm_psd,
)

DEFAULT_BUDGET = 10**7
SATURATION_TOL = 1e-14


@dataclass(frozen=True)
class OverlapStats:
    """Largest overlap ``c`` and largest row/column root-sum ``c_prime``.

    The index fields are diagnostics only; ties are broken arbitrarily.
    """

    c: float
    c_prime: float
    c_index: tuple = field(default=(), compare=False)
    c_prime_index: tuple = field(default=(), compare=False)


def overlap_stats(a: OrthonormalBasis, b: OrthonormalBasis) -> OverlapStats:
    ov = overlap_matrix(a, b)
    d = ov.shape[0]
    m, n = np.unravel_index(np.argmax(ov), ov.shape)
    sq = ov**2
    if d < 2:
        return OverlapStats(float(ov[m, n]), float(ov[m, n]), (int(m), int(n)), (int(m), int(n)))
    # two largest squared entries per row and per column
    row_top = np.sort(sq, axis=1)[:, -2:].sum(axis=1)
    col_top = np.sort(sq, axis=0)[-2:, :].sum(axis=0)
    if row_top.max() >= col_top.max():
        i = int(np.argmax(row_top))
        where, val = ("row", i), row_top[i]
    else:
        j = int(np.argmax(col_top))
        where, val = ("col", j), col_top[j]
    c_prime = min(math.sqrt(val), math.sqrt(2.0))
    return OverlapStats(float(ov[m, n]), c_prime, (int(m), int(n)), where)


def omega1_exact(a: OrthonormalBasis, b: OrthonormalBasis) -> float:
    c = overlap_stats(a, b).c
    return min(0.25 * (1.0 + c) ** 2, 1.0)


def omega2_exact(a: OrthonormalBasis, b: OrthonormalBasis) -> float:
    if a.dim != b.dim:
        raise DimensionMismatch(f"bases have dims {a.dim} and {b.dim}")
    if a.dim < 2:
        raise ValueError("need d >= 2")
    cp = overlap_stats(a, b).c_prime
    return min(0.25 * (1.0 + cp) ** 2, 1.0)


def enumeration_count(d: int, k: int) -> int:
    """Number of subset pairs with ``|R| + |S| = k + 1`` (both non-empty)."""
    return sum(kernels.pair_count(d, r, k + 1 - r) for r in range(max(1, k + 1 - d), min(k, d) + 1))


def _search(g, k, budget, use_numba):
    d = g.shape[0]
    count = enumeration_count(d, k)
    if count > budget:
        raise BudgetExceeded(count, budget)
    best = (-1.0, None, None)
    for r in range(max(1, k + 1 - d), min(k, d) + 1):
        val, rows, cols = kernels.pair_block_max(g, r, k + 1 - r, use_numba)
        if val > best[0]:
            best = (val, rows, cols)
    sigma = math.sqrt(min(max(best[0], 0.0), 1.0))
    return min(0.25 * (1.0 + sigma) ** 2, 1.0), best[1], best[2]


def omega_tilde_argmax(a, b, k, budget=DEFAULT_BUDGET, use_numba=None):
    """Like :func:`omega_tilde_k` but also returns the maximising ``(R, S)``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"bases have dims {a.dim} and {b.dim}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= a.dim:
        return 1.0, np.arange(a.dim), np.arange(1)
    return _search(gram_matrix(a, b), k, budget, use_numba)


def omega_tilde_k(a: OrthonormalBasis, b: OrthonormalBasis, k: int,
                  budget: int = DEFAULT_BUDGET, use_numba=None) -> float:
    """Computable upper bound on the largest total weight of k joint outcomes.

    Maximises ``¼ ||P_R + P_S||²`` over subset pairs with ``|R| + |S| = k + 1``
    by exhaustive enumeration, using ``||P_R + P_S|| = 1 + σ_max(G[R, S])``
    with ``G`` the Gram matrix of the two bases.  Returns 1 for ``k >= d``.

    Raises
    ------
    BudgetExceeded
        If the number of subset pairs exceeds ``budget``.
    """
    return omega_tilde_argmax(a, b, k, budget, use_numba)[0]


def projector_sum_norm(a: OrthonormalBasis, b: OrthonormalBasis, rows, cols) -> float:
    """``||Σ_R |a_m><a_m| + Σ_S |b_n><b_n|||_∞`` by full Hermitian eigendecomposition."""
    ua = a.vectors[:, list(rows)]
    ub = b.vectors[:, list(cols)]
    op = ua @ ua.conj().T + ub @ ub.conj().T
    return operator_norm_psd((op + op.conj().T) / 2)


def singleton_row_norm(a: OrthonormalBasis, b: OrthonormalBasis, m: int, cols) -> float:
    """Closed form ``1 + sqrt(Σ_{n∈S} |<a_m|b_n>|²)`` for a single ``|a_m>``."""
    ov = overlap_matrix(a, b)[m, list(cols)]
    return 1.0 + math.sqrt(float(np.sum(ov**2)))


@dataclass(frozen=True)
class BoundSequence:
    """Nondecreasing bounds ``Ω̃_1 <= ... <= 1``; ``exact[k-1]`` marks closed-form entries."""

    values: np.ndarray
    exact: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        e = np.array(self.exact, dtype=bool)
        if v.ndim != 1 or v.size == 0 or e.shape != v.shape:
            raise InvariantError("bound sequence needs matching 1-d values and exact flags")
        if np.any(np.diff(v) < 0):
            raise InvariantError("bound sequence must be nondecreasing")
        if v[0] <= 0 or v[-1] != 1.0 or np.any(v > 1.0):
            raise InvariantError("bound sequence values must lie in (0, 1] and end at 1")
        v.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "exact", e)

    def __len__(self):
        return self.values.size

    def __getitem__(self, k: int) -> float:
        """Bound for ``k`` outcomes (1-based)."""
        return float(self.values[k - 1])


@dataclass(frozen=True)
class UncertaintyVector:
    """Differences of a bound sequence, zero padded, with a sorted-descending view."""

    raw: np.ndarray
    sorted: np.ndarray
    bounds: BoundSequence

    @classmethod
    def from_bounds(cls, bounds: BoundSequence) -> "UncertaintyVector":
        v = bounds.values
        raw = np.diff(v, prepend=0.0)
        raw[raw < 0] = 0.0
        if abs(raw.sum() - 1.0) > 1e-12:
            raise InvariantError(f"uncertainty vector sums to {raw.sum()!r}")
        srt = np.sort(raw)[::-1].copy()
        raw.setflags(write=False)
        srt.setflags(write=False)
        return cls(raw, srt, bounds)

    def __len__(self):
        return self.raw.size


def monotone_bounds(values, exact) -> BoundSequence:
    """Wrap raw bound estimates, absorbing rounding-level non-monotonicity."""
    v = np.minimum(np.maximum.accumulate(np.asarray(values, dtype=float)), 1.0)
    v[v >= 1.0 - SATURATION_TOL] = 1.0
    v[-1] = 1.0
    return BoundSequence(v, np.asarray(exact, dtype=bool))


def omega_tilde_sequence(a: OrthonormalBasis, b: OrthonormalBasis,
                         budget: int = DEFAULT_BUDGET, use_numba=None) -> BoundSequence:
    """All bounds ``Ω̃_1..Ω̃_{d²}``; k = 1, 2 use the closed forms."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"bases have dims {a.dim} and {b.dim}")
    d = a.dim
    values = np.ones(d * d)
    exact = np.zeros(d * d, dtype=bool)
    values[0] = omega1_exact(a, b)
    exact[0] = True
    if d >= 2:
        values[1] = omega2_exact(a, b) if d > 2 else 1.0
        exact[1] = True
    g = None
    for k in range(3, d):
        if values[k - 2] >= 1.0 - SATURATION_TOL:
            break
        if g is None:
            g = gram_matrix(a, b)
        values[k - 1] = _search(g, k, budget, use_numba)[0]
    return monotone_bounds(values, exact)


def build_bound_vector(a: OrthonormalBasis, b: OrthonormalBasis,
                       budget: int = DEFAULT_BUDGET, use_numba=None) -> UncertaintyVector:
    """The vector ω̃ (length d²) majorizing ``p(ρ) ⊗ q(ρ)`` for every state."""
    return UncertaintyVector.from_bounds(omega_tilde_sequence(a, b, budget, use_numba))


def maassen_uffink_bound(a: OrthonormalBasis, b: OrthonormalBasis) -> float:
    """``-2 log2 c`` in bits."""
    c = overlap_stats(a, b).c
    return max(-2.0 * math.log2(c), 0.0)


@dataclass(frozen=True)
class MajorizationReport:
    joint: np.ndarray
    margins: np.ndarray
    slack: float = MAJORIZATION_SLACK

    @property
    def min_margin(self) -> float:
        return float(self.margins.min())

    @property
    def holds(self) -> bool:
        return self.min_margin >= -self.slack


def check_joint(joint, vector: UncertaintyVector) -> MajorizationReport:
    return MajorizationReport(np.asarray(joint), majorization_margins(joint, vector.sorted))


def verify_majorization(rho: DensityMatrix, a: OrthonormalBasis, b: OrthonormalBasis,
                        vector: UncertaintyVector | None = None) -> MajorizationReport:
    """Test ``p(ρ) ⊗ q(ρ) ≺ ω̃`` and return the per-k partial-sum margins.

    A negative margin beyond the slack is reported, not raised.
    """
    if vector is None:
        vector = build_bound_vector(a, b)
    joint = tensor_product(measure_basis(rho, a), measure_basis(rho, b))
    return check_joint(joint, vector)
