"""Universal uncertainty relations for L >= 2 POVMs, and weighted variants.

The bound for k joint outcomes is

    Ω̃_k = max ||(1/L) Σ_l Σ_{α∈S_l} Π^(l)_α||^L_∞

over tuples of non-empty subsets with ``Σ |S_l| = L + k - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from . import kernels
from .errors import BudgetExceeded, InvariantError
from .majorization import UncertaintyMeasure, tensor_product
from .pair import (
    DEFAULT_BUDGET,
    SATURATION_TOL,
    BoundSequence,
    MajorizationReport,
    UncertaintyVector,
    check_joint,
    monotone_bounds,
)
from .quantum import DensityMatrix, OrthonormalBasis, Povm, measure

_S2, _S3, _S6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)


@dataclass(frozen=True)
class MeasurementEnsemble:
    """L measurements on a common space; bases are kept as bases, POVMs as POVMs."""

    measurements: tuple

    def __post_init__(self):
        ms = tuple(self.measurements)
        if len(ms) < 2:
            raise InvariantError("an ensemble needs at least two measurements")
        for m in ms:
            if not isinstance(m, (OrthonormalBasis, Povm)):
                raise TypeError(f"unsupported measurement type {type(m).__name__}")
        dims = {m.dim for m in ms}
        if len(dims) != 1:
            raise InvariantError(f"measurements act on different dimensions {sorted(dims)}")
        object.__setattr__(self, "measurements", ms)

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    @property
    def n_measurements(self) -> int:
        return len(self.measurements)

    @property
    def counts(self) -> tuple:
        return tuple(len(m) for m in self.measurements)

    @property
    def n_outcomes(self) -> int:
        return math.prod(self.counts)

    @property
    def projective(self) -> bool:
        return all(isinstance(m, OrthonormalBasis) for m in self.measurements)

    @cached_property
    def elements(self) -> tuple:
        return tuple(
            m.projectors() if isinstance(m, OrthonormalBasis) else np.asarray(m.elements)
            for m in self.measurements
        )

    @cached_property
    def _subset_sums(self) -> tuple:
        # per measurement: {size: stacked sums over all subsets of that size}
        out = []
        for el in self.elements:
            sizes = {}
            for s in range(1, len(el) + 1):
                tab = kernels.combination_table(len(el), s)
                sizes[s] = np.ascontiguousarray(el[tab].sum(axis=1))
            out.append(sizes)
        return tuple(out)

    def repeated(self, weights) -> "MeasurementEnsemble":
        """Ensemble listing measurement l exactly ``weights[l]`` times."""
        if len(weights) != self.n_measurements:
            raise ValueError("need one weight per measurement")
        return MeasurementEnsemble(tuple(m for m, w in zip(self.measurements, weights) for _ in range(w)))


def size_compositions(counts, total):
    """Tuples ``(s_1..s_L)`` with ``1 <= s_l <= counts[l]`` summing to ``total``."""
    if not counts:
        if total == 0:
            yield ()
        return
    rest_min = len(counts) - 1
    rest_max = sum(counts[1:])
    for s in range(max(1, total - rest_max), min(counts[0], total - rest_min) + 1):
        for tail in size_compositions(counts[1:], total - s):
            yield (s,) + tail


def enumeration_count_multi(ens: MeasurementEnsemble, k: int) -> int:
    total = ens.n_measurements + k - 1
    return sum(
        math.prod(math.comb(n, s) for n, s in zip(ens.counts, comp))
        for comp in size_compositions(ens.counts, total)
    )


def saturation_index(ens: MeasurementEnsemble) -> int:
    """Smallest k at which every subset is forced to be complete (bound = 1)."""
    return sum(ens.counts) - ens.n_measurements + 1


def omega_tilde_k_multi(ens: MeasurementEnsemble, k: int, budget: int = DEFAULT_BUDGET,
                        use_numba=None) -> float:
    """Operator-norm bound on the largest total weight of k joint outcomes.

    Exhaustive over subset tuples; raises :class:`BudgetExceeded` if the tuple
    count exceeds ``budget``.
    """
    if not 1 <= k:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= saturation_index(ens):
        return 1.0
    count = enumeration_count_multi(ens, k)
    if count > budget:
        raise BudgetExceeded(count, budget, "subset-tuple norm evaluations")
    L = ens.n_measurements
    sums = ens._subset_sums
    best = 0.0
    for comp in size_compositions(ens.counts, L + k - 1):
        lam, _ = kernels.multi_tuple_max([sums[l][s] for l, s in enumerate(comp)], use_numba)
        best = max(best, lam)
    return min((best / L) ** L, 1.0)


def omega_tilde_sequence_multi(ens: MeasurementEnsemble, budget: int = DEFAULT_BUDGET,
                               use_numba=None, short_circuit: bool = True) -> BoundSequence:
    """``Ω̃_1..Ω̃_N``; once a bound reaches 1 the rest are 1 without enumeration."""
    n = ens.n_outcomes
    values = np.ones(n)
    for k in range(1, min(n, saturation_index(ens))):
        if short_circuit and k > 1 and values[k - 2] >= 1.0 - SATURATION_TOL:
            break
        values[k - 1] = omega_tilde_k_multi(ens, k, budget, use_numba)
    return monotone_bounds(values, np.zeros(n, dtype=bool))


def build_bound_vector_multi(ens: MeasurementEnsemble, budget: int = DEFAULT_BUDGET,
                             use_numba=None) -> UncertaintyVector:
    return UncertaintyVector.from_bounds(omega_tilde_sequence_multi(ens, budget, use_numba))


def joint_distribution(rho: DensityMatrix, ens: MeasurementEnsemble) -> np.ndarray:
    return tensor_product(*(measure(rho, m) for m in ens.measurements))


def verify_majorization_multi(rho: DensityMatrix, ens: MeasurementEnsemble,
                              vector: UncertaintyVector | None = None) -> MajorizationReport:
    if vector is None:
        vector = build_bound_vector_multi(ens)
    return check_joint(joint_distribution(rho, ens), vector)


def bound_chain(rho: DensityMatrix, ens: MeasurementEnsemble, subsets, index_set) -> tuple:
    """The four links of the chain bounding a k-outcome sum by Ω̃_k.

    ``subsets`` is one index collection per measurement and ``index_set`` a set
    of outcome tuples inside their product.  Returns ``(outcome_sum,
    product_of_sums, am_gm_power, omega_tilde)``, each no larger than the next.
    """
    L = ens.n_measurements
    probs = [measure(rho, m) for m in ens.measurements]
    allowed = set(product(*[sorted(s) for s in subsets]))
    if not set(map(tuple, index_set)) <= allowed:
        raise ValueError("index_set must lie inside the product of the subsets")
    k = len(index_set)
    if sum(len(s) for s in subsets) != L + k - 1:
        raise ValueError("subset sizes must total L + k - 1")
    outcome_sum = sum(math.prod(probs[l][t[l]] for l in range(L)) for t in index_set)
    sums = [float(np.sum(probs[l][list(s)])) for l, s in enumerate(subsets)]
    product_of_sums = math.prod(sums)
    am_gm = (sum(sums) / L) ** L
    return outcome_sum, product_of_sums, am_gm, omega_tilde_k_multi(ens, k)


def example1_ensemble() -> MeasurementEnsemble:
    """Three bases of C^4 in which every pair shares one basis vector.

    The shared vectors are ``|0>``, ``(|2>+|3>)/√2`` and ``|1>``.
    """
    e = np.eye(4)
    b1 = [e[0], e[1], e[2], e[3]]
    b2 = [e[0], (e[2] + e[3]) / _S2, (e[1] + e[2] - e[3]) / _S3, (2 * e[1] - e[2] + e[3]) / _S6]
    b3 = [(e[2] + e[3]) / _S2, e[1], (e[0] + e[2] - e[3]) / _S3, (2 * e[0] - e[2] + e[3]) / _S6]
    return MeasurementEnsemble(tuple(OrthonormalBasis.from_vectors(b) for b in (b1, b2, b3)))


def shared_vectors(a: OrthonormalBasis, b: OrthonormalBasis, tol: float = 1e-12):
    """Index pairs ``(m, n)`` with ``|<a_m|b_n>| = 1`` within ``tol``."""
    ov = np.abs(a.vectors.conj().T @ b.vectors)
    return [tuple(int(i) for i in ix) for ix in np.argwhere(np.abs(ov - 1.0) <= tol)]


@dataclass(frozen=True)
class WeightedScheme:
    """Positive integer repetition counts ``w_l``; ``t_l = w_l / W`` exactly."""

    weights: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if not w or any(x < 1 for x in w) or any(int(x) != x for x in self.weights):
            raise InvariantError("weights must be positive integers")
        object.__setattr__(self, "weights", w)

    @property
    def total(self) -> int:
        return sum(self.weights)

    @property
    def t(self) -> tuple:
        return tuple(Fraction(w, self.total) for w in self.weights)


def weighted_bound(ens: MeasurementEnsemble, scheme: WeightedScheme, phi: UncertaintyMeasure,
                   budget: int = DEFAULT_BUDGET, use_numba=None) -> float:
    """Lower bound on ``Σ_l t_l Φ(p^(l))`` for a tensor-additive measure Φ.

    Builds the ensemble repeating measurement l ``w_l`` times and returns
    ``Φ(ω̃) / W`` for its bound vector.
    """
    if not phi.additive:
        raise ValueError(f"{phi.label} is not additive under tensor products")
    if len(scheme.weights) != ens.n_measurements:
        raise ValueError("scheme length must equal the number of measurements")
    big = ens.repeated(scheme.weights)
    vec = build_bound_vector_multi(big, budget, use_numba)
    return phi(vec.sorted) / scheme.total


def random_index_set(rng, subsets, k):
    """Draw ``k`` distinct outcome tuples from the product of ``subsets``."""
    pool = list(product(*[sorted(s) for s in subsets]))
    pick = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in pick]


def random_subsets(rng, counts, total):
    comps = list(size_compositions(counts, total))
    comp = comps[rng.integers(len(comps))]
    return [sorted(rng.choice(n, size=s, replace=False).tolist()) for n, s in zip(counts, comp)]

