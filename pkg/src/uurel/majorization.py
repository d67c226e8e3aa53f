"""Majorization order, doubly-stochastic mixing and uncertainty measures.

Entropies are reported in bits throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError
from .quantum import as_generator

MAJORIZATION_SLACK = 1e-9
SUM_TOL = 1e-9
NONZERO_THRESHOLD = 1e-12
RENYI_SHANNON_WINDOW = 1e-6
RENYI_MAX_ALPHA = 64.0


def check_prob_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvariantError("probability vector must be a non-empty 1-d array")
    if p.min() < 0:
        raise InvariantError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise InvariantError(f"probabilities sum to {p.sum()!r}")
    return p


def _padded_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = max(x.size, y.size)
    xp = np.zeros(n)
    yp = np.zeros(n)
    xp[: x.size] = x
    yp[: y.size] = y
    if abs(xp.sum() - yp.sum()) > SUM_TOL:
        raise InvariantError(f"totals differ: {xp.sum()!r} vs {yp.sum()!r}")
    return xp, yp


def sorted_partial_sums(x) -> np.ndarray:
    return np.cumsum(np.sort(np.asarray(x, dtype=float))[::-1])


def majorization_margins(x, y) -> np.ndarray:
    """Per-k slack ``sum_k y_desc - sum_k x_desc``; all >= 0 iff ``x`` is majorized by ``y``."""
    xp, yp = _padded_pair(x, y)
    return sorted_partial_sums(yp) - sorted_partial_sums(xp)


def majorizes(x, y, slack: float = MAJORIZATION_SLACK) -> bool:
    """Return True iff ``x`` is majorized by ``y`` (``x ≺ y``).

    The shorter vector is zero-padded.  Each partial-sum inequality is allowed
    ``slack`` of floating error.
    """
    return bool(np.all(majorization_margins(x, y) >= -slack))


def tensor_product(*vectors) -> np.ndarray:
    """Joint distribution of independent outcomes, in lexicographic order."""
    out = np.ones(1)
    for v in vectors:
        out = np.outer(out, np.asarray(v, dtype=float)).ravel()
    return out


@dataclass(frozen=True)
class UncertaintyMeasure:
    """A non-negative function of a probability vector vanishing on point masses.

    ``kind`` is one of ``shannon``, ``renyi``, ``minentropy`` or ``neglogmin``;
    ``alpha`` is only meaningful for ``renyi``.
    """

    kind: str
    alpha: float | None = None

    KINDS = ("shannon", "renyi", "minentropy", "neglogmin")
    ADDITIVE = ("shannon", "renyi", "minentropy")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "renyi":
            a = self.alpha
            if a is None or not (0 < a <= RENYI_MAX_ALPHA) or a == 1:
                raise ValueError(f"Renyi order must lie in (0,1)∪(1,{RENYI_MAX_ALPHA:g}], got {a}")
        elif self.alpha is not None:
            raise ValueError(f"{self.kind} takes no order parameter")

    @classmethod
    def parse(cls, text: str) -> "UncertaintyMeasure":
        """Parse ``shannon``, ``renyi:2``, ``minentropy`` or ``neglogmin``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "renyi":
            if not arg:
                raise ValueError("renyi needs an order, e.g. renyi:2")
            return cls("renyi", float(arg))
        if arg:
            raise ValueError(f"{name} takes no order parameter")
        return cls(name)

    @property
    def label(self) -> str:
        return f"renyi:{self.alpha:g}" if self.kind == "renyi" else self.kind

    @property
    def additive(self) -> bool:
        return self.kind in self.ADDITIVE

    def __call__(self, p) -> float:
        return apply_measure(self, p)


SHANNON = UncertaintyMeasure("shannon")
RENYI2 = UncertaintyMeasure("renyi", 2.0)
MIN_ENTROPY = UncertaintyMeasure("minentropy")
NEG_LOG_MIN = UncertaintyMeasure("neglogmin")
DEFAULT_MEASURES = (SHANNON, RENYI2, MIN_ENTROPY)
ALL_MEASURE_KINDS = (SHANNON, RENYI2, MIN_ENTROPY, NEG_LOG_MIN)


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return max(float(-np.sum(nz * np.log2(nz))), 0.0)


def renyi_entropy(p, alpha: float) -> float:
    if abs(alpha - 1.0) <= RENYI_SHANNON_WINDOW:
        return shannon_entropy(p)
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return max(float(np.log2(np.sum(nz**alpha)) / (1.0 - alpha)), 0.0)


def min_entropy(p) -> float:
    return max(-math.log2(float(np.max(p))), 0.0)


def neg_log_min_nonzero(p) -> float:
    p = np.asarray(p, dtype=float)
    return max(-math.log2(float(p[p > NONZERO_THRESHOLD].min())), 0.0)


def apply_measure(phi: UncertaintyMeasure, p) -> float:
    if phi.kind == "shannon":
        return shannon_entropy(p)
    if phi.kind == "renyi":
        return renyi_entropy(p, phi.alpha)
    if phi.kind == "minentropy":
        return min_entropy(p)
    return neg_log_min_nonzero(p)


def random_permutation_matrix(dim: int, seed) -> np.ndarray:
    rng = as_generator(seed)
    return np.eye(dim)[rng.permutation(dim)]


def random_doubly_stochastic(dim: int, n_perms: int, seed) -> np.ndarray:
    """Convex combination of ``n_perms`` random permutation matrices.

    Weights are uniform on the simplex (flat Dirichlet).
    """
    if n_perms < 1:
        raise ValueError("n_perms must be >= 1")
    rng = as_generator(seed)
    weights = rng.dirichlet(np.ones(n_perms)) if n_perms > 1 else np.ones(1)
    eye = np.eye(dim)
    d = np.zeros((dim, dim))
    for w in weights:
        d += w * eye[rng.permutation(dim)]
    return d
