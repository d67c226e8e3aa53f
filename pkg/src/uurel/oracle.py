"""Brute-force reference values obtained by direct optimisation over states.

Nothing here uses the operator-norm closed forms, so the results can be used
to check them.  States are parameterised as ``ρ = M M^† / Tr(M M^†)`` with
``M`` of shape ``(d, rank)`` (rank 1 gives pure states), and the objective

    f(M) = Σ_{t ∈ I} Π_l Tr(ρ E^(l)_{t_l})

is maximised by projected gradient ascent on the Frobenius unit sphere with
an Armijo-controlled step (doubled on success, halved on failure), from many random
starting points.  All restarts for many index sets are run as one batch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import BudgetExceeded, ConvergenceError, InvariantError
from .multi import MeasurementEnsemble
from .quantum import (
    HermitianOperator,
    StateVector,
    fourier_basis,
    computational_basis,
    trial_rng,
)

ORACLE_BUDGET = 20_000
_BATCH = 4096
_MIN_STEP = 1e-16
_MAX_STEP = 1e3
_ARMIJO = 0.25


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iter: int = 5000
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 8:
            raise ValueError("at least 8 restarts are required")
        if self.max_iter < 1 or self.tol <= 0:
            raise ValueError("max_iter and tol must be positive")


@dataclass(frozen=True)
class OracleResult:
    value: float
    state: np.ndarray
    index_set: tuple = ()
    restart_values: np.ndarray = field(default=None, compare=False)
    converged: np.ndarray = field(default=None, compare=False)

    @property
    def n_converged(self) -> int:
        return int(np.sum(self.converged))


class ProductObjective:
    """Sum over index tuples of products of outcome probabilities.

    ``stacks[l]`` holds the operators of measurement l with shape
    ``(N_l, d, d)``; an index tuple picks one operator per measurement.
    """

    def __init__(self, stacks):
        self.stacks = [np.asarray(s, dtype=np.complex128) for s in stacks]
        counts = [len(s) for s in self.stacks]
        self.offsets = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        self.ops = np.concatenate(self.stacks)
        self.dim = self.ops.shape[-1]
        self.n_levels = len(self.stacks)

    def global_index(self, index_sets) -> np.ndarray:
        """Array ``(B, k, L)`` of positions into the concatenated operator stack."""
        idx = np.asarray(index_sets, dtype=np.int64)
        return idx + self.offsets[None, None, :]

    def probabilities(self, m):
        t = np.einsum("bia,bia->b", m.conj(), m).real
        p = np.einsum("bia,gij,bja->bg", m.conj(), self.ops, m).real / t[:, None]
        return p, t

    def value_and_gradient(self, m, gidx):
        """Objective and complex gradient ``∂f/∂Re M + i ∂f/∂Im M`` for a batch."""
        p, t = self.probabilities(m)
        b = np.arange(m.shape[0])[:, None, None]
        vals = p[b, gidx]  # (B, k, L)
        # products over the other measurements via prefix/suffix products
        pre = np.cumprod(np.concatenate([np.ones_like(vals[..., :1]), vals[..., :-1]], axis=-1), axis=-1)
        suf = np.cumprod(np.concatenate([np.ones_like(vals[..., :1]), vals[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
        others = pre * suf
        f = np.sum(vals[..., 0] * others[..., 0], axis=-1)
        w = np.zeros_like(p)
        np.add.at(w, (np.broadcast_to(b, gidx.shape), gidx), others)
        h = np.einsum("bg,gij->bij", w, self.ops)
        c = np.sum(w * p, axis=1)
        grad = 2.0 * (h @ m - c[:, None, None] * m) / t[:, None, None]
        return f, grad

    def value(self, m, gidx):
        return self.value_and_gradient(m, gidx)[0]


def _random_start(rng, dim, rank, n):
    m = rng.standard_normal((n, dim, rank)) + 1j * rng.standard_normal((n, dim, rank))
    return m / np.linalg.norm(m, axis=(1, 2), keepdims=True)


def _ascend(obj, m, gidx, cfg):
    n = m.shape[0]
    f, g = obj.value_and_gradient(m, gidx)
    step = np.full(n, 0.5)
    active = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    gtol = math.sqrt(cfg.tol)
    for _ in range(cfg.max_iter):
        # tangent projection; f is scale invariant so this is mostly a no-op
        radial = np.einsum("bia,bia->b", m.conj(), g).real
        g = g - radial[:, None, None] * m
        gnorm = np.linalg.norm(g, axis=(1, 2))
        done = active & ((gnorm <= gtol) | (step < _MIN_STEP))
        converged |= done
        active &= ~done
        if not active.any():
            break
        ia = np.flatnonzero(active)
        trial = m[ia] + step[ia, None, None] * g[ia]
        trial /= np.linalg.norm(trial, axis=(1, 2), keepdims=True)
        ft, gt = obj.value_and_gradient(trial, gidx[ia])
        # Armijo sufficient increase; plain ascent tests let the step oscillate
        better = ft >= f[ia] + _ARMIJO * step[ia] * gnorm[ia] ** 2
        acc = ia[better]
        m[acc], f[acc], g[acc] = trial[better], ft[better], gt[better]
        step[acc] = np.minimum(step[acc] * 2.0, _MAX_STEP)
        step[ia[~better]] *= 0.5
    return m, f, converged


def maximize_products(stacks, index_sets, rank, cfg: OptimizerConfig, *, batch=_BATCH):
    """Maximise the product objective for each index set; one result per set."""
    obj = ProductObjective(stacks)
    index_sets = [tuple(map(tuple, s)) for s in index_sets]
    per_chunk = max(1, batch // cfg.restarts)
    results = []
    for start in range(0, len(index_sets), per_chunk):
        chunk = index_sets[start : start + per_chunk]
        m0 = np.concatenate([
            _random_start(trial_rng(cfg.seed, start + j), obj.dim, rank, cfg.restarts)
            for j in range(len(chunk))
        ])
        gidx = np.repeat(obj.global_index(chunk), cfg.restarts, axis=0)
        m, f, conv = _ascend(obj, m0, gidx, cfg)
        f = f.reshape(len(chunk), cfg.restarts)
        conv = conv.reshape(len(chunk), cfg.restarts)
        m = m.reshape(len(chunk), cfg.restarts, obj.dim, rank)
        for j, s in enumerate(chunk):
            i = int(np.argmax(f[j]))
            results.append(OracleResult(float(f[j, i]), m[j, i].copy(), s, f[j].copy(), conv[j].copy()))
    return results


def _stack(op):
    if isinstance(op, HermitianOperator):
        return op.entries[None]
    return np.asarray(op, dtype=np.complex128)[None]


def max_product_pure(a, b, cfg: OptimizerConfig = OptimizerConfig()):
    """Maximise ``<x|A|x><x|B|x>`` over unit vectors.

    Returns ``(value, StateVector)``.  Raises :class:`ConvergenceError` (with
    the best value attached) if no restart converged.
    """
    res = maximize_products([_stack(a), _stack(b)], [[(0, 0)]], 1, cfg)[0]
    if res.n_converged == 0:
        raise ConvergenceError("no restart converged in max_product_pure", res.value)
    x = res.state[:, 0]
    return res.value, StateVector(x / np.linalg.norm(x))


def max_product_mixed(a, b, cfg: OptimizerConfig = OptimizerConfig()) -> OracleResult:
    """Same objective over full-rank mixed states ``M M^† / Tr(M M^†)``."""
    dim = _stack(a).shape[-1]
    res = maximize_products([_stack(a), _stack(b)], [[(0, 0)]], dim, cfg)[0]
    if res.n_converged == 0:
        raise ConvergenceError("no restart converged in max_product_mixed", res.value)
    return res


def lemma1_optimal_state(a: StateVector, b: StateVector) -> StateVector:
    """Pure state maximising ``|<a|x>|² |<b|x>|²``, reaching ``¼(1 + |<a|b>|)²``.

    The state lives in span{|b>, |ã>} with ``|ã>`` the Gram-Schmidt
    completion; phases make both overlaps real and the mixing angle is half
    the angle between ``|a>`` and ``|b>``.
    """
    av, bv = a.amplitudes, b.amplitudes
    ab = np.vdot(av, bv)
    c = min(abs(ab), 1.0)
    resid = av - np.vdot(bv, av) * bv
    nrm = np.linalg.norm(resid)
    if nrm < 1e-12:
        return a
    at = resid / nrm
    phi = -np.angle(ab) if c > 0 else 0.0
    a_at = np.vdot(av, at)
    theta = -np.angle(a_at)
    beta = math.acos(c)
    r = math.cos(beta / 2)
    x = np.exp(1j * phi) * r * bv + math.sqrt(1 - r * r) * np.exp(1j * theta) * at
    return StateVector(x / np.linalg.norm(x))


def _stacks_of(measurements):
    if isinstance(measurements, MeasurementEnsemble):
        return list(measurements.elements), measurements
    ens = MeasurementEnsemble(tuple(measurements))
    return list(ens.elements), ens


def omega_k_oracle(measurements, k: int, cfg: OptimizerConfig = OptimizerConfig(), *,
                   budget: int = ORACLE_BUDGET, shortcut: bool = True) -> OracleResult:
    """Largest total probability of any k joint outcomes, by direct search over states.

    ``measurements`` is a pair of bases or a :class:`MeasurementEnsemble`.
    Every k-subset of joint outcomes is optimised separately over mixed
    states.  With ``shortcut`` set, projective ensembles with ``k >= d``
    return exactly 1 (a basis state makes one measurement deterministic).
    """
    stacks, ens = _stacks_of(measurements)
    d, L = ens.dim, ens.n_measurements
    if d > 5 or k > 4 or L > 3:
        raise ValueError("oracle is limited to d <= 5, k <= 4, L <= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    if shortcut and ens.projective and k >= d:
        return OracleResult(1.0, np.eye(d, 1, dtype=complex), (), np.ones(1), np.ones(1, dtype=bool))
    n_sets = math.comb(ens.n_outcomes, k)
    if n_sets > budget:
        raise BudgetExceeded(n_sets, budget, "outcome subsets")
    outcomes = list(product(*[range(n) for n in ens.counts]))
    subsets = list(combinations(outcomes, k))
    results = maximize_products(stacks, subsets, d, cfg)
    best = max(results, key=lambda r: r.value)
    if best.n_converged == 0:
        raise ConvergenceError(f"no restart converged for index set {best.index_set}", best.value)
    return best


def mub_conjectured_value(d: int, k: int) -> float:
    return 1.0 if k >= d else 0.25 * (1.0 + math.sqrt(k / d)) ** 2


def mub_conjecture_probe(d: int, k: int, cfg: OptimizerConfig = OptimizerConfig(), **kwargs):
    """``(oracle value, conjectured value)`` for the computational/Fourier pair.

    Agreement is a finding to report; nothing is asserted here.
    """
    res = omega_k_oracle((computational_basis(d), fourier_basis(d)), k, cfg, **kwargs)
    return res.value, mub_conjectured_value(d, k)


def check_projector(op: HermitianOperator, tol=1e-10):
    m = op.entries
    if np.max(np.abs(m @ m - m)) > tol:
        raise InvariantError("operator is not a projector")
