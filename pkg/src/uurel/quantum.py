"""States, measurements and the small amount of Hermitian linear algebra we need.

All objects are immutable: the wrapped arrays are copied on construction and
flagged read-only, so instances can be shared freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvariantError, NormalizationError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
UNIT_NORM_TOL = 1e-12
ORTHONORMAL_TOL = 1e-10
CLIP_TOL = 1e-10
RENORM_TOL = 1e-9


def _frozen(a, dtype=np.complex128):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def as_generator(seed) -> np.random.Generator:
    """Return a Generator for ``seed`` (an int, a SeedSequence or a Generator)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.default_rng(seed)


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent substream for trial ``index`` of an experiment.

    Derived from ``(master_seed, index)`` only, so serial and parallel runs
    draw identical numbers for a given trial.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _check_hermitian(m, what):
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise InvariantError(f"{what} is not Hermitian (max deviation {dev:.3g})")


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        x = _frozen(self.amplitudes)
        if x.ndim != 1 or x.size == 0:
            raise InvariantError("state vector must be a non-empty 1-d array")
        norm2 = float(np.vdot(x, x).real)
        if abs(norm2 - 1.0) > UNIT_NORM_TOL:
            raise InvariantError(f"state vector norm^2 is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", x)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> "DensityMatrix":
        x = self.amplitudes
        return DensityMatrix(np.outer(x, x.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvariantError(f"density matrix must be square, got shape {m.shape}")
        _check_hermitian(m, "density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise InvariantError(f"density matrix has eigenvalue {lo:.3g} < 0")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    def purity(self) -> float:
        m = self.entries
        return float(np.real(np.sum(m * m.T)))


@dataclass(frozen=True)
class OrthonormalBasis:
    """Basis vectors stored as the columns of a unitary matrix."""

    vectors: np.ndarray

    def __post_init__(self):
        u = _frozen(self.vectors)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
            raise InvariantError(f"basis must be a square matrix of columns, got {u.shape}")
        dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if dev > ORTHONORMAL_TOL:
            raise InvariantError(f"basis is not orthonormal (Gram deviation {dev:.3g})")
        object.__setattr__(self, "vectors", u)

    @classmethod
    def from_vectors(cls, vectors) -> "OrthonormalBasis":
        """Build from a sequence of d state vectors (rows of the input)."""
        return cls(np.array(vectors, dtype=np.complex128).T)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, i) -> StateVector:
        return StateVector(self.vectors[:, i])

    def projectors(self) -> np.ndarray:
        """Rank-one projectors ``|v_i><v_i|`` stacked along axis 0."""
        u = self.vectors
        return np.einsum("im,jm->mij", u, u.conj())

    def as_povm(self) -> "Povm":
        return Povm(self.projectors())


@dataclass(frozen=True)
class Povm:
    elements: np.ndarray

    def __post_init__(self):
        e = _frozen(self.elements)
        if e.ndim != 3 or e.shape[1] != e.shape[2] or e.shape[0] == 0:
            raise InvariantError(f"POVM must have shape (N, d, d), got {e.shape}")
        for i, el in enumerate(e):
            _check_hermitian(el, f"POVM element {i}")
            lo = np.linalg.eigvalsh(el)[0]
            if lo < -PSD_TOL:
                raise InvariantError(f"POVM element {i} has eigenvalue {lo:.3g} < 0")
        dev = np.max(np.abs(e.sum(axis=0) - np.eye(e.shape[1])))
        if dev > PSD_TOL:
            raise InvariantError(f"POVM elements do not sum to identity (deviation {dev:.3g})")
        object.__setattr__(self, "elements", e)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self):
        return self.elements.shape[0]


@dataclass(frozen=True)
class HermitianOperator:
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantError(f"operator must be square, got shape {m.shape}")
        _check_hermitian(m, "operator")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __add__(self, other):
        return HermitianOperator(self.entries + other.entries)


def _entries(x):
    return x.entries if isinstance(x, (DensityMatrix, HermitianOperator)) else np.asarray(x)


def finalize_probabilities(p) -> np.ndarray:
    """Clip rounding dust and validate a freshly computed probability vector.

    Components in ``[-1e-10, 0)`` are set to zero.  Anything more negative,
    or a total further than 1e-9 from one, means the inputs were not a valid
    state/measurement pair and raises :class:`NormalizationError`.
    """
    p = np.array(p, dtype=float)
    lo = p.min()
    if lo < -CLIP_TOL:
        raise NormalizationError(f"probability {lo:.3g} below clipping threshold")
    p[p < 0] = 0.0
    total = p.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise NormalizationError(f"probabilities sum to {total!r}")
    return p / total


def measure_basis(rho: DensityMatrix, basis: OrthonormalBasis) -> np.ndarray:
    """Outcome distribution ``p_m = <a_m|rho|a_m>`` of a projective measurement."""
    if rho.dim != basis.dim:
        raise DimensionMismatch(f"state has dim {rho.dim}, basis has dim {basis.dim}")
    u = basis.vectors
    p = np.einsum("im,ij,jm->m", u.conj(), rho.entries, u).real
    return finalize_probabilities(p)


def measure_povm(rho: DensityMatrix, povm: Povm) -> np.ndarray:
    """Outcome distribution ``p_a = Tr(rho Pi_a)``."""
    if rho.dim != povm.dim:
        raise DimensionMismatch(f"state has dim {rho.dim}, POVM has dim {povm.dim}")
    p = np.einsum("ij,aji->a", rho.entries, povm.elements).real
    return finalize_probabilities(p)


def measure(rho: DensityMatrix, measurement) -> np.ndarray:
    if isinstance(measurement, OrthonormalBasis):
        return measure_basis(rho, measurement)
    return measure_povm(rho, measurement)


def operator_norm_psd(op) -> float:
    """Infinity norm of a positive semidefinite operator (its largest eigenvalue)."""
    m = _entries(op)
    if not isinstance(op, HermitianOperator):
        _check_hermitian(m, "operator")
    w = np.linalg.eigvalsh(m)
    if w[0] < -PSD_TOL:
        raise InvariantError(f"operator is not positive semidefinite (eigenvalue {w[0]:.3g})")
    return max(float(w[-1]), 0.0)


def computational_basis(dim: int) -> OrthonormalBasis:
    return OrthonormalBasis(np.eye(dim))


def fourier_basis(dim: int) -> OrthonormalBasis:
    """Discrete Fourier basis, mutually unbiased with the computational basis."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    m, n = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return OrthonormalBasis(np.exp(2j * np.pi * m * n / dim) / np.sqrt(dim))


def haar_unitary(dim: int, seed) -> np.ndarray:
    rng = as_generator(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    # without the phase fix QR output is not Haar distributed
    return q * (diag / np.abs(diag))


def haar_random_basis(dim: int, seed) -> OrthonormalBasis:
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    return OrthonormalBasis(haar_unitary(dim, seed))


def random_density(dim: int, rank: int, seed) -> DensityMatrix:
    """Ginibre-induced random state ``M M^dag / Tr(M M^dag)`` with ``M`` of shape (d, rank)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = as_generator(seed)
    m = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = m @ m.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def random_pure(dim: int, seed) -> StateVector:
    rng = as_generator(seed)
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(x / np.linalg.norm(x))


def random_projector(dim: int, rank: int, seed) -> HermitianOperator:
    """Orthogonal projector onto a Haar-random ``rank``-dimensional subspace."""
    u = haar_unitary(dim, seed)[:, :rank]
    p = u @ u.conj().T
    return HermitianOperator((p + p.conj().T) / 2)


def gram_matrix(a: OrthonormalBasis, b: OrthonormalBasis) -> np.ndarray:
    """Complex inner products ``<a_m|b_n>``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"bases have dims {a.dim} and {b.dim}")
    return a.vectors.conj().T @ b.vectors


def overlap_matrix(a: OrthonormalBasis, b: OrthonormalBasis) -> np.ndarray:
    """Moduli ``|<a_m|b_n>|``; rows and columns have unit squared norm."""
    return np.abs(gram_matrix(a, b))
