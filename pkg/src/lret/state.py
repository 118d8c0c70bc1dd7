"""Factored density-matrix state and its eigenvalue truncation.

A density matrix is stored as ``rho = L @ L^dagger`` with ``L`` a tall
``2**N x V`` complex matrix. Everything here works on the ``V x V`` Gram
matrix ``L^dagger L`` so that no ``2**N x 2**N`` array is ever formed; the
nonzero spectrum of the two products coincides and an eigenvector ``u`` of the
Gram matrix lifts to the eigenvector ``L u / sqrt(lambda)`` of ``rho``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvariantError

#: Gram eigenvalues below this are treated as exact zeros and discarded.
EIGENVALUE_FLOOR = 1e-12
#: Negative Gram eigenvalues down to ``-NEGATIVE_TOL`` are rounding noise.
NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class LFactor:
    """Rank-compressed state ``rho = columns @ columns.conj().T``.

    Instances are treated as immutable values; operations return new factors.
    """

    num_qubits: int
    columns: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=np.complex128)
        if cols.ndim == 1:
            cols = cols[:, None]
        if self.num_qubits < 1:
            raise DomainError(f"num_qubits must be >= 1, got {self.num_qubits}")
        if cols.ndim != 2 or cols.shape[0] != 2**self.num_qubits or cols.shape[1] < 1:
            raise DomainError(
                f"columns must have shape (2**{self.num_qubits}, V>=1), got {cols.shape}"
            )
        object.__setattr__(self, "columns", cols)

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def rank(self) -> int:
        """Number of stored columns ``V`` (an upper bound on the matrix rank)."""
        return self.columns.shape[1]

    @property
    def trace(self) -> float:
        return float(np.vdot(self.columns, self.columns).real)


class EigenPair(NamedTuple):
    """Descending eigenvalues and matching orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class Truncation(NamedTuple):
    """Result of an eigenvalue truncation with the spectrum split it made."""

    factor: LFactor
    kept: np.ndarray
    dropped: np.ndarray

    @property
    def discarded_weight(self) -> float:
        return float(self.dropped.sum())


def lfactor_from_basis_state(num_qubits: int, basis_index: int) -> LFactor:
    """Single-column factor of the computational basis state ``|basis_index>``."""
    if num_qubits < 1:
        raise DomainError(f"num_qubits must be >= 1, got {num_qubits}")
    dim = 2**num_qubits
    if not 0 <= basis_index < dim:
        raise DomainError(f"basis index {basis_index} out of range for {num_qubits} qubits")
    cols = np.zeros((dim, 1), dtype=np.complex128)
    cols[basis_index, 0] = 1.0
    return LFactor(num_qubits, cols)


def lfactor_from_density(rho: np.ndarray) -> LFactor:
    """Exact factor of a dense density matrix via full diagonalization.

    Only used when leaving full-matrix evolution; keeps eigenpairs above
    :data:`EIGENVALUE_FLOOR`, so ``LL^dagger`` reproduces ``rho`` up to that floor.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    num_qubits = _num_qubits_of(rho.shape[0])
    w, u = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w, u = _sorted_clamped(w, u)
    keep = w > EIGENVALUE_FLOOR
    if not keep.any():
        return LFactor(num_qubits, np.zeros((rho.shape[0], 1), dtype=np.complex128))
    return LFactor(num_qubits, u[:, keep] * np.sqrt(w[keep]))


def density_from_lfactor(L: LFactor) -> np.ndarray:
    """Form the dense ``2**N x 2**N`` matrix ``L L^dagger``."""
    cols = L.columns
    return cols @ cols.conj().T


def gram_eigh(gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a PSD Gram matrix; eigenvalues descending, clamped at zero.

    Raises :class:`InvariantError` if an eigenvalue is below ``-NEGATIVE_TOL``.
    """
    gram = 0.5 * (gram + gram.conj().T)
    w, u = np.linalg.eigh(gram)
    return _sorted_clamped(w, u)


def _sorted_clamped(w, u):
    if w.size and w.min() < -NEGATIVE_TOL:
        raise InvariantError(f"Gram matrix has eigenvalue {w.min():.3e} < -{NEGATIVE_TOL}")
    order = np.argsort(-w, kind="stable")
    w = np.clip(w[order], 0.0, None)
    return w, u[:, order]


def subspace_eigendecomposition(L: LFactor) -> EigenPair:
    """Nonzero eigenpairs of ``L L^dagger`` computed from the ``V x V`` Gram matrix.

    Cost is ``O(V**3 + 2**N V**2)``. Eigenvalues below :data:`EIGENVALUE_FLOOR`
    are dropped, so a zero factor yields an empty pair.
    """
    w, u = gram_eigh(L.columns.conj().T @ L.columns)
    keep = w > EIGENVALUE_FLOOR
    w, u = w[keep], u[:, keep]
    vecs = (L.columns @ u) / np.sqrt(w)
    return EigenPair(w, vecs)


def cutoff_count(eigenvalues: np.ndarray, epsilon: float) -> int:
    """Length of the shortest descending prefix holding a ``1 - epsilon`` share.

    ``eigenvalues`` must be sorted descending and non-negative. The share is
    measured against their sum, so the rule keeps its meaning for sub-unit traces.
    """
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")
    n = len(eigenvalues)
    total = float(np.sum(eigenvalues))
    if n == 0 or total <= 0.0:
        return 0
    if epsilon == 0.0:
        return n
    cum = np.cumsum(eigenvalues)
    # relative slack absorbs summation rounding at exact boundaries
    target = (1.0 - epsilon) * total * (1.0 - 1e-12)
    return min(int(np.searchsorted(cum, target, side="left")) + 1, n)


def truncate_spectrum(w: np.ndarray, epsilon: float) -> tuple[int, np.ndarray]:
    """Split descending eigenvalues ``w`` into a kept count and a dropped tail.

    Values below the floor never count as kept.
    """
    above = int(np.count_nonzero(w > EIGENVALUE_FLOOR))
    k = min(cutoff_count(w[:above], epsilon), above)
    return k, w[k:]


def truncate(L: LFactor, epsilon: float) -> Truncation:
    """Eigenvalue truncation that also reports the kept and dropped spectrum."""
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")
    w, u = gram_eigh(L.columns.conj().T @ L.columns)
    k, dropped = truncate_spectrum(w, epsilon)
    if k == 0:
        cols = np.zeros((L.dim, 1), dtype=np.complex128)
    else:
        # L u has norm sqrt(lambda): exactly eigenvector * sqrt(eigenvalue)
        cols = L.columns @ u[:, :k]
    return Truncation(LFactor(L.num_qubits, cols), w[:k], dropped)


def eigenvalue_truncation(L: LFactor, epsilon: float) -> LFactor:
    """Keep the leading eigenvectors of ``L L^dagger`` holding a ``1-epsilon`` share.

    The returned columns are the kept eigenvectors scaled by the square root of
    their eigenvalues. The trace is not renormalized.
    """
    return truncate(L, epsilon).factor


def check_density_matrix(rho: np.ndarray, *, atol: float = 1e-10) -> None:
    """Raise :class:`InvariantError` unless ``rho`` is Hermitian, PSD and trace <= 1."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvariantError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if herm > atol:
        raise InvariantError(f"density matrix not Hermitian (deviation {herm:.3e})")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < -atol:
        raise InvariantError(f"density matrix not PSD (min eigenvalue {w.min():.3e})")
    tr = np.trace(rho).real
    if not 0.0 < tr <= 1.0 + 1e-12:
        raise InvariantError(f"density matrix trace {tr!r} outside (0, 1]")


def _num_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise DomainError(f"dimension {dim} is not a power of two >= 2")
    return n
