"""Gate definitions and strided application to factors and density matrices.

Bit ordering: basis index ``x = sum_q b_q * 2**(N-1-q)``, so qubit 0 is the
most significant bit. A ``k``-qubit gate is applied by viewing the state as a
tensor with one axis of length 2 per qubit and contracting only the target
axes; the ``2**N x 2**N`` embedding is never built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .state import LFactor

UNITARY_TOL = 1e-12

_SQ2 = 1 / np.sqrt(2)
_FIXED = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


def _rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _givens_fy(theta):
    # identity on |00>,|11>; |10> -> cos|10> + sin|01>
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.eye(4, dtype=complex)
    m[1, 1], m[1, 2] = c, s
    m[2, 1], m[2, 2] = -s, c
    return m


_PARAMETRIZED = {"RX": _rx, "RY": _ry, "RZ": _rz, "RY2Q_FY": _givens_fy}
_ARITY = {"SWAP": 2, "CZ": 2, "CNOT": 2, "RY2Q_FY": 2}

#: every name accepted by :func:`standard_gate`
STANDARD_GATES = tuple(sorted(set(_FIXED) | set(_PARAMETRIZED)))
ONE_QUBIT_GATES = ("X", "Y", "Z", "S", "T", "RX", "RY", "RZ")
TWO_QUBIT_GATES = ("SWAP", "CZ", "CNOT")


def gate_arity(name: str) -> int:
    return _ARITY.get(name, 1)


def is_parametrized(name: str) -> bool:
    return name in _PARAMETRIZED


@dataclass(frozen=True)
class Gate:
    """A unitary on an ordered tuple of target qubits."""

    name: str
    targets: tuple
    matrix: np.ndarray = field(repr=False)
    angle: Optional[float] = None

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        m = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", m)
        k = len(targets)
        if k == 0 or len(set(targets)) != k or min(targets) < 0:
            raise DomainError(f"gate targets must be distinct non-negative indices, got {targets}")
        if m.shape != (2**k, 2**k):
            raise DomainError(f"{self.name}: matrix shape {m.shape} does not match {k} targets")
        err = np.max(np.abs(m.conj().T @ m - np.eye(2**k)))
        if err > UNITARY_TOL:
            raise DomainError(f"{self.name}: matrix is not unitary (deviation {err:.2e})")

    @property
    def arity(self) -> int:
        return len(self.targets)

    def apply_columns(self, columns: np.ndarray, num_qubits: int) -> np.ndarray:
        """Return ``(embedded gate) @ columns`` for a ``(2**num_qubits, V)`` array."""
        _check_targets(self.targets, num_qubits)
        return apply_matrix(self.matrix, self.targets, columns, num_qubits)


@dataclass(frozen=True)
class GroverIterate:
    """Oracle-plus-diffusion step ``(2|s><s| - I) O_f`` on the whole register.

    ``f(x) = 1`` iff the Hamming weight of ``x`` is at most ``threshold``; the
    oracle flips the sign of good states and ``|s>`` is the uniform
    superposition. It acts as one gate. :attr:`matrix` materializes the dense
    unitary, while :meth:`apply_columns` uses the diagonal-plus-rank-one
    structure in ``O(2**N V)``.
    """

    num_qubits: int
    threshold: int
    name: str = "GROVER"
    angle: Optional[float] = None

    def __post_init__(self):
        if not 1 <= self.threshold <= self.num_qubits:
            raise DomainError(
                f"hamming threshold must lie in [1, {self.num_qubits}], got {self.threshold}"
            )

    @property
    def targets(self) -> tuple:
        return tuple(range(self.num_qubits))

    @property
    def arity(self) -> int:
        return self.num_qubits

    @cached_property
    def good_mask(self) -> np.ndarray:
        return hamming_weights(self.num_qubits) <= self.threshold

    @cached_property
    def oracle_signs(self) -> np.ndarray:
        return np.where(self.good_mask, -1.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        dim = 2**self.num_qubits
        diffusion = np.full((dim, dim), 2.0 / dim, dtype=complex) - np.eye(dim)
        return diffusion * self.oracle_signs[None, :]

    def apply_columns(self, columns: np.ndarray, num_qubits: int) -> np.ndarray:
        if num_qubits != self.num_qubits:
            raise DomainError(
                f"Grover iterate built for {self.num_qubits} qubits applied to {num_qubits}"
            )
        shape = columns.shape
        cols = columns.reshape(shape[0], -1)
        flipped = cols * self.oracle_signs[:, None]
        mean = flipped.mean(axis=0, keepdims=True)
        return (2.0 * mean - flipped).reshape(shape)


def hamming_weights(num_qubits: int) -> np.ndarray:
    """Hamming weight of every basis index ``0 .. 2**num_qubits - 1``."""
    idx = np.arange(2**num_qubits, dtype=np.int64)
    weights = np.zeros_like(idx)
    for b in range(num_qubits):
        weights += (idx >> b) & 1
    return weights


def standard_gate(name: str, targets: Sequence[int], angle: Optional[float] = None) -> Gate:
    """Build a named gate.

    Rotations follow ``R_P(theta) = exp(-i theta P / 2)``. ``RY2Q_FY`` is the
    two-qubit real rotation by ``theta/2`` within ``span{|01>, |10>}`` that
    acts as identity on ``|00>`` and ``|11>``.
    """
    name = name.upper()
    targets = tuple(targets)
    if name not in _FIXED and name not in _PARAMETRIZED:
        raise DomainError(f"unknown gate {name!r}")
    if len(targets) != gate_arity(name):
        raise DomainError(f"{name} acts on {gate_arity(name)} qubit(s), got targets {targets}")
    if name in _PARAMETRIZED:
        if angle is None:
            raise DomainError(f"{name} requires an angle")
        return Gate(name, targets, _PARAMETRIZED[name](float(angle)), float(angle))
    if angle is not None:
        raise DomainError(f"{name} takes no angle")
    return Gate(name, targets, _FIXED[name])


def _check_targets(targets, num_qubits):
    for t in targets:
        if not 0 <= t < num_qubits:
            raise DomainError(f"target qubit {t} out of range for {num_qubits} qubits")


def _canonical(matrix: np.ndarray, targets: Sequence[int]):
    """Reorder a gate so its targets are ascending."""
    order = np.argsort(targets)
    if np.all(order == np.arange(len(targets))):
        return matrix, tuple(targets)
    k = len(targets)
    t = matrix.reshape((2,) * (2 * k))
    perm = list(order) + [k + o for o in order]
    return t.transpose(perm).reshape(2**k, 2**k), tuple(targets[i] for i in order)


def apply_matrix(matrix: np.ndarray, targets: Sequence[int], state: np.ndarray,
                 num_qubits: int) -> np.ndarray:
    """Apply a ``2**k x 2**k`` matrix to axes ``targets`` of a ``num_qubits`` register.

    ``state`` has ``2**num_qubits`` rows and any number of trailing columns.
    """
    matrix, targets = _canonical(np.asarray(matrix), targets)
    k = len(targets)
    q0 = targets[0]
    if targets[-1] - q0 == k - 1:
        t = state.reshape(2**q0, 2**k, -1)
        if t.shape[2] >= 8:
            return np.matmul(matrix, t).reshape(state.shape)
        return np.einsum("ij,ajb->aib", matrix, t).reshape(state.shape)
    t = state.reshape((2,) * num_qubits + (-1,))
    out = np.tensordot(matrix.reshape((2,) * (2 * k)), t, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    return out.reshape(state.shape)


def apply_gate_lfactor(G, L: LFactor) -> LFactor:
    """Left-multiply every column of ``L`` by the embedded gate."""
    return LFactor(L.num_qubits, G.apply_columns(L.columns, L.num_qubits))


def apply_gate_density(G, rho: np.ndarray) -> np.ndarray:
    """Conjugate a dense density matrix by the embedded gate, ``G rho G^dagger``."""
    rho = np.asarray(rho, dtype=np.complex128)
    n = rho.shape[0].bit_length() - 1
    if isinstance(G, Gate):
        _check_targets(G.targets, n)
        # rho flattened row-major is a 2N-qubit register: row bits then column bits
        flat = apply_matrix(G.matrix, G.targets, rho.reshape(-1), 2 * n)
        flat = apply_matrix(G.matrix.conj(), [n + t for t in G.targets], flat, 2 * n)
        return flat.reshape(rho.shape)
    left = G.apply_columns(rho, n)
    return G.apply_columns(left.conj().T, n).conj().T
