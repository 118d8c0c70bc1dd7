"""Kraus channels, their tensor products, and qubit grouping for truncation.

A channel maps ``rho -> sum_a p_a K_a rho K_a^dagger``. Mixture channels
(depolarizing, bit flip, unitary mix) keep unnormalized unitaries ``K_a`` with
explicit probabilities ``p_a``; amplitude damping carries unit weights with the
probabilities folded into its matrices. Engines only consume the products
``sqrt(p_a) K_a`` (see :attr:`KrausChannel.scaled`), so both forms behave the same.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DomainError
from .gates import UNITARY_TOL, _FIXED

COMPLETENESS_TOL = 1e-12

_I2 = np.eye(2, dtype=complex)
_X, _Y, _Z = _FIXED["X"], _FIXED["Y"], _FIXED["Z"]


@dataclass(frozen=True)
class KrausChannel:
    name: str
    matrices: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        mats = np.asarray(self.matrices, dtype=np.complex128)
        w = np.asarray(self.weights, dtype=np.float64)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or len(w) != len(mats):
            raise DomainError("matrices must be (A, d, d) with one weight per matrix")
        d = mats.shape[1]
        if d < 2 or d & (d - 1):
            raise DomainError(f"Kraus matrix dimension {d} is not a power of two")
        if np.any(w < 0):
            raise DomainError("Kraus weights must be non-negative")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "weights", w)
        err = completeness_error(self)
        if err > COMPLETENESS_TOL:
            raise DomainError(f"{self.name}: sum p K^dagger K deviates from I by {err:.2e}")

    @property
    def arity(self) -> int:
        return self.matrices.shape[1].bit_length() - 1

    @property
    def num_terms(self) -> int:
        return len(self.weights)

    @property
    def scaled(self) -> np.ndarray:
        """``sqrt(p_a) K_a`` stacked along the first axis."""
        return np.sqrt(self.weights)[:, None, None] * self.matrices

    @property
    def superoperator(self) -> np.ndarray:
        """``sum_a p_a K_a (x) conj(K_a)`` acting on row-major vectorized ``rho``."""
        s = self.scaled
        d = s.shape[1]
        return np.einsum("aik,ajl->ijkl", s, s.conj()).reshape(d * d, d * d)


def completeness_error(channel: KrausChannel) -> float:
    """Max-entry deviation of ``sum_a p_a K_a^dagger K_a`` from the identity."""
    m = channel.matrices
    total = np.einsum("a,aji,ajk->ik", channel.weights, m.conj(), m)
    return float(np.max(np.abs(total - np.eye(m.shape[1]))))


def _check_probability(p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"noise strength must lie in [0, 1], got {p}")


def depolarizing(p: float) -> KrausChannel:
    """``(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)``."""
    _check_probability(p)
    return KrausChannel("depolarizing", np.stack([_I2, _X, _Y, _Z]),
                        [1 - p, p / 3, p / 3, p / 3])


def unitary_mix(p: float, U: np.ndarray, name: str = "unitary_mix") -> KrausChannel:
    """``(1-p) rho + p U rho U^dagger`` for a one-qubit unitary ``U``."""
    _check_probability(p)
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2) or np.max(np.abs(U.conj().T @ U - _I2)) > UNITARY_TOL:
        raise DomainError("U must be a 2x2 unitary")
    return KrausChannel(name, np.stack([_I2, U]), [1 - p, p])


def bit_flip(p: float) -> KrausChannel:
    return unitary_mix(p, _X, name="bitflip")


def phase_flip(p: float) -> KrausChannel:
    return unitary_mix(p, _Z, name="phaseflip")


def amplitude_damping(p: float) -> KrausChannel:
    """Relaxation towards ``|0>`` with decay probability ``p``."""
    _check_probability(p)
    e0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    e1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel("amplitude-damping", np.stack([e0, e1]), [1.0, 1.0])


_CONSTRUCTORS = {
    "depolarizing": depolarizing,
    "bitflip": bit_flip,
    "phaseflip": phase_flip,
    "amplitude-damping": amplitude_damping,
}
_ALIASES = {
    "depolarising": "depolarizing",
    "bit_flip": "bitflip",
    "bit-flip": "bitflip",
    "phase_flip": "phaseflip",
    "phase-flip": "phaseflip",
    "amplitude_damping": "amplitude-damping",
    "amplitudedamping": "amplitude-damping",
}
CHANNEL_NAMES = tuple(_CONSTRUCTORS)


def canonical_channel_name(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in _CONSTRUCTORS:
        raise DomainError(f"unknown channel {name!r}; expected one of {CHANNEL_NAMES}")
    return key


def make_channel(name: str, p: float) -> KrausChannel:
    """One-qubit channel by name (``depolarizing``, ``bitflip``, ``phaseflip``,
    ``amplitude-damping``)."""
    return _CONSTRUCTORS[canonical_channel_name(name)](p)


def kron_channels(channels: Sequence[KrausChannel]) -> KrausChannel:
    """Tensor product of channels; the first channel acts on the leading qubit."""
    if not channels:
        raise DomainError("need at least one channel")
    if len(channels) == 1:
        return channels[0]

    def pair(a: KrausChannel, b: KrausChannel) -> KrausChannel:
        mats = np.einsum("aij,bkl->abikjl", a.matrices, b.matrices)
        da, db = a.matrices.shape[1], b.matrices.shape[1]
        mats = mats.reshape(a.num_terms * b.num_terms, da * db, da * db)
        w = np.outer(a.weights, b.weights).ravel()
        name = a.name if a.name == b.name else f"{a.name}*{b.name}"
        return KrausChannel(name, mats, w)

    return reduce(pair, channels)


def tensor_channel(channel: KrausChannel, group: Sequence[int]) -> KrausChannel:
    """``channel`` applied independently on every qubit of ``group``, as one channel."""
    if channel.arity != 1:
        raise DomainError("tensor_channel expects a one-qubit channel")
    if len(group) == 0:
        raise DomainError("group must be nonempty")
    return kron_channels([channel] * len(group))


@dataclass(frozen=True)
class GroupPlan:
    """Contiguous partition of the qubits into blocks of at most ``group_size``."""

    groups: tuple
    group_size: int

    @property
    def num_groups(self) -> int:
        return len(self.groups)


def plan_groups(num_qubits: int, group_size: int) -> GroupPlan:
    if group_size < 1:
        raise DomainError(f"group size must be >= 1, got {group_size}")
    if num_qubits < 1:
        raise DomainError(f"num_qubits must be >= 1, got {num_qubits}")
    if group_size > num_qubits:
        raise DomainError(f"group size {group_size} exceeds {num_qubits} qubits")
    groups = tuple(tuple(range(s, min(s + group_size, num_qubits)))
                   for s in range(0, num_qubits, group_size))
    return GroupPlan(groups, group_size)
