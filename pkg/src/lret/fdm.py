"""Full density matrix (FDM) reference simulator.

The ``2**N x 2**N`` matrix is handled as a ``2N``-qubit register (row bits
first, then column bits). Gates act as ``G`` on the row axes and ``conj(G)``
on the column axes; a ``k``-qubit channel acts as its superoperator on the
``2k`` matching axes. No ``2**N x 2**N`` embedding is built.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .channels import KrausChannel, make_channel
from .circuits import Circuit, Layer
from .errors import DomainError
from .gates import apply_gate_density, apply_matrix
from .state import LFactor, density_from_lfactor


@lru_cache(maxsize=256)
def cached_channel(name: str, p: float) -> KrausChannel:
    return make_channel(name, p)


def fdm_apply_channel(channel: KrausChannel, targets: Sequence[int], rho: np.ndarray) -> np.ndarray:
    """``sum_a p_a K_a rho K_a^dagger`` with the channel embedded on ``targets``."""
    targets = list(targets)
    if len(targets) != channel.arity:
        raise DomainError(f"{channel.name} acts on {channel.arity} qubit(s), got targets {targets}")
    rho = np.asarray(rho, dtype=np.complex128)
    n = rho.shape[0].bit_length() - 1
    if any(not 0 <= t < n for t in targets) or len(set(targets)) != len(targets):
        raise DomainError(f"channel targets {targets} invalid for {n} qubits")
    axes = targets + [n + t for t in targets]
    out = apply_matrix(channel.superoperator, axes, rho.reshape(-1), 2 * n)
    return out.reshape(rho.shape)


def initial_density(num_qubits: int, initial: Union[int, LFactor, np.ndarray] = 0) -> np.ndarray:
    if isinstance(initial, LFactor):
        if initial.num_qubits != num_qubits:
            raise DomainError("initial factor has the wrong number of qubits")
        return density_from_lfactor(initial)
    if isinstance(initial, np.ndarray):
        return np.array(initial, dtype=np.complex128)
    dim = 2**num_qubits
    if not 0 <= initial < dim:
        raise DomainError(f"basis index {initial} out of range for {num_qubits} qubits")
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[initial, initial] = 1.0
    return rho


def fdm_apply_layer(layer: Layer, rho: np.ndarray, *, skip_gates: bool = False,
                    noise_qubits: Sequence[int] | None = None) -> np.ndarray:
    """Apply a layer's gates, then its noise.

    ``noise_qubits`` restricts the noise to a subset of qubits (used when an
    evolution switches to full matrices partway through a layer).
    """
    if not skip_gates:
        for g in layer.gates:
            rho = apply_gate_density(g, rho)
    for q, (name, p) in sorted(layer.noisy_qubits().items()):
        if noise_qubits is not None and q not in noise_qubits:
            continue
        rho = fdm_apply_channel(cached_channel(name, p), [q], rho)
    return rho


def fdm_run(circuit: Circuit, initial_basis_index: Union[int, LFactor, np.ndarray] = 0) -> np.ndarray:
    """Evolve a density matrix through every layer of ``circuit``."""
    rho = initial_density(circuit.num_qubits, initial_basis_index)
    for layer in circuit.layers:
        rho = fdm_apply_layer(layer, rho)
    return rho


def statevector_run(circuit: Circuit, initial_basis_index: int = 0) -> np.ndarray:
    """Pure-state evolution of the gates of ``circuit``; noise placements are ignored."""
    n = circuit.num_qubits
    psi = np.zeros(2**n, dtype=np.complex128)
    if not 0 <= initial_basis_index < psi.size:
        raise DomainError(f"basis index {initial_basis_index} out of range for {n} qubits")
    psi[initial_basis_index] = 1.0
    for layer in circuit.layers:
        for g in layer.gates:
            psi = g.apply_columns(psi[:, None], n)[:, 0]
    return psi
