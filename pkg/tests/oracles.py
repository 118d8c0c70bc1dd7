"""Reference implementations the library is checked against.

Everything here builds full ``2**N x 2**N`` operators by explicit index
arithmetic, which is slow but shares no code path with the strided kernels.
"""
from __future__ import annotations

import numpy as np

from lret.gates import GroverIterate


def basis_bits(num_qubits: int) -> np.ndarray:
    """``bits[x, q]`` is the value of qubit ``q`` in basis index ``x`` (qubit 0 = MSB)."""
    idx = np.arange(2**num_qubits)
    return (idx[:, None] >> (num_qubits - 1 - np.arange(num_qubits))[None, :]) & 1


def embed(matrix: np.ndarray, targets, num_qubits: int) -> np.ndarray:
    """Dense embedding of a ``k``-qubit matrix acting on ``targets`` (in that order).

    ``E[x, y] = M[sub(x), sub(y)]`` when ``x`` and ``y`` agree off the targets.
    """
    bits = basis_bits(num_qubits)
    targets = list(targets)
    k = len(targets)
    weights = 2 ** np.arange(k - 1, -1, -1)
    sub = bits[:, targets] @ weights
    others = [q for q in range(num_qubits) if q not in targets]
    rest = bits[:, others] @ (2 ** np.arange(len(others) - 1, -1, -1)) if others else np.zeros(len(bits), int)
    same = rest[:, None] == rest[None, :]
    return np.where(same, np.asarray(matrix)[np.ix_(sub, sub)], 0.0)


def gate_operator(gate, num_qubits: int) -> np.ndarray:
    if isinstance(gate, GroverIterate):
        dim = 2**num_qubits
        s = np.full(dim, 1 / np.sqrt(dim))
        good = np.array([bin(x).count("1") <= gate.threshold for x in range(dim)])
        return (2 * np.outer(s, s) - np.eye(dim)) @ np.diag(np.where(good, -1.0, 1.0))
    return embed(gate.matrix, gate.targets, num_qubits)


def channel_apply(channel, targets, rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0].bit_length() - 1
    out = np.zeros_like(rho, dtype=complex)
    for w, k in zip(channel.weights, channel.matrices):
        E = embed(k, targets, n)
        out += w * E @ rho @ E.conj().T
    return out


def dense_run(circuit, make_channel) -> np.ndarray:
    """Density-matrix evolution with dense embedded operators throughout."""
    n = circuit.num_qubits
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[0, 0] = 1.0
    for layer in circuit.layers:
        for g in layer.gates:
            U = gate_operator(g, n)
            rho = U @ rho @ U.conj().T
        for q, (name, p) in layer.noisy_qubits().items():
            rho = channel_apply(make_channel(name, p), [q], rho)
    return rho


def dense_statevector(circuit) -> np.ndarray:
    n = circuit.num_qubits
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    for layer in circuit.layers:
        for g in layer.gates:
            psi = gate_operator(g, n) @ psi
    return psi


def random_factor(rng: np.random.Generator, num_qubits: int, rank: int, trace: float = 1.0) -> np.ndarray:
    cols = rng.normal(size=(2**num_qubits, rank)) + 1j * rng.normal(size=(2**num_qubits, rank))
    return cols * np.sqrt(trace / np.vdot(cols, cols).real)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def factor_with_spectrum(rng: np.random.Generator, num_qubits: int, spectrum) -> np.ndarray:
    """Columns ``U[:, :k] sqrt(diag(spectrum))`` for a Haar-like random ``U``."""
    spectrum = np.asarray(spectrum, dtype=float)
    U = random_unitary(rng, 2**num_qubits)
    return U[:, : len(spectrum)] * np.sqrt(spectrum)
