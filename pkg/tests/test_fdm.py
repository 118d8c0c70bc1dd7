from __future__ import annotations

import numpy as np
import pytest

from lret import (
    Circuit,
    DomainError,
    LFactor,
    Layer,
    NoisePlacement,
    RandomCircuitSpec,
    amplitude_damping,
    bit_flip,
    depolarizing,
    fdm_apply_channel,
    fdm_run,
    make_channel,
    random_circuit,
    standard_gate,
    statevector_run,
)
from lret.channels import CHANNEL_NAMES

from oracles import dense_run, dense_statevector, random_factor


def test_bit_flip_on_ground_state():
    assert np.allclose(fdm_apply_channel(bit_flip(0.2), [0], np.diag([1.0, 0.0])),
                       np.diag([0.8, 0.2]))


def test_depolarizing_layer_keeps_trace(rng):
    n = 4
    cols = random_factor(rng, n, 5)
    rho = cols @ cols.conj().T
    for q in range(n):
        rho = fdm_apply_channel(depolarizing(0.2), [q], rho)
    assert abs(np.trace(rho).real - 1) < 1e-12
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-12


def test_amplitude_damping_small_p():
    out = fdm_apply_channel(amplitude_damping(0.001), [0], np.diag([0.0, 1.0]))
    assert np.allclose(out, np.diag([0.001, 0.999]), atol=1e-15)


def test_channel_target_errors():
    with pytest.raises(DomainError):
        fdm_apply_channel(bit_flip(0.1), [2], np.eye(4) / 4)
    with pytest.raises(DomainError):
        fdm_apply_channel(bit_flip(0.1), [0, 1], np.eye(4) / 4)


@pytest.mark.parametrize("idx", [0, 5, 7])
def test_empty_circuit(idx):
    rho = fdm_run(Circuit(3, []), idx)
    want = np.zeros((8, 8))
    want[idx, idx] = 1
    assert np.array_equal(rho, want)


def test_initial_index_out_of_range():
    with pytest.raises(DomainError):
        fdm_run(Circuit(2, []), 4)
    with pytest.raises(DomainError):
        statevector_run(Circuit(2, []), 4)


def test_initial_factor(rng):
    cols = random_factor(rng, 3, 2)
    assert np.allclose(fdm_run(Circuit(3, []), LFactor(3, cols)), cols @ cols.conj().T)


@pytest.mark.parametrize("n, depth", [(2, 4), (5, 5), (8, 3), (10, 2)])
def test_noiseless_matches_statevector_oracle(n, depth):
    c = random_circuit(RandomCircuitSpec(n, depth, connectivity="global", seed=n))
    psi = dense_statevector(c)
    rho = fdm_run(c)
    assert np.max(np.abs(rho - np.outer(psi, psi.conj()))) < 1e-10
    assert np.max(np.abs(statevector_run(c) - psi)) < 1e-12


@pytest.mark.parametrize("channel", CHANNEL_NAMES)
@pytest.mark.parametrize("seed", range(2))
def test_noisy_matches_dense_oracle(channel, seed):
    c = random_circuit(RandomCircuitSpec(4, 4, density="sparse", seed=seed, channel=channel, p=0.05))
    assert np.max(np.abs(fdm_run(c) - dense_run(c, make_channel))) < 1e-12


@pytest.mark.parametrize("channel", CHANNEL_NAMES)
def test_noisy_output_is_density_matrix(channel):
    c = random_circuit(RandomCircuitSpec(6, 8, seed=3, channel=channel, p=0.02))
    rho = fdm_run(c)
    w = np.linalg.eigvalsh(rho)
    assert abs(np.trace(rho).real - 1) < 1e-10
    assert w.min() >= -1e-10
    assert abs(w.sum() - 1) < 1e-10


def test_layer_order_is_gates_then_noise():
    # amplitude damping after X on |0> leaves weight p on |0>; the other order would give 1-p
    c = Circuit(1, [Layer([standard_gate("X", [0])], [NoisePlacement("amplitude-damping", 0.1, [0])])])
    assert np.allclose(np.diag(fdm_run(c)).real, [0.1, 0.9])
