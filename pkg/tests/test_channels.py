from __future__ import annotations

import numpy as np
import pytest

from lret import (
    DomainError,
    KrausChannel,
    amplitude_damping,
    bit_flip,
    depolarizing,
    fdm_apply_channel,
    make_channel,
    phase_flip,
    plan_groups,
    tensor_channel,
    unitary_mix,
    von_neumann_entropy,
)
from lret.channels import canonical_channel_name, completeness_error, kron_channels

from oracles import channel_apply, random_factor, random_unitary

ONE_QUBIT = [depolarizing, bit_flip, phase_flip, amplitude_damping]
P_GRID = [0.0, 1e-4, 1e-3, 0.0033, 0.01, 0.1, 0.5, 0.9, 1.0]


def apply(channel, rho, targets=(0,)):
    return fdm_apply_channel(channel, list(targets), rho)


@pytest.mark.parametrize("p", [0.01, 0.2])
def test_depolarizing_on_ground_state(p):
    out = apply(depolarizing(p), np.diag([1.0, 0.0]))
    assert np.allclose(out, np.diag([1 - 2 * p / 3, 2 * p / 3]))


def test_depolarizing_zero_is_identity(rng):
    cols = random_factor(rng, 1, 2)
    rho = cols @ cols.conj().T
    assert np.allclose(apply(depolarizing(0.0), rho), rho)


def test_depolarizing_fixes_maximally_mixed():
    assert np.allclose(apply(depolarizing(0.3), np.eye(2) / 2), np.eye(2) / 2)


def test_bit_flip_on_ground_state():
    assert np.allclose(apply(bit_flip(0.07), np.diag([1.0, 0.0])), np.diag([0.93, 0.07]))


def test_bit_flip_one_is_x_conjugation(rng):
    cols = random_factor(rng, 1, 2)
    rho = cols @ cols.conj().T
    X = np.array([[0, 1], [1, 0]])
    assert np.allclose(apply(bit_flip(1.0), rho), X @ rho @ X)


@pytest.mark.parametrize("p", [0.001, 0.05, 0.3])
def test_bit_flip_entropy_bound(p, rng):
    psi = random_factor(rng, 1, 1)
    out = apply(bit_flip(p), psi @ psi.conj().T)
    bound = -(1 - p) * np.log2(1 - p) - p * np.log2(p)
    assert von_neumann_entropy(out) <= bound + 1e-12


def test_unitary_mix_x_is_bit_flip():
    a, b = unitary_mix(0.2, np.array([[0, 1], [1, 0]])), bit_flip(0.2)
    assert np.array_equal(a.matrices, b.matrices)
    assert np.array_equal(a.weights, b.weights)


def test_unitary_mix_z_dephases_plus_state():
    p = 0.15
    out = apply(unitary_mix(p, np.diag([1, -1])), np.full((2, 2), 0.5))
    assert out[0, 1] == pytest.approx(0.5 * (1 - 2 * p))
    assert out[0, 0] == pytest.approx(0.5)


def test_unitary_mix_identity(rng):
    cols = random_factor(rng, 1, 2)
    rho = cols @ cols.conj().T
    assert np.allclose(apply(unitary_mix(0.6, np.eye(2)), rho), rho)


def test_unitary_mix_rejects_non_unitary():
    with pytest.raises(DomainError):
        unitary_mix(0.1, np.array([[1, 1], [0, 1]]))


def test_phase_flip_matches_unitary_mix_z():
    assert np.array_equal(phase_flip(0.3).matrices, unitary_mix(0.3, np.diag([1, -1])).matrices)


def test_amplitude_damping_on_excited_state():
    assert np.allclose(apply(amplitude_damping(0.25), np.diag([0.0, 1.0])), np.diag([0.25, 0.75]))


def test_amplitude_damping_fixes_ground_state():
    assert np.allclose(apply(amplitude_damping(0.4), np.diag([1.0, 0.0])), np.diag([1.0, 0.0]))


def test_full_amplitude_damping_resets(rng):
    cols = random_factor(rng, 1, 2)
    out = apply(amplitude_damping(1.0), cols @ cols.conj().T)
    assert np.allclose(out, np.diag([1.0, 0.0]))


def test_amplitude_damping_unit_weights():
    assert amplitude_damping(0.1).weights.tolist() == [1.0, 1.0]


@pytest.mark.parametrize("ctor", ONE_QUBIT)
@pytest.mark.parametrize("p", [-0.01, 1.01])
def test_probability_out_of_range(ctor, p):
    with pytest.raises(DomainError):
        ctor(p)


@pytest.mark.parametrize("ctor", ONE_QUBIT)
@pytest.mark.parametrize("p", P_GRID)
def test_completeness(ctor, p):
    assert completeness_error(ctor(p)) <= 1e-12


@pytest.mark.parametrize("ctor", ONE_QUBIT)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_tensor_completeness(ctor, k):
    ch = tensor_channel(ctor(0.0033), list(range(k)))
    assert ch.num_terms == ctor(0.1).num_terms ** k
    assert ch.arity == k
    assert completeness_error(ch) <= 1e-12


def test_completeness_rejects_bad_channel():
    with pytest.raises(DomainError):
        KrausChannel("bad", np.stack([np.eye(2)]), [0.5])


def test_two_qubit_depolarizing_weights():
    p = 0.03
    ch = tensor_channel(depolarizing(p), [0, 1])
    single = np.array([1 - p, p / 3, p / 3, p / 3])
    assert ch.num_terms == 16
    assert np.allclose(ch.weights, np.outer(single, single).ravel())
    assert ch.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_tensor_of_single_qubit_is_unchanged():
    ch = bit_flip(0.2)
    assert tensor_channel(ch, [3]) is ch


@pytest.mark.parametrize("k", [1, 2, 4])
def test_tensor_weights_sum_to_one(k):
    assert tensor_channel(depolarizing(0.37), list(range(k))).weights.sum() == pytest.approx(1.0)


def test_tensor_matches_sequential_application(rng):
    n = 3
    cols = random_factor(rng, n, 3)
    rho = cols @ cols.conj().T
    a, b = amplitude_damping(0.2), depolarizing(0.1)
    joint = fdm_apply_channel(kron_channels([a, b]), [2, 0], rho)
    seq = fdm_apply_channel(b, [0], fdm_apply_channel(a, [2], rho))
    assert np.max(np.abs(joint - seq)) < 1e-12


def test_tensor_rejects_two_qubit_input():
    with pytest.raises(DomainError):
        tensor_channel(tensor_channel(bit_flip(0.1), [0, 1]), [0, 1])


@pytest.mark.parametrize("ctor", ONE_QUBIT)
def test_strided_channel_matches_dense(ctor, rng):
    n = 4
    cols = random_factor(rng, n, 3)
    rho = cols @ cols.conj().T
    ch = tensor_channel(ctor(0.2), [0, 1])
    for targets in ([0, 1], [3, 1], [2, 0]):
        got = fdm_apply_channel(ch, targets, rho)
        assert np.max(np.abs(got - channel_apply(ch, targets, rho))) < 1e-12
        assert abs(np.trace(got).real - np.trace(rho).real) < 1e-12


def test_random_unitary_mix_preserves_trace(rng):
    ch = unitary_mix(0.4, random_unitary(rng, 2))
    assert completeness_error(ch) <= 1e-12
    cols = random_factor(rng, 3, 2)
    out = fdm_apply_channel(ch, [1], cols @ cols.conj().T)
    assert abs(np.trace(out).real - 1.0) < 1e-12


def test_arity_mismatch():
    with pytest.raises(DomainError):
        fdm_apply_channel(bit_flip(0.1), [0, 1], np.eye(4) / 4)


# -- names and grouping -------------------------------------------------------

@pytest.mark.parametrize("alias, name", [
    ("Depolarizing", "depolarizing"),
    ("bit_flip", "bitflip"),
    ("phase-flip", "phaseflip"),
    ("amplitude_damping", "amplitude-damping"),
])
def test_channel_aliases(alias, name):
    assert canonical_channel_name(alias) == name
    assert make_channel(alias, 0.1).name == name


def test_unknown_channel():
    with pytest.raises(DomainError):
        make_channel("thermal", 0.1)


def test_plan_five_by_two():
    plan = plan_groups(5, 2)
    assert plan.groups == ((0, 1), (2, 3), (4,))
    assert [tensor_channel(depolarizing(0.01), g).num_terms for g in plan.groups] == [16, 16, 4]


def test_plan_single_group():
    assert plan_groups(4, 4).groups == ((0, 1, 2, 3),)


def test_plan_singletons():
    assert plan_groups(3, 1).groups == ((0,), (1,), (2,))


@pytest.mark.parametrize("n, m", [(3, 0), (3, 4), (0, 1)])
def test_plan_errors(n, m):
    with pytest.raises(DomainError):
        plan_groups(n, m)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("m", range(1, 5))
def test_plan_is_partition(n, m):
    if m > n:
        return
    plan = plan_groups(n, m)
    flat = [q for g in plan.groups for q in g]
    assert flat == list(range(n))
    assert all(len(g) <= m for g in plan.groups)
