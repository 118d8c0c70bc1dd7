"""Low-rank evolution with eigenvalue truncation (LRET).

Per layer the gates act on the factor directly. The layer's noise is split
into qubit groups; for each group the Kraus images ``sqrt(p_a) K_a L`` are
concatenated column-wise and the result is immediately truncated back to its
leading eigenvectors. When the estimated per-step cost (the intermediate
rank) reaches the full dimension, evolution switches to full density matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from .channels import KrausChannel, kron_channels, plan_groups
from .circuits import Circuit
from .errors import DomainError
from .fdm import cached_channel, fdm_apply_layer
from .gates import _canonical, apply_matrix
from .state import (
    LFactor,
    Truncation,
    density_from_lfactor,
    gram_eigh,
    lfactor_from_basis_state,
    lfactor_from_density,
    truncate,
    truncate_spectrum,
)


@dataclass(frozen=True)
class LretConfig:
    epsilon: float = 1e-4
    group_size: int = 1
    fallback_enabled: bool = True
    rank_trace_enabled: bool = True

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.group_size < 1:
            raise DomainError(f"group size must be >= 1, got {self.group_size}")


@dataclass(frozen=True)
class TruncationRecord:
    layer: int
    group: int
    rank_prior: int
    """columns before the group's Kraus concatenation"""
    columns_in: int
    """columns entering the truncation"""
    rank_after: int
    intermediate_rank: float
    discarded_weight: float


@dataclass
class RankTrace:
    """Rank bookkeeping for one run."""

    records: List[TruncationRecord] = field(default_factory=list)
    layer_ranks: List[int] = field(default_factory=list)
    layer_intermediate_ranks: List[float] = field(default_factory=list)
    total_discarded: float = 0.0
    fallback_layer: Optional[int] = None

    @property
    def fell_back(self) -> bool:
        return self.fallback_layer is not None

    @property
    def max_rank(self) -> int:
        return max(self.layer_ranks, default=0)

    @property
    def max_intermediate_rank(self) -> float:
        return max(self.layer_intermediate_ranks, default=0.0)


def intermediate_rank(num_qubits: int, group_size: int, rank: int) -> float:
    """Cube root of ``N (4**M V)**3 / M``: the cost scale of one noise layer."""
    if min(num_qubits, group_size, rank) < 1:
        raise DomainError("intermediate_rank arguments must all be >= 1")
    return 4.0**group_size * rank * (num_qubits / group_size) ** (1.0 / 3.0)


def lret_apply_kraus_group(channel: KrausChannel, targets: Sequence[int], L: LFactor) -> LFactor:
    """Concatenate ``sqrt(p_a) K_a L`` over all Kraus terms, untruncated.

    The output has ``A * V`` columns, grouped term by term.
    """
    targets = list(targets)
    if len(targets) != channel.arity:
        raise DomainError(f"{channel.name} acts on {channel.arity} qubit(s), got targets {targets}")
    if any(not 0 <= t < L.num_qubits for t in targets):
        raise DomainError(f"targets {targets} out of range for {L.num_qubits} qubits")
    blocks = [apply_matrix(k, targets, L.columns, L.num_qubits) for k in channel.scaled]
    return LFactor(L.num_qubits, np.hstack(blocks))


def kraus_truncate(channel: KrausChannel, targets: Sequence[int], L: LFactor,
                   epsilon: float) -> Truncation:
    """Kraus concatenation followed by eigenvalue truncation, without forming
    the concatenated factor.

    Equivalent to ``truncate(lret_apply_kraus_group(channel, targets, L), epsilon)``.
    With the target axes split off, ``L`` becomes ``d`` row blocks ``L_k``; every
    Gram block of the concatenation is then ``sum_kl (K_a^dagger K_b)_kl L_k^dagger L_l``,
    so only the ``dV x dV`` block products are computed on the long axis.
    """
    n = L.num_qubits
    targets = list(targets)
    if len(targets) != channel.arity:
        raise DomainError(f"{channel.name} acts on {channel.arity} qubit(s), got targets {targets}")
    if any(not 0 <= t < n for t in targets) or len(set(targets)) != len(targets):
        raise DomainError(f"targets {targets} invalid for {n} qubits")
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")

    kraus = [_canonical(k, targets)[0] for k in channel.scaled if np.any(k)]
    targets = sorted(targets)
    S = np.stack(kraus)  # (A, d, d)
    A, d, _ = S.shape
    k = len(targets)
    V = L.rank
    rest = list(range(n))
    for t in targets:
        rest.remove(t)

    # rows: remaining qubits; columns: (target bits, column index)
    t = L.columns.reshape((2,) * n + (V,))
    Lr = np.moveaxis(t, targets, range(n - k, n)).reshape(2 ** (n - k), d * V)

    C = (Lr.conj().T @ Lr).reshape(d, V, d, V)
    W = np.einsum("aik,bil->abkl", S.conj(), S)
    gram = np.tensordot(W, C, axes=([2, 3], [0, 2]))  # (a, b, v, w)
    gram = gram.transpose(0, 2, 1, 3).reshape(A * V, A * V)

    w, u = gram_eigh(gram)
    kept, dropped = truncate_spectrum(w, epsilon)
    if kept == 0:
        return Truncation(LFactor(n, np.zeros((L.dim, 1), dtype=complex)), w[:0], dropped)

    U = u[:, :kept].reshape(A, V, kept)
    Wm = np.einsum("aik,avc->kvic", S, U).reshape(d * V, d * kept)
    new = (Lr @ Wm).reshape((2,) * n + (kept,))
    new = np.moveaxis(new, range(n - k, n), targets).reshape(L.dim, kept)
    return Truncation(LFactor(n, new), w[:kept], dropped)


def _initial_factor(num_qubits, initial) -> LFactor:
    if isinstance(initial, LFactor):
        if initial.num_qubits != num_qubits:
            raise DomainError("initial factor has the wrong number of qubits")
        return initial
    return lfactor_from_basis_state(num_qubits, int(initial))


def lret_run(circuit: Circuit, config: Optional[LretConfig] = None,
             initial_basis_index: Union[int, LFactor] = 0) -> tuple[LFactor, RankTrace]:
    """Run a circuit in factored form.

    Returns the final factor and its :class:`RankTrace`. If fallback is enabled
    and the intermediate rank reaches ``2**N``, the rest of the circuit runs on
    full density matrices and the returned factor comes from diagonalizing the
    final matrix.
    """
    config = config or LretConfig()
    n = circuit.num_qubits
    dim = 2**n
    eps = config.epsilon
    m = min(config.group_size, n)
    plan = plan_groups(n, m)
    L = _initial_factor(n, initial_basis_index)
    trace = RankTrace()

    for d, layer in enumerate(circuit.layers):
        for g in layer.gates:
            L = LFactor(n, g.apply_columns(L.columns, n))
        if L.rank > dim:
            res = truncate(L, eps)
            trace.total_discarded += res.discarded_weight
            L = res.factor

        noisy = layer.noisy_qubits()
        layer_vi = intermediate_rank(n, m, L.rank)
        for b, group in enumerate(plan.groups):
            qs = [q for q in group if q in noisy]
            if not qs:
                continue
            vi = intermediate_rank(n, m, L.rank)
            layer_vi = max(layer_vi, vi)
            if config.fallback_enabled and vi >= dim:
                trace.fallback_layer = d
                trace.layer_intermediate_ranks.append(layer_vi)
                remaining = [q for grp in plan.groups[b:] for q in grp]
                rho = fdm_apply_layer(layer, density_from_lfactor(L), skip_gates=True,
                                      noise_qubits=remaining)
                for later in circuit.layers[d + 1:]:
                    rho = fdm_apply_layer(later, rho)
                L = lfactor_from_density(rho)
                trace.layer_ranks.append(L.rank)
                return L, trace
            channel = kron_channels([cached_channel(*noisy[q]) for q in qs])
            res = kraus_truncate(channel, qs, L, eps)
            trace.total_discarded += res.discarded_weight
            if config.rank_trace_enabled:
                trace.records.append(TruncationRecord(
                    d, b, L.rank, channel.num_terms * L.rank, res.factor.rank, vi,
                    res.discarded_weight))
            L = res.factor
        trace.layer_ranks.append(L.rank)
        trace.layer_intermediate_ranks.append(layer_vi)
    return L, trace
