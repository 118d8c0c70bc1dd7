"""Low-rank noisy quantum circuit simulation with eigenvalue truncation."""

__version__ = "0.1.0"

from .errors import DomainError, InvariantError
from .state import (
    EigenPair,
    LFactor,
    Truncation,
    density_from_lfactor,
    eigenvalue_truncation,
    lfactor_from_basis_state,
    lfactor_from_density,
    subspace_eigendecomposition,
    truncate,
)
from .gates import Gate, GroverIterate, apply_gate_density, apply_gate_lfactor, standard_gate
from .channels import (
    GroupPlan,
    KrausChannel,
    amplitude_damping,
    bit_flip,
    depolarizing,
    make_channel,
    phase_flip,
    plan_groups,
    tensor_channel,
    unitary_mix,
)
from .circuits import (
    Circuit,
    Layer,
    NoisePlacement,
    RandomCircuitSpec,
    grover_circuit,
    grover_iterations,
    mcvqe_state_prep,
    random_circuit,
    with_noise,
)
from .fdm import fdm_apply_channel, fdm_run, statevector_run
from .engine import (
    LretConfig,
    RankTrace,
    intermediate_rank,
    kraus_truncate,
    lret_apply_kraus_group,
    lret_run,
)
from .metrics import (
    ProbabilityDistribution,
    distortion,
    effective_rank,
    entropy_change_bound,
    expectation,
    probabilities_from_density,
    probabilities_from_lfactor,
    rank_growth_factor,
    sample,
    variational_distance,
    von_neumann_entropy,
)
