"""Observables and error measures for factored and dense states."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .state import LFactor, subspace_eigendecomposition

#: eigenvalues at or below this contribute nothing to the entropy
ENTROPY_FLOOR = 1e-15


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Computational-basis masses with their raw (possibly sub-unit) total.

    Truncated factors lose trace, so ``masses`` may sum to less than one;
    :attr:`normalized` rescales them to a proper distribution.
    """

    masses: np.ndarray
    raw_sum: float

    @classmethod
    def from_masses(cls, masses) -> "ProbabilityDistribution":
        m = np.asarray(masses, dtype=np.float64)
        if m.size and m.min() < -1e-12:
            raise DomainError(f"negative probability mass {m.min():.3e}")
        m = np.clip(m, 0.0, None)
        return cls(m, float(m.sum()))

    @property
    def normalized(self) -> np.ndarray:
        if self.raw_sum <= 0:
            raise DomainError("distribution has zero total mass")
        return self.masses / self.raw_sum

    def __len__(self):
        return len(self.masses)


def probabilities_from_lfactor(L: LFactor) -> ProbabilityDistribution:
    """``Prob(x) = sum_v |L[x, v]|**2``; the density matrix is never formed."""
    cols = L.columns
    return ProbabilityDistribution.from_masses(np.einsum("xv,xv->x", cols.real, cols.real)
                                               + np.einsum("xv,xv->x", cols.imag, cols.imag))


def probabilities_from_density(rho: np.ndarray) -> ProbabilityDistribution:
    return ProbabilityDistribution.from_masses(np.real(np.diagonal(rho)))


def expectation(L: LFactor, observable: np.ndarray) -> float:
    """``Tr(L^dagger O L)``.

    ``observable`` is either a dense Hermitian matrix or a 1-D array holding
    the diagonal of an observable that is diagonal in the computational basis.
    """
    obs = np.asarray(observable)
    cols = L.columns
    if obs.ndim == 1:
        if obs.shape[0] != L.dim:
            raise DomainError(f"diagonal observable has length {obs.shape[0]}, expected {L.dim}")
        if np.max(np.abs(np.imag(obs)), initial=0.0) > 1e-10:
            raise DomainError("observable is not Hermitian")
        return float(np.sum(np.real(obs)[:, None] * np.abs(cols) ** 2))
    if obs.shape != (L.dim, L.dim):
        raise DomainError(f"observable shape {obs.shape} does not match dimension {L.dim}")
    if np.max(np.abs(obs - obs.conj().T)) > 1e-10:
        raise DomainError("observable is not Hermitian")
    value = np.vdot(cols, obs @ cols)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise DomainError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def sample(dist: ProbabilityDistribution, shots: int, seed=None) -> np.ndarray:
    """Multinomial counts per basis index drawn from the normalized distribution."""
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    p = dist.normalized
    return np.random.default_rng(seed).multinomial(shots, p / p.sum())


Distributionish = Union[ProbabilityDistribution, np.ndarray, LFactor]


def _masses(x: Distributionish, normalize: bool) -> np.ndarray:
    if isinstance(x, ProbabilityDistribution):
        m = x.masses
    elif isinstance(x, LFactor):
        m = probabilities_from_lfactor(x).masses
    else:
        a = np.asarray(x)
        m = np.real(np.diagonal(a)) if a.ndim == 2 else np.asarray(a, dtype=np.float64)
    if normalize:
        m = m / m.sum()
    return m


def variational_distance(a: Distributionish, b: Distributionish, *, normalize: bool = False) -> float:
    """``T(a, b) = sum_x |a_x - b_x|`` over computational-basis masses (no 1/2 factor).

    Density matrices contribute their diagonals. With ``normalize=True`` both
    inputs are first rescaled to unit mass.
    """
    ma, mb = _masses(a, normalize), _masses(b, normalize)
    if ma.shape != mb.shape:
        raise DomainError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return float(np.sum(np.abs(ma - mb)))


def distortion(rho_lret: Distributionish, rho_exact: Distributionish,
               rho_noiseless: Distributionish) -> float:
    """Truncation error relative to the noise-induced change.

    ``T(lret, exact) / T(exact, noiseless)`` with every input normalized to a
    probability distribution. Returns ``nan`` when the noise changed nothing
    (denominator below ``1e-14``).
    """
    den = variational_distance(rho_exact, rho_noiseless, normalize=True)
    if den < 1e-14:
        return math.nan
    return variational_distance(rho_lret, rho_exact, normalize=True) / den


def von_neumann_entropy(x: Union[np.ndarray, LFactor]) -> float:
    """``-sum lambda log2 lambda`` of the trace-normalized spectrum.

    Accepts an :class:`LFactor` (spectrum from its Gram matrix), a dense
    density matrix, or a 1-D array of eigenvalues.
    """
    if isinstance(x, LFactor):
        w = subspace_eigendecomposition(x).eigenvalues
    else:
        a = np.asarray(x)
        w = np.linalg.eigvalsh(0.5 * (a + a.conj().T)) if a.ndim == 2 else a.astype(float)
    w = np.clip(np.real(w), 0.0, None)
    total = w.sum()
    if total <= 0:
        raise DomainError("cannot take the entropy of a zero state")
    w = w / total
    w = w[w > ENTROPY_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def effective_rank(entropy_bits: float, base: float = 2.0) -> float:
    """``base ** S`` for an entropy ``S`` measured in bits.

    ``base=2`` gives the number of equally weighted eigenvectors with the
    same entropy; ``base=math.e`` gives the ``e**S`` variant.
    """
    return float(base**entropy_bits)


def shannon_bits(weights) -> float:
    """``-sum p log2 p`` over the positive entries of ``weights``."""
    w = np.asarray(weights, dtype=float)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


_CHANNEL_KINDS = {"bit_flip": 1, "bitflip": 1, "depolarizing": 3}


def entropy_change_bound(channel_kind: str, p: float, num_qubits: int,
                         first_order: bool = False) -> float:
    """Upper bound on the entropy gained by one layer of one-qubit channels.

    For ``bit_flip`` the exact bound is ``-N p log2 p - N (1-p) log2 (1-p)``;
    for ``depolarizing`` the first term uses ``p/3``. ``first_order=True``
    returns the small-``p`` forms ``N (p - p log2 p)`` and ``N (p - p log2 (p/3))``.
    """
    if channel_kind not in _CHANNEL_KINDS:
        raise DomainError(f"channel kind must be 'bit_flip' or 'depolarizing', got {channel_kind!r}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    branches = _CHANNEL_KINDS[channel_kind]
    q = p / branches
    if first_order:
        return num_qubits * (p - p * math.log2(q))
    return num_qubits * (-p * math.log2(q) - (1 - p) * math.log2(1 - p))


def rank_growth_factor(channel_kind: str, p: float) -> float:
    """Per-qubit growth of the effective rank, ``(2/p)**p - 1`` for bit flip
    and ``(6/p)**p - 1`` for depolarizing noise."""
    if channel_kind not in _CHANNEL_KINDS:
        raise DomainError(f"channel kind must be 'bit_flip' or 'depolarizing', got {channel_kind!r}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    return (2 * _CHANNEL_KINDS[channel_kind] / p) ** p - 1
