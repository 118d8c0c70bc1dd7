"""Layered noisy circuits, benchmark circuit generators, and the circuit file format.

A circuit is a sequence of layers. Each layer applies its gates (on pairwise
disjoint targets) and then its noise placements, matching the gate-then-noise
pattern of a noisy layer.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channels import canonical_channel_name
from .errors import DomainError
from .gates import (
    ONE_QUBIT_GATES,
    TWO_QUBIT_GATES,
    Gate,
    GroverIterate,
    hamming_weights,
    is_parametrized,
    standard_gate,
)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class NoisePlacement:
    """A one-qubit channel applied independently to each listed qubit."""

    channel: str
    p: float
    qubits: tuple

    def __post_init__(self):
        object.__setattr__(self, "channel", canonical_channel_name(self.channel))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"noise strength must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class Layer:
    gates: tuple = ()
    noise: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "noise", tuple(self.noise))

    def noisy_qubits(self) -> dict:
        """Map qubit -> (channel name, p) for every noise placement in the layer."""
        return {q: (n.channel, n.p) for n in self.noise for q in n.qubits}


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    layers: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.num_qubits < 1:
            raise DomainError(f"num_qubits must be >= 1, got {self.num_qubits}")
        for d, layer in enumerate(self.layers):
            _validate_layer(layer, self.num_qubits, d)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def gate_count(self) -> int:
        return sum(len(layer.gates) for layer in self.layers)

    @property
    def has_noise(self) -> bool:
        return any(layer.noise for layer in self.layers)

    def noiseless(self) -> "Circuit":
        """The same gates with every noise placement removed."""
        return Circuit(self.num_qubits, [Layer(layer.gates) for layer in self.layers])


def _validate_layer(layer: Layer, n: int, d: int) -> None:
    seen: set = set()
    for g in layer.gates:
        targets = set(g.targets)
        if max(g.targets) >= n:
            raise DomainError(f"layer {d}: gate {g.name} targets {g.targets} exceed {n} qubits")
        if targets & seen:
            raise DomainError(f"layer {d}: gate targets overlap at {sorted(targets & seen)}")
        seen |= targets
    noisy: set = set()
    for placement in layer.noise:
        qs = set(placement.qubits)
        if any(not 0 <= q < n for q in qs):
            raise DomainError(f"layer {d}: noise qubits {placement.qubits} out of range")
        if qs & noisy or len(qs) != len(placement.qubits):
            raise DomainError(f"layer {d}: a qubit carries more than one noise channel")
        noisy |= qs


def with_noise(circuit: Circuit, channel: str, p: float, mode: str = "dense") -> Circuit:
    """Attach a one-qubit channel to every layer.

    ``mode="dense"`` puts the channel on every qubit of every layer;
    ``mode="sparse"`` only on qubits touched by a gate in that layer.
    """
    if mode not in ("dense", "sparse"):
        raise DomainError(f"noise mode must be 'dense' or 'sparse', got {mode!r}")
    layers = []
    for layer in circuit.layers:
        if mode == "dense":
            qubits = range(circuit.num_qubits)
        else:
            qubits = sorted({q for g in layer.gates for q in g.targets})
        noise = tuple(NoisePlacement(channel, p, (q,)) for q in qubits)
        layers.append(Layer(layer.gates, noise))
    return Circuit(circuit.num_qubits, layers)


@dataclass(frozen=True)
class RandomCircuitSpec:
    num_qubits: int
    depth: int
    density: str = "dense"
    sparsity: float = 1.0
    connectivity: str = "local"
    noise_mode: str = "dense"
    seed: int = 0
    channel: str = "depolarizing"
    p: float = 0.0

    def __post_init__(self):
        if self.num_qubits < 1 or self.depth < 1:
            raise DomainError("num_qubits and depth must be >= 1")
        if self.density not in ("dense", "sparse"):
            raise DomainError(f"density must be 'dense' or 'sparse', got {self.density!r}")
        if self.connectivity not in ("local", "global"):
            raise DomainError(f"connectivity must be 'local' or 'global', got {self.connectivity!r}")
        if not 0.0 < self.sparsity <= 1.0:
            raise DomainError(f"sparsity fraction must lie in (0, 1], got {self.sparsity}")


def _random_one_qubit(rng, q):
    name = ONE_QUBIT_GATES[rng.integers(len(ONE_QUBIT_GATES))]
    angle = rng.uniform(0.0, 2 * np.pi) if is_parametrized(name) else None
    return standard_gate(name, [q], angle)


def _random_two_qubit(rng, a, b):
    name = TWO_QUBIT_GATES[rng.integers(len(TWO_QUBIT_GATES))]
    if rng.random() < 0.5:
        a, b = b, a
    return standard_gate(name, [a, b])


def random_circuit(spec: RandomCircuitSpec) -> Circuit:
    """Random benchmarking circuit, deterministic in ``spec.seed``.

    Each layer first selects its active qubits (all of them for dense
    circuits, each with probability ``sparsity`` otherwise), then walks them in
    order (local) or in a shuffled order (global), placing a two-qubit gate on
    the current and next qubit with probability 1/2 when the pair is allowed
    and a one-qubit gate otherwise. Local pairs must be index neighbours.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.num_qubits
    layers = []
    for _ in range(spec.depth):
        if spec.density == "dense":
            active = list(range(n))
        else:
            active = [q for q in range(n) if rng.random() < spec.sparsity]
        if spec.connectivity == "global":
            active = list(rng.permutation(active))
        gates = []
        i = 0
        while i < len(active):
            q = int(active[i])
            nxt = int(active[i + 1]) if i + 1 < len(active) else None
            pair_ok = nxt is not None and (spec.connectivity == "global" or nxt == q + 1)
            if pair_ok and rng.random() < 0.5:
                gates.append(_random_two_qubit(rng, q, nxt))
                i += 2
            else:
                gates.append(_random_one_qubit(rng, q))
                i += 1
        layers.append(Layer(gates))
    circuit = Circuit(n, layers)
    if spec.p > 0:
        circuit = with_noise(circuit, spec.channel, spec.p, spec.noise_mode)
    return circuit


def mcvqe_state_prep(num_qubits: int, angles: Optional[Sequence[float]] = None,
                     seed: Optional[int] = None, channel: str = "depolarizing",
                     p: float = 0.0, noise_mode: str = "sparse") -> Circuit:
    """Ladder circuit preparing a generalized-amplitude W state.

    ``RY(theta_1)`` on qubit 0, then for each qubit ``q >= 1`` an ``RY2Q_FY``
    rotation on ``(q-1, q)`` followed by a CZ coupler on the same pair. Without
    ``angles`` they are drawn uniformly from ``[0, 2 pi)`` using ``seed``.
    """
    if angles is None:
        angles = np.random.default_rng(seed).uniform(0.0, 2 * np.pi, size=num_qubits)
    angles = [float(a) for a in angles]
    if len(angles) != num_qubits:
        raise DomainError(f"expected {num_qubits} angles, got {len(angles)}")
    layers = [Layer([standard_gate("RY", [0], angles[0])])]
    for q in range(1, num_qubits):
        layers.append(Layer([standard_gate("RY2Q_FY", [q - 1, q], angles[q])]))
        layers.append(Layer([standard_gate("CZ", [q - 1, q])]))
    circuit = Circuit(num_qubits, layers)
    if p > 0:
        circuit = with_noise(circuit, channel, p, noise_mode)
    return circuit


def grover_iterations(num_qubits: int, hamming_threshold: int) -> tuple[int, float, int]:
    """``(good_count, p_good, iterate_count)`` for the Hamming-weight search."""
    if not 1 <= hamming_threshold <= num_qubits:
        raise DomainError(f"hamming threshold must lie in [1, {num_qubits}], got {hamming_threshold}")
    good = sum(math.comb(num_qubits, w) for w in range(hamming_threshold + 1))
    p_good = good / 2**num_qubits
    return good, p_good, math.floor(math.pi / 4 * math.sqrt(1 / p_good))


def good_state_mask(num_qubits: int, hamming_threshold: int) -> np.ndarray:
    return hamming_weights(num_qubits) <= hamming_threshold


def grover_circuit(num_qubits: int, hamming_threshold: int, channel: str = "depolarizing",
                   p: float = 0.0, noise_mode: str = "dense") -> Circuit:
    """Hadamard layer followed by the optimal number of Grover iterates.

    Each iterate occupies its own layer as a single whole-register gate.
    """
    _, _, r = grover_iterations(num_qubits, hamming_threshold)
    layers = [Layer([standard_gate("H", [q]) for q in range(num_qubits)])]
    layers += [Layer([GroverIterate(num_qubits, hamming_threshold)]) for _ in range(r)]
    circuit = Circuit(num_qubits, layers)
    if p > 0:
        circuit = with_noise(circuit, channel, p, noise_mode)
    return circuit


# -- file format -----------------------------------------------------------

def _gate_to_dict(g) -> dict:
    if isinstance(g, GroverIterate):
        return {"name": g.name, "targets": list(g.targets), "hw_threshold": g.threshold}
    doc = {"name": g.name, "targets": list(g.targets)}
    if g.angle is not None:
        doc["angle"] = format(g.angle, ".17g")
    return doc


def _gate_from_dict(doc: dict, num_qubits: int):
    name = str(doc["name"]).upper()
    if name == "GROVER":
        g = GroverIterate(num_qubits, int(doc["hw_threshold"]))
        if list(doc.get("targets", g.targets)) != list(g.targets):
            raise DomainError("GROVER gate must target every qubit in order")
        return g
    angle = doc.get("angle")
    return standard_gate(name, [int(t) for t in doc["targets"]],
                         None if angle is None else float(angle))


def circuit_to_dict(circuit: Circuit) -> dict:
    return {
        "version": FORMAT_VERSION,
        "num_qubits": circuit.num_qubits,
        "layers": [
            {
                "gates": [_gate_to_dict(g) for g in layer.gates],
                "noise": [{"channel": n.channel, "p": n.p, "qubits": list(n.qubits)}
                          for n in layer.noise],
            }
            for layer in circuit.layers
        ],
    }


def circuit_from_dict(doc: dict) -> Circuit:
    version = doc.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DomainError(f"unsupported circuit format version {version}")
    n = int(doc["num_qubits"])
    layers = []
    for layer in doc.get("layers", []):
        gates = [_gate_from_dict(g, n) for g in layer.get("gates", [])]
        noise = [NoisePlacement(x["channel"], x["p"], x["qubits"]) for x in layer.get("noise", [])]
        layers.append(Layer(gates, noise))
    return Circuit(n, layers)


def dumps_circuit(circuit: Circuit) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(circuit_to_dict(circuit), indent=2, sort_keys=True) + "\n"


def loads_circuit(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_circuit(circuit))


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return loads_circuit(fh.read())
