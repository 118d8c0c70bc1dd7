"""Benchmark harness: build a circuit, run the engines, and report.

A report is a plain dict, reproducible from its ``config`` echo: every seed
used is derived from ``config["seed"]`` and ``config["cell_index"]``.
"""
from __future__ import annotations

import csv
import io
import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .channels import canonical_channel_name
from .circuits import (
    Circuit,
    RandomCircuitSpec,
    good_state_mask,
    grover_circuit,
    load_circuit,
    mcvqe_state_prep,
    random_circuit,
)
from .engine import LretConfig, lret_run
from .errors import DomainError
from .fdm import fdm_run, statevector_run
from .metrics import (
    ProbabilityDistribution,
    distortion,
    probabilities_from_density,
    probabilities_from_lfactor,
    sample,
)
from .state import EIGENVALUE_FLOOR

log = logging.getLogger(__name__)

MODES = ("random", "grover", "mcvqe", "file")
METHODS = ("lret", "fdm", "both")
CSV_COLUMNS = ("N", "D", "channel", "p", "epsilon", "method", "wall_ms", "final_rank",
               "max_intermediate_rank", "distortion", "final_trace", "seed")
#: dense eigensolves for the FDM numerical rank are skipped above this size
FDM_RANK_MAX_QUBITS = 10


@dataclass(frozen=True)
class RunConfig:
    mode: str = "random"
    qubits: Optional[int] = None
    depth: Optional[int] = None
    channel: str = "depolarizing"
    p: float = 1e-3
    epsilon: float = 1e-4
    epsilon_over_p: Optional[float] = None
    group_size: int = 1
    method: str = "both"
    density: str = "dense"
    sparsity: float = 0.5
    connectivity: str = "local"
    noise_mode: str = "dense"
    hw_threshold: int = 2
    shots: int = 0
    seed: int = 0
    cell_index: int = 0
    circuit: Optional[str] = None
    fallback: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}")
        object.__setattr__(self, "channel", canonical_channel_name(self.channel))
        if self.mode == "file":
            if not self.circuit:
                raise DomainError("--mode file requires --circuit")
        elif self.qubits is None or self.qubits < 1:
            raise DomainError(f"--mode {self.mode} requires --qubits >= 1")
        if self.mode == "random" and (self.depth is None or self.depth < 1):
            raise DomainError("--mode random requires --depth >= 1")
        if self.shots < 0:
            raise DomainError("--shots must be >= 0")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"--p must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.effective_epsilon < 1.0:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.effective_epsilon}")

    @property
    def effective_epsilon(self) -> float:
        if self.epsilon_over_p is not None:
            return self.epsilon_over_p * self.p
        return self.epsilon


def derive_seeds(master_seed: int, cell_index: int) -> tuple[int, int]:
    """(circuit seed, sampling seed) for one grid cell, derived from the master seed."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(cell_index),))
    a, b = ss.generate_state(2, dtype=np.uint64)
    return int(a), int(b)


def build_circuit(cfg: RunConfig, circuit_seed: int) -> Circuit:
    if cfg.mode == "random":
        return random_circuit(RandomCircuitSpec(
            cfg.qubits, cfg.depth, density=cfg.density, sparsity=cfg.sparsity,
            connectivity=cfg.connectivity, noise_mode=cfg.noise_mode, seed=circuit_seed,
            channel=cfg.channel, p=cfg.p))
    if cfg.mode == "grover":
        return grover_circuit(cfg.qubits, cfg.hw_threshold, cfg.channel, cfg.p, cfg.noise_mode)
    if cfg.mode == "mcvqe":
        return mcvqe_state_prep(cfg.qubits, seed=circuit_seed, channel=cfg.channel, p=cfg.p,
                                noise_mode=cfg.noise_mode)
    return load_circuit(cfg.circuit)


def numerical_rank(rho: np.ndarray, floor: float = EIGENVALUE_FLOOR) -> int:
    return int(np.count_nonzero(np.linalg.eigvalsh(rho) > floor))


def _counts_summary(counts: np.ndarray, n: int, good: Optional[np.ndarray]) -> dict:
    nz = np.flatnonzero(counts)
    doc = {"histogram": {format(int(i), f"0{n}b"): int(counts[i]) for i in nz}}
    if good is not None:
        g = int(counts[good].sum())
        doc.update(good=g, bad=int(counts.sum()) - g)
    return doc


def run_simulation(cfg: RunConfig) -> dict:
    """Run one configuration and return its report.

    Wall times cover only the engine calls. With ``method="both"`` a
    noiseless statevector run supplies the reference for the distortion.
    """
    circuit_seed, sampling_seed = derive_seeds(cfg.seed, cfg.cell_index)
    circuit = build_circuit(cfg, circuit_seed)
    n = circuit.num_qubits
    eps = cfg.effective_epsilon
    good = good_state_mask(n, cfg.hw_threshold) if cfg.mode == "grover" else None

    report: dict = {
        "tool_version": __version__,
        "config": asdict(cfg),
        "resolved": {"N": n, "D": circuit.depth, "epsilon": eps, "gate_count": circuit.gate_count},
        "seeds": {"master": cfg.seed, "cell_index": cfg.cell_index,
                  "circuit": circuit_seed, "sampling": sampling_seed},
        "wall_ms": {},
        "final_rank": {},
        "final_trace": {},
        "rank_trajectory": None,
        "intermediate_rank_trajectory": None,
        "max_intermediate_rank": None,
        "fell_back": None,
        "distortion": None,
        "speedup": None,
        "good_probability": {},
        "counts": {},
    }
    dists: dict = {}

    if cfg.method in ("lret", "both"):
        lcfg = LretConfig(epsilon=eps, group_size=cfg.group_size, fallback_enabled=cfg.fallback)
        t0 = time.perf_counter()
        L, trace = lret_run(circuit, lcfg)
        report["wall_ms"]["lret"] = (time.perf_counter() - t0) * 1e3
        report["final_rank"]["lret"] = L.rank
        report["final_trace"]["lret"] = L.trace
        report["rank_trajectory"] = list(trace.layer_ranks)
        report["intermediate_rank_trajectory"] = list(trace.layer_intermediate_ranks)
        report["max_intermediate_rank"] = trace.max_intermediate_rank
        report["fell_back"] = trace.fell_back
        dists["lret"] = probabilities_from_lfactor(L)

    if cfg.method in ("fdm", "both"):
        t0 = time.perf_counter()
        rho = fdm_run(circuit)
        report["wall_ms"]["fdm"] = (time.perf_counter() - t0) * 1e3
        report["final_rank"]["fdm"] = numerical_rank(rho) if n <= FDM_RANK_MAX_QUBITS else None
        report["final_trace"]["fdm"] = float(np.trace(rho).real)
        dists["fdm"] = probabilities_from_density(rho)
        del rho

    if cfg.method == "both":
        psi = statevector_run(circuit)
        noiseless = ProbabilityDistribution.from_masses(np.abs(psi) ** 2)
        d = distortion(dists["lret"], dists["fdm"], noiseless)
        report["distortion"] = None if math.isnan(d) else d
        report["speedup"] = report["wall_ms"]["fdm"] / max(report["wall_ms"]["lret"], 1e-9)

    for name, dist in dists.items():
        if good is not None:
            report["good_probability"][name] = float(dist.normalized[good].sum())
        if cfg.shots:
            counts = sample(dist, cfg.shots, sampling_seed)
            report["counts"][name] = _counts_summary(counts, n, good)
    return report


def config_from_report(report: dict) -> RunConfig:
    """Rebuild the configuration echoed in a report."""
    names = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in report["config"].items() if k in names})


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_rows(report: dict) -> List[dict]:
    """Flat CSV rows, one per engine that ran."""
    cfg, res = report["config"], report["resolved"]
    rows = []
    for method in ("lret", "fdm"):
        if method not in report["wall_ms"]:
            continue
        is_lret = method == "lret"
        rows.append({
            "N": res["N"], "D": res["D"], "channel": cfg["channel"], "p": cfg["p"],
            "epsilon": res["epsilon"], "method": method, "wall_ms": report["wall_ms"][method],
            "final_rank": report["final_rank"][method],
            "max_intermediate_rank": report["max_intermediate_rank"] if is_lret else None,
            "distortion": report["distortion"] if is_lret else None,
            "final_trace": report["final_trace"][method],
            "seed": report["seeds"]["circuit"],
        })
    return rows


def reports_to_csv(reports: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        for row in report_rows(rep):
            writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def sweep_configs(base: RunConfig, qubits: Sequence[Optional[int]], depths: Sequence[Optional[int]],
                  ps: Sequence[float], epsilons: Sequence[Optional[float]],
                  epsilon_over_p: Optional[float] = None) -> List[RunConfig]:
    """Grid cells in row-major order over (N, D, p, epsilon).

    With ``epsilon_over_p`` set, epsilon follows ``p`` and ``epsilons`` is ignored.
    """
    if epsilon_over_p is not None:
        epsilons = [None]
    cells = list(itertools.product(qubits, depths, ps, epsilons))
    if not cells:
        raise DomainError("sweep grid is empty")
    out = []
    for i, (n, d, p, eps) in enumerate(cells):
        out.append(replace(base, qubits=n, depth=d, p=p,
                           epsilon=base.epsilon if eps is None else eps,
                           epsilon_over_p=epsilon_over_p, cell_index=i))
    return out


def sweep(configs: Sequence[RunConfig], workers: int = 1) -> List[dict]:
    """Run every cell; results come back in cell order regardless of ``workers``."""
    if not configs:
        raise DomainError("sweep grid is empty")
    if workers <= 1:
        reports = []
        for cfg in configs:
            log.info("cell %d: N=%s D=%s p=%s", cfg.cell_index, cfg.qubits, cfg.depth, cfg.p)
            reports.append(run_simulation(cfg))
        return reports
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_simulation, configs))
