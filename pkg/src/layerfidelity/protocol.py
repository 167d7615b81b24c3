"""Run benchmark families through the simulator and reduce them to fits.

These helpers glue circuits, simulator and estimation together; the CLI
campaigns and the acceptance tests are built on them.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import UNIT_TIME, Circuit, LayerSpec, Op, RBConfig, build_family, schedule
from .circuits.builders import one_qubit_layer_ops
from .circuits.layer import FAMILIES
from .estimation.fit import DecayCurve, fit_decay
from .estimation.layer import ChainFidelities, subchain_table
from .estimation.mirror import MirrorFit, mirror_polarization, polarization
from .estimation.results import ElementResult, LayerFidelityResult
from .noise.model import NoiseModel
from .simulator import SimOutcome, Simulator, superoperator, superoperator_fidelity

log = logging.getLogger(__name__)


def _shots_rng(cfg: RBConfig, c: Circuit) -> np.random.Generator:
    key = [cfg.seed, FAMILIES.index(c.family), c.depth, c.randomization, -1 if c.sublayer is None else c.sublayer]
    return np.random.default_rng([int(k) + 1 for k in key] + [7])


def _simulate_one(args) -> SimOutcome:
    circuit, noise, unit_time, shots, rng = args
    return Simulator(noise).run(schedule(circuit, unit_time=unit_time), shots=shots, rng=rng)


def simulate_circuits(circuits, noise: NoiseModel, cfg: RBConfig, unit_time: float = UNIT_TIME,
                      workers: int = 1, simulator: Simulator | None = None) -> list[SimOutcome]:
    """Outcomes in circuit order; identical for any ``workers`` count."""
    jobs = [(c, noise, unit_time, cfg.shots, _shots_rng(cfg, c) if cfg.shots else None) for c in circuits]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_simulate_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    sim = simulator or Simulator(noise)
    return [sim.run(schedule(c, unit_time=unit_time), shots=s, rng=r) for c, _, _, s, r in jobs]


def _estimates(outcome: SimOutcome, i: int, shots: int) -> float:
    if shots:
        counts = outcome.counts[i]
        t = 0
        for b in outcome.targets[i]:
            t = 2 * t + int(b)
        return float(counts[t]) / shots
    return outcome.survivals[i]


def unit_curves(circuits, outcomes, cfg: RBConfig) -> dict:
    """Decay curve per measured unit, averaged over randomizations."""
    samples: dict = {}
    for c, o in zip(circuits, outcomes):
        for i, u in enumerate(c.units):
            samples.setdefault(u, {}).setdefault(c.depth, []).append(_estimates(o, i, cfg.shots))
    curves = {}
    sub = circuits[0].sublayer if circuits else None
    for u, by_depth in samples.items():
        depths = sorted(by_depth)
        curves[u] = DecayCurve.from_samples(depths, [by_depth[d] for d in depths], u, sub)
    return curves


def measure_units(spec: LayerSpec, cfg: RBConfig, noise: NoiseModel, m: int = 0, pair=None,
                  unit_time: float = UNIT_TIME, workers: int = 1) -> dict:
    """Fit every unit of one RB family; returns ``unit -> ElementResult``."""
    noise = noise.restricted(spec.qubits)
    circuits = build_family(spec, cfg, m=m, pair=pair)
    outcomes = simulate_circuits(circuits, noise, cfg, unit_time, workers)
    out = {}
    for u, curve in unit_curves(circuits, outcomes, cfg).items():
        out[u] = ElementResult(u, circuits[0].sublayer, curve, fit_decay(curve, d=2 ** len(u)))
    return out


def measure_layer_fidelity(spec: LayerSpec, cfg: RBConfig, noise: NoiseModel,
                           unit_time: float = UNIT_TIME, workers: int = 1,
                           chain: bool = False) -> LayerFidelityResult:
    """Layer RB on every sub-layer; with ``chain`` also the sub-chain table."""
    cfg = cfg.replace(family="direct")
    elements = []
    warnings = []
    for m in range(spec.n_sublayers):
        res = measure_units(spec, cfg, noise, m, unit_time=unit_time, workers=workers)
        row = tuple(res[u] for u in spec.units(m))
        for e in row:
            if not e.usable:
                msg = f"sub-layer {m} unit {e.unit}: fit did not converge, excluded from LF"
                log.warning(msg)
                warnings.append(msg)
            elif "underdriven" in e.fit.flags and e.fit.alpha < 1:
                warnings.append(f"sub-layer {m} unit {e.unit}: underdriven, extend depths")
        elements.append(row)
    result = LayerFidelityResult(tuple(elements), len(spec.edges), (), tuple(warnings))
    if chain:
        cf = chain_fidelities(spec, result)
        result = LayerFidelityResult(result.elements, result.n_2q, tuple(subchain_table(cf)), result.warnings)
    return result


def chain_fidelities(spec: LayerSpec, result: LayerFidelityResult) -> ChainFidelities:
    """Measured fidelities along a chain; idle qubits multiply over the sub-layers they idle in."""
    edge, idle, edge_err, idle_rel2 = {}, {}, {}, {}
    for sub in result.elements:
        for e in sub:
            if not e.usable:
                continue
            if len(e.unit) == 2:
                edge[e.unit] = e.fidelity
                edge_err[e.unit] = e.fidelity_err
            else:
                q = e.unit[0]
                idle[q] = idle.get(q, 1.0) * e.fidelity
                idle_rel2[q] = idle_rel2.get(q, 0.0) + (e.fidelity_err / e.fidelity) ** 2
    idle_err = {q: idle[q] * math.sqrt(r) for q, r in idle_rel2.items()}
    return ChainFidelities(spec.qubits, edge, idle, edge_err, idle_err)


@dataclass(frozen=True)
class MirrorResult:
    curve: DecayCurve
    fit: MirrorFit


def measure_mirror(spec: LayerSpec, cfg: RBConfig, noise: NoiseModel, pauli_layer: bool = True,
                   unit_time: float = UNIT_TIME, workers: int = 1) -> MirrorResult:
    cfg = cfg.replace(family="mirror_pauli" if pauli_layer else "mirror_no_pauli")
    noise = noise.restricted(spec.qubits)
    circuits = build_family(spec, cfg)
    outcomes = simulate_circuits(circuits, noise, cfg, unit_time, workers)
    n = len(spec.qubits)
    by_depth: dict = {}
    for c, o in zip(circuits, outcomes):
        dist = o.counts[0] / cfg.shots if cfg.shots else o.distributions[0]
        by_depth.setdefault(c.depth, []).append(polarization(dist, c.targets[0], n))
    depths = sorted(by_depth)
    means = [float(np.mean(by_depth[d])) for d in depths]
    sems = [float(np.std(by_depth[d], ddof=1) / np.sqrt(len(by_depth[d]))) if len(by_depth[d]) > 1 else 0.0
            for d in depths]
    curve = DecayCurve(depths, np.clip(means, 0, 1), sems, tuple(spec.qubits), None)
    return MirrorResult(curve, mirror_polarization(depths, means, n, sems))


@dataclass(frozen=True)
class ExactLayerFidelity:
    fidelity: float
    sem: float
    samples: int

    @property
    def error(self) -> float:
        return 1 - self.fidelity


def exact_layer_fidelity(spec: LayerSpec, noise: NoiseModel, samples: int = 40, seed: int = 0,
                         unit_time: float = UNIT_TIME) -> ExactLayerFidelity:
    """Process fidelity of one full layer, averaged over its random 1Q Clifford layers.

    Each sample is the layer exactly as the benchmarks run it (a random 1Q
    layer before every sub-layer, barrier aligned), simulated as a dense
    superoperator and compared with its ideal unitary. This is the
    quantity every benchmark family is trying to estimate.
    """
    noise = noise.restricted(spec.qubits)
    rng = np.random.default_rng([int(seed), 11])
    barrier = Op("barrier", spec.qubits)
    fs = []
    for _ in range(samples):
        ops: list[Op] = []
        for m in range(spec.n_sublayers):
            ops += one_qubit_layer_ops(dict(zip(spec.qubits, rng.integers(24, size=len(spec.qubits)))))
            ops.append(barrier)
            ops += [Op(spec.gate_of(e), e) for e in spec.sublayers[m]]
            ops.append(barrier)
        c = Circuit(spec.qubits, tuple(ops), (), (), {tuple(sorted(e)): spec.duration_of(e) for e in spec.edges})
        S = superoperator(schedule(c, unit_time=unit_time), noise)
        fs.append(superoperator_fidelity(S, c.ideal_unitary()))
    sem = float(np.std(fs, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return ExactLayerFidelity(float(np.mean(fs)), sem, samples)
