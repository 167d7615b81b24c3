"""Trotterized density-matrix simulation of scheduled circuits.

Each unit slice applies, in order: the slice unitary (ideal gates, then
rotation errors and drive crosstalk, then ZZ phases, then Z drift), the
depolarizing map of every two-qubit gate finishing in that slice, the
stochastic Pauli terms, and finally one T1/T2 step on every qubit.
Zero-duration Rz slices apply their unitary only.

Qubits that never interact (no shared gate, coherent or stochastic term,
or measured unit) are simulated as separate clusters, which is exact for
product initial states and lets long chains be simulated pair by pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuits.schedule import ScheduledCircuit, ScheduleError
from ..core.channels import DensityMatrix
from ..core.gates import embed, rz, two_qubit_fraction, x90
from ..core.pauli import PauliString
from ..noise.channels import SliceContext, coherent_term_unitary, t1t2_decay_factors
from ..noise.model import NoiseModel, NoiseModelError

MAX_CLUSTER_QUBITS = 10

_TERM_ORDER = {
    "underrotation_1q": 0,
    "overrotation_2q": 0,
    "drive_crosstalk": 0,
    "zz_always_on": 1,
    "zz_simultaneous_2q": 1,
    "z_drift_per_slice": 2,
}


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class SimOutcome:
    """Per-unit output distributions (unit qubit order, first qubit most significant)."""

    units: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]
    distributions: tuple[np.ndarray, ...]
    wall_units: int
    counts: tuple[np.ndarray, ...] | None = None
    seed: int | None = None

    @property
    def survivals(self) -> tuple[float, ...]:
        return tuple(float(d[_index(t)]) for d, t in zip(self.distributions, self.targets))


def _index(bits) -> int:
    out = 0
    for b in bits:
        out = 2 * out + int(b)
    return out


class _UnionFind:
    def __init__(self, items):
        self.parent = {q: q for q in items}

    def find(self, q):
        while self.parent[q] != q:
            self.parent[q] = self.parent[self.parent[q]]
            q = self.parent[q]
        return q

    def union(self, *qs):
        roots = [self.find(q) for q in qs]
        for r in roots[1:]:
            self.parent[r] = roots[0]


def find_clusters(sched: ScheduledCircuit, noise: NoiseModel) -> list[tuple[int, ...]]:
    """Groups of qubits that must share a density matrix, in circuit order."""
    qubits = sched.qubits
    uf = _UnionFind(qubits)
    for s in sched.slices:
        for _, act in s.actions:
            if act[0] == "g2":
                uf.union(*act[2])
    for t in noise.coherent_terms:
        if len(t.involved_qubits()) > 1:
            uf.union(*t.involved_qubits())
    for t in noise.stochastic_terms:
        if len(t.qubits) > 1:
            uf.union(*t.qubits)
    if sched.circuit is not None:
        for u in sched.circuit.units:
            uf.union(*u)
    groups: dict = {}
    for q in qubits:
        groups.setdefault(uf.find(q), []).append(q)
    return [tuple(g) for g in groups.values()]


class _ClusterEngine:
    def __init__(self, qubits, noise: NoiseModel, dt: float):
        self.qubits = tuple(qubits)
        self.pos = {q: i for i, q in enumerate(self.qubits)}
        self.c = len(self.qubits)
        self.dt = dt
        qs = set(self.qubits)
        self.terms = sorted(
            (t for t in noise.coherent_terms if not t.qubits or set(t.qubits) <= qs),
            key=lambda t: _TERM_ORDER[t.kind],
        )
        self.stochastic = [
            (t.probability, embed(PauliString.from_label(t.pauli).to_matrix(), [self.pos[q] for q in t.qubits], self.c))
            for t in noise.stochastic_terms
            if set(t.qubits) <= qs and t.probability > 0
        ]
        self.noise = noise
        self.decay = []
        for q in self.qubits:
            t1, t2 = noise.coherence(q)
            g, coh = t1t2_decay_factors(t1, t2, dt)
            if g > 0 or coh < 1:
                self.decay.append((self.pos[q], g, coh))
        self._cache: dict = {}

    def _unit_slice(self, key):
        c = self.c
        actions = dict(zip(self.qubits, key))
        u = np.eye(2**c, dtype=complex)
        finishing = []
        for q, act in actions.items():
            if act[0] == "x90":
                u = embed(x90(), [self.pos[q]], c) @ u
            elif act[0] == "g2" and act[2][0] == q:
                a, b = act[2]
                u = embed(two_qubit_fraction(act[1], 1.0 / act[4]), [self.pos[a], self.pos[b]], c) @ u
                if act[3] == act[4] - 1:
                    alpha = self.noise.pair_depolarizing((a, b))
                    if alpha != 1.0:
                        finishing.append(((self.pos[a], self.pos[b]), alpha))
        ctx = SliceContext(self.dt, actions)
        for term in self.terms:
            for mat, tq in coherent_term_unitary(term, ctx):
                if all(q in self.pos for q in tq):
                    u = embed(mat, [self.pos[q] for q in tq], c) @ u
        return u, finishing

    def _rz_slice(self, key):
        u = np.eye(2**self.c, dtype=complex)
        for q, act in zip(self.qubits, key):
            if act is not None:
                u = embed(rz(act[1]), [self.pos[q]], self.c) @ u
        return u, []

    def step(self, rho: np.ndarray, duration: int, actions: dict) -> np.ndarray:
        if duration == 0:
            key = (0,) + tuple(actions.get(q) for q in self.qubits)
            if all(a is None for a in key[1:]):
                return rho
            if key not in self._cache:
                self._cache[key] = self._rz_slice(key[1:])
        else:
            key = (1,) + tuple(actions[q] for q in self.qubits)
            if key not in self._cache:
                self._cache[key] = self._unit_slice(key[1:])
        u, finishing = self._cache[key]
        rho = u @ rho @ u.conj().T
        if duration == 0:
            return rho
        for pair, alpha in finishing:
            rho = _depolarize_pair(rho, self.c, pair, alpha)
        for p, mat in self.stochastic:
            rho = (1 - p) * rho + p * (mat @ rho @ mat.conj().T)
        for i, g, coh in self.decay:
            _t1t2_inplace(rho, self.c, i, g, coh)
        return rho


def _t1t2_inplace(rho: np.ndarray, c: int, i: int, gamma: float, coh: float) -> None:
    lo, hi = 2**i, 2 ** (c - i - 1)
    r = rho.reshape(lo, 2, hi, lo, 2, hi)
    r[:, 0, :, :, 0, :] += gamma * r[:, 1, :, :, 1, :]
    r[:, 1, :, :, 1, :] *= 1 - gamma
    r[:, 0, :, :, 1, :] *= coh
    r[:, 1, :, :, 0, :] *= coh


def _depolarize_pair(rho: np.ndarray, c: int, pair, alpha: float) -> np.ndarray:
    """``alpha rho + (1 - alpha) I/4 (x) Tr_pair(rho)``."""
    i, j = pair
    t = rho.reshape([2] * (2 * c))
    t2 = np.moveaxis(t, [i, j, c + i, c + j], [0, 1, 2, 3])
    red = np.einsum("abab...->...", t2)
    mixed = np.zeros_like(t2)
    for a in range(2):
        for b in range(2):
            mixed[a, b, a, b] = red / 4
    t2 = alpha * t2 + (1 - alpha) * mixed
    return np.moveaxis(t2, [0, 1, 2, 3], [i, j, c + i, c + j]).reshape(rho.shape)


def _check_noise(sched: ScheduledCircuit, noise: NoiseModel) -> None:
    qs = set(sched.qubits)
    for t in noise.coherent_terms:
        if not set(t.involved_qubits()) <= qs:
            raise NoiseModelError(f"term {t.kind} on {t.involved_qubits()} references qubits outside the system")
    for t in noise.stochastic_terms:
        if not set(t.qubits) <= qs:
            raise NoiseModelError(f"stochastic term on {t.qubits} references qubits outside the system")


class Simulator:
    """Evolves scheduled circuits under one noise model."""

    def __init__(self, noise: NoiseModel | None = None, max_cluster: int = MAX_CLUSTER_QUBITS):
        self.noise = noise or NoiseModel()
        self.max_cluster = max_cluster
        self._engines: dict = {}

    def _engine(self, qubits, dt) -> _ClusterEngine:
        key = (tuple(qubits), dt)
        if key not in self._engines:
            self._engines[key] = _ClusterEngine(qubits, self.noise, dt)
        return self._engines[key]

    def _evolve_clusters(self, sched: ScheduledCircuit):
        _check_noise(sched, self.noise)
        clusters = find_clusters(sched, self.noise)
        big = max(len(c) for c in clusters) if clusters else 0
        if big > self.max_cluster:
            raise SimulationError(f"cluster of {big} qubits exceeds the {self.max_cluster}-qubit cap")
        states = []
        for cl in clusters:
            eng = self._engine(cl, sched.unit_time)
            rho = np.zeros((2 ** len(cl), 2 ** len(cl)), dtype=complex)
            rho[0, 0] = 1
            for s in sched.slices:
                acts = dict(s.actions)
                if s.duration not in (0, 1):
                    raise ScheduleError("slice durations must be 0 or 1")
                if s.duration == 1 and any(q not in acts for q in cl):
                    raise ScheduleError("unit slice without an action for every qubit")
                rho = eng.step(rho, s.duration, acts)
            states.append((cl, rho))
        return states

    def evolve(self, sched: ScheduledCircuit) -> DensityMatrix:
        """Full density matrix over ``sched.qubits`` (capped at 10 qubits)."""
        if len(sched.qubits) > MAX_CLUSTER_QUBITS:
            raise SimulationError("dense evolution limited to 10 qubits")
        states = self._evolve_clusters(sched)
        order = [q for cl, _ in states for q in cl]
        rho = np.array([[1.0 + 0j]])
        for _, r in states:
            rho = np.kron(rho, r)
        n = len(order)
        perm = [order.index(q) for q in sched.qubits]
        rho = rho.reshape([2] * (2 * n)).transpose(perm + [p + n for p in perm]).reshape(2**n, 2**n)
        return DensityMatrix(rho)

    def run(self, sched: ScheduledCircuit, shots: int = 0, rng: np.random.Generator | None = None,
            seed: int | None = None) -> SimOutcome:
        """Exact unit distributions, plus multinomial counts when ``shots > 0``."""
        circ = sched.circuit
        if circ is None:
            raise SimulationError("schedule carries no circuit metadata (units and targets)")
        states = self._evolve_clusters(sched)
        where = {q: (cl, rho) for cl, rho in states for q in cl}
        dists = []
        for u in circ.units:
            cl, rho = where[u[0]]
            dists.append(marginal_distribution(rho, cl, u))
        counts = None
        if shots:
            rng = rng if rng is not None else np.random.default_rng(seed)
            counts = tuple(sample(d, shots, rng) for d in dists)
        return SimOutcome(circ.units, circ.targets, tuple(dists), sched.n_units, counts, seed)


def marginal_distribution(rho: np.ndarray, qubits, unit) -> np.ndarray:
    """Computational-basis distribution of ``unit`` from a state on ``qubits``."""
    c = len(qubits)
    p = np.clip(np.real(np.diag(rho)), 0.0, None).reshape([2] * c)
    keep = [qubits.index(q) for q in unit]
    drop = tuple(i for i in range(c) if i not in keep)
    m = p.sum(axis=drop) if drop else p
    # order axes as listed in the unit
    m = np.transpose(m, np.argsort(np.argsort(keep)))
    m = m.reshape(-1)
    return m / m.sum()


def unit_survival(dm: DensityMatrix, unit_qubits, target, qubits=None) -> float:
    """Probability that ``unit_qubits`` read out as ``target``."""
    qubits = tuple(qubits) if qubits is not None else tuple(range(dm.n))
    return float(marginal_distribution(dm.data, qubits, tuple(unit_qubits))[_index(target)])


def sample(probabilities, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial counts; ``shots = 0`` returns the probabilities unchanged."""
    p = np.asarray(probabilities, dtype=float)
    if shots == 0:
        return p.copy()
    if shots < 0:
        raise ValueError("shots must be non-negative")
    p = np.clip(p, 0, None)
    return rng.multinomial(shots, p / p.sum())


MAX_SUPEROPERATOR_QUBITS = 5


def superoperator(sched: ScheduledCircuit, noise: NoiseModel) -> np.ndarray:
    """Row-major superoperator ``S`` with ``vec(out) = S vec(rho)`` for a whole schedule.

    Built by evolving every matrix unit, which the slice maps act on
    linearly. Limited to 5 qubits.
    """
    n = len(sched.qubits)
    if n > MAX_SUPEROPERATOR_QUBITS:
        raise SimulationError(f"superoperator limited to {MAX_SUPEROPERATOR_QUBITS} qubits")
    _check_noise(sched, noise)
    eng = _ClusterEngine(sched.qubits, noise, sched.unit_time)
    d = 2**n
    S = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        rho = np.zeros((d, d), dtype=complex)
        rho.flat[k] = 1.0
        for s in sched.slices:
            rho = eng.step(rho, s.duration, dict(s.actions))
        S[:, k] = rho.reshape(-1)
    return S


def superoperator_fidelity(S: np.ndarray, u_ideal: np.ndarray) -> float:
    """Process fidelity ``Tr(S_U^dagger S) / d^2`` against an ideal unitary."""
    d = u_ideal.shape[0]
    su = np.kron(u_ideal, u_ideal.conj())
    return float(np.real(np.trace(su.conj().T @ S)) / d**2)
