"""Circuit families for layer-fidelity, simultaneous, isolated, mirror and staggered RB.

Every circuit draws from its own generator seeded by
``(seed, family, sub-layer or pair, depth, randomization)``, so circuits
are reproducible individually and independent of generation order.
Randomizing gates are uniform over the 24 single-qubit Cliffords.
"""

from __future__ import annotations

import numpy as np

from ..core.clifford import (
    CliffordTableau,
    clifford_to_native,
    compile_1q,
    compose_1q,
    gate_tableau,
    inverse_1q,
    local_tableau,
    one_qubit_cliffords,
    pauli_1q_index,
)
from ..core.pauli import PauliString
from .circuit import Circuit, Op, from_native
from .layer import FAMILIES, LayerSpec, RBConfig


def circuit_rng(seed: int, family: str, key: tuple, depth: int, r: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), FAMILIES.index(family), *key, int(depth), int(r)])


def _durations(spec: LayerSpec) -> dict:
    return {tuple(sorted(e)): spec.duration_of(e) for e in spec.edges}


def one_qubit_layer_ops(cliffords: dict) -> list[Op]:
    """Native ops of one 1Q Clifford layer, ``{qubit: clifford index}``."""
    ops: list[Op] = []
    for q, c in cliffords.items():
        ops += [from_native(x) for x in compile_1q(int(c), q)]
    return ops


class _UnitTracker:
    """Tracks the accumulated Clifford of one disjoint unit."""

    def __init__(self, unit, gate: str | None):
        self.unit = tuple(unit)
        self.gate = gate
        if len(self.unit) == 2:
            self.tableau = CliffordTableau.identity(2)
        else:
            self.index = 0

    def layer(self, cliffords: dict, with_gate: bool = True) -> None:
        if len(self.unit) == 2:
            a, b = self.unit
            t = self.tableau.compose(local_tableau(int(cliffords[a]), int(cliffords[b])))
            if with_gate:
                t = t.compose(gate_tableau(self.gate))
            self.tableau = t
        else:
            self.index = compose_1q(self.index, int(cliffords[self.unit[0]]))

    def inverse_ops(self) -> list[Op]:
        if len(self.unit) == 2:
            native = clifford_to_native(self.tableau.inverse(), self.gate, self.unit)
            return [from_native(x) for x in native]
        return [from_native(x) for x in compile_1q(inverse_1q(self.index), self.unit[0])]


def _check_sublayer(spec: LayerSpec, m: int) -> None:
    if not 0 <= m < spec.n_sublayers:
        raise ValueError(f"sub-layer {m} out of range")


def _layered_circuit(spec: LayerSpec, m: int, depth: int, rng, family: str, r: int,
                     staggered: bool = False) -> Circuit:
    units = spec.units(m)
    trackers = [_UnitTracker(u, spec.gate_of(u) if len(u) == 2 else None) for u in units]
    barrier = Op("barrier", spec.qubits)
    ops: list[Op] = []
    for _ in range(depth):
        draw = rng.integers(24, size=len(spec.qubits))
        cliffords = dict(zip(spec.qubits, draw))
        ops += one_qubit_layer_ops(cliffords)
        ops.append(barrier)
        for e in spec.sublayers[m]:
            ops.append(Op(spec.gate_of(e), e))
            if staggered:
                ops.append(barrier)
        if not staggered or not spec.sublayers[m]:
            ops.append(barrier)
        for t in trackers:
            t.layer(cliffords)
    for t in trackers:
        ops += t.inverse_ops()
    return Circuit(
        spec.qubits, tuple(ops), units, tuple((0,) * len(u) for u in units),
        _durations(spec), family, depth, r, m,
    )


def build_direct_rb(spec: LayerSpec, m: int, cfg: RBConfig) -> list[Circuit]:
    """Layer RB of sub-layer ``m``: barrier-aligned 1Q and 2Q layers, per-unit inversion."""
    _check_sublayer(spec, m)
    out = []
    for depth in cfg.depths:
        for r in range(cfg.randomizations):
            rng = circuit_rng(cfg.seed, "direct", (m,), depth, r)
            out.append(_layered_circuit(spec, m, depth, rng, "direct", r))
    return out


def build_staggered(spec: LayerSpec, m: int, cfg: RBConfig) -> list[Circuit]:
    """As :func:`build_direct_rb` but the sub-layer's 2Q gates run one after another."""
    _check_sublayer(spec, m)
    out = []
    for depth in cfg.depths:
        for r in range(cfg.randomizations):
            rng = circuit_rng(cfg.seed, "staggered", (m,), depth, r)
            out.append(_layered_circuit(spec, m, depth, rng, "staggered", r, staggered=True))
    return out


def _unit_sequence(unit, gate, depth, rng) -> list[Op]:
    tracker = _UnitTracker(unit, gate)
    ops: list[Op] = []
    for _ in range(depth):
        cliffords = dict(zip(unit, rng.integers(24, size=len(unit))))
        ops += one_qubit_layer_ops(cliffords)
        if gate is not None:
            ops.append(Op(gate, tuple(unit)))
        tracker.layer(cliffords, with_gate=gate is not None)
    return ops + tracker.inverse_ops()


def build_simultaneous_rb(spec: LayerSpec, m: int, cfg: RBConfig) -> list[Circuit]:
    """Independent RB on every unit of sub-layer ``m`` with no barriers between units."""
    _check_sublayer(spec, m)
    units = spec.units(m)
    out = []
    for depth in cfg.depths:
        for r in range(cfg.randomizations):
            rng = circuit_rng(cfg.seed, "simultaneous", (m,), depth, r)
            ops: list[Op] = []
            for u in units:
                ops += _unit_sequence(u, spec.gate_of(u) if len(u) == 2 else None, depth, rng)
            out.append(Circuit(spec.qubits, tuple(ops), units, tuple((0,) * len(u) for u in units),
                               _durations(spec), "simultaneous", depth, r, m))
    return out


def build_isolated_rb(spec: LayerSpec, pair, cfg: RBConfig) -> list[Circuit]:
    """RB on one pair while every other qubit of the layer stays idle and unmeasured."""
    pair = tuple(int(q) for q in pair)
    match = [e for e in spec.edges if set(e) == set(pair)]
    if not match:
        raise ValueError(f"{pair} is not an edge of the layer")
    edge = match[0]
    out = []
    for depth in cfg.depths:
        for r in range(cfg.randomizations):
            rng = circuit_rng(cfg.seed, "isolated", edge, depth, r)
            ops = _unit_sequence(edge, spec.gate_of(edge), depth, rng)
            out.append(Circuit(spec.qubits, tuple(ops), (edge,), ((0, 0),),
                               _durations(spec), "isolated", depth, r, None))
    return out


# -- mirror circuits ---------------------------------------------------------


def _conjugate(frame: PauliString, tableau: CliffordTableau, positions) -> PauliString:
    sub = frame.restrict(positions)
    img = tableau.apply(sub)
    return frame.replace(positions, img.unsigned()).unsigned()


_ECR_FIX = PauliString.from_label("ZX")  # ECR^-1 = ECR followed by Z (x) X, up to phase
_SYMBOLS = "IXYZ"


def _mirror_circuit(spec: LayerSpec, depth: int, rng, pauli_layer: bool, r: int) -> Circuit:
    n = len(spec.qubits)
    pos = {q: i for i, q in enumerate(spec.qubits)}
    barrier = Op("barrier", spec.qubits)
    cl = one_qubit_cliffords()

    forward: list[tuple] = []  # ("1q", {q: c}) or ("2q", m)
    for _ in range(depth // 2):
        for m in range(spec.n_sublayers):
            forward.append(("1q", dict(zip(spec.qubits, rng.integers(24, size=n)))))
            forward.append(("2q", m))

    ops: list[Op] = []
    for kind, val in forward:
        if kind == "1q":
            ops += one_qubit_layer_ops(val)
            ops.append(barrier)
        else:
            ops += [Op(spec.gate_of(e), e) for e in spec.sublayers[val]]
            ops.append(barrier)

    if pauli_layer:
        symbols = rng.integers(4, size=n)
        central = PauliString.from_label("".join(_SYMBOLS[s] for s in symbols))
    else:
        central = PauliString.identity(n)
    pending = central  # Paulis still to be folded into the next 1Q layer
    ideal = central  # the central Pauli propagated through the exact inverse

    for kind, val in reversed(forward):
        if kind == "2q":
            for e in spec.sublayers[val]:
                g = spec.gate_of(e)
                ops.append(Op(g, e))
                p = (pos[e[0]], pos[e[1]])
                inv = gate_tableau(g).inverse()
                pending = _conjugate(pending, inv, p)
                ideal = _conjugate(ideal, inv, p)
                if g == "ecr":
                    pending = (pending * PauliString.identity(n).replace(p, _ECR_FIX)).unsigned()
            ops.append(barrier)
        else:
            merged = {}
            for q, c in val.items():
                sym = pending.restrict([pos[q]]).labels
                merged[q] = compose_1q(pauli_1q_index(sym), inverse_1q(int(c)))
                ideal = _conjugate(ideal, cl[inverse_1q(int(c))].tableau, [pos[q]])
            pending = PauliString.identity(n)
            ops += one_qubit_layer_ops(merged)
            ops.append(barrier)

    if pending.weight:
        # only reachable with depth 0: nothing to merge into, apply directly
        ops += one_qubit_layer_ops({q: pauli_1q_index(pending.restrict([pos[q]]).labels) for q in spec.qubits})
    target = tuple((ideal.x >> i) & 1 for i in range(n))
    family = "mirror_pauli" if pauli_layer else "mirror_no_pauli"
    return Circuit(spec.qubits, tuple(ops), (spec.qubits,), (target,), _durations(spec),
                   family, depth, r, None)


def build_mirror(spec: LayerSpec, cfg: RBConfig, pauli_layer: bool = True) -> list[Circuit]:
    """Mirror circuits of ``depth/2`` full-layer blocks followed by their exact inverse.

    With ``pauli_layer`` a uniformly random Pauli sits between the halves;
    it is merged into the first inverse 1Q layer and its effect on the
    ideal output is folded into the target bitstring.
    """
    family = "mirror_pauli" if pauli_layer else "mirror_no_pauli"
    out = []
    for depth in cfg.depths:
        if depth % 2:
            raise ValueError("mirror depths must be even")
        for r in range(cfg.randomizations):
            rng = circuit_rng(cfg.seed, family, (), depth, r)
            out.append(_mirror_circuit(spec, depth, rng, pauli_layer, r))
    return out


def build_family(spec: LayerSpec, cfg: RBConfig, m: int = 0, pair=None) -> list[Circuit]:
    """Dispatch on ``cfg.family``."""
    if cfg.family == "direct":
        return build_direct_rb(spec, m, cfg)
    if cfg.family == "simultaneous":
        return build_simultaneous_rb(spec, m, cfg)
    if cfg.family == "staggered":
        return build_staggered(spec, m, cfg)
    if cfg.family == "isolated":
        return build_isolated_rb(spec, pair if pair is not None else spec.sublayers[m][0], cfg)
    return build_mirror(spec, cfg, pauli_layer=cfg.family == "mirror_pauli")
