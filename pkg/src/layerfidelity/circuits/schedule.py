"""Scheduling of circuits into unit time slices.

One X90 takes one unit. A two-qubit gate of duration ``k`` occupies ``k``
consecutive unit slices on both qubits, each slice carrying the action
``("g2", gate, (a, b), index, k)``. ``Rz`` is virtual: rotations that fall
on the same time point are merged into a zero-duration slice placed
before the unit slice starting there. Barriers align the cursors of their
qubits to the latest one. Every qubit gets an explicit action in every
unit slice (``("idle",)`` when nothing runs) so noise applies everywhere.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..core.clifford import compile_1q
from ..core.gates import TWO_QUBIT_GATES
from .circuit import Circuit
from .layer import DEFAULT_2Q_DURATION

UNIT_TIME = 50e-9
IDLE = ("idle",)
X90 = ("x90",)


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Slice:
    duration: int  # 0 for Rz slices, 1 otherwise
    actions: tuple  # sorted ((qubit, action), ...)

    def action_map(self) -> dict:
        return dict(self.actions)


@dataclass(frozen=True)
class ScheduledCircuit:
    qubits: tuple[int, ...]
    slices: tuple[Slice, ...]
    barriers: tuple[int, ...]  # unit times at which barriers aligned the qubits
    unit_time: float = UNIT_TIME
    circuit: Circuit | None = None

    @property
    def n_units(self) -> int:
        return sum(s.duration for s in self.slices)

    @property
    def wall_time(self) -> float:
        return self.n_units * self.unit_time

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "unit_time": self.unit_time,
            "barriers": list(self.barriers),
            "slices": [
                {"duration": s.duration, "actions": {str(q): list(a) for q, a in s.actions}}
                for s in self.slices
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _asap(ops, qubits, durs):
    cursor = {q: 0 for q in qubits}
    unit_actions: dict[int, dict] = defaultdict(dict)  # time -> {q: action}
    rz_actions: dict[int, dict] = defaultdict(dict)  # time -> {q: angle}
    barriers = []
    for op in ops:
        if op.name == "barrier":
            t = max(cursor[q] for q in op.qubits)
            for q in op.qubits:
                cursor[q] = t
            barriers.append(t)
        elif op.name == "rz":
            q = op.qubits[0]
            t = cursor[q]
            rz_actions[t][q] = rz_actions[t].get(q, 0.0) + op.angle
        elif op.name == "x90":
            q = op.qubits[0]
            unit_actions[cursor[q]][q] = X90
            cursor[q] += 1
        elif op.name in TWO_QUBIT_GATES:
            a, b = op.qubits
            k = durs.get(tuple(sorted(op.qubits)), DEFAULT_2Q_DURATION)
            if k < 1:
                raise ScheduleError(f"invalid duration {k} for {op.qubits}")
            t = max(cursor[a], cursor[b])
            for i in range(k):
                act = ("g2", op.name, (a, b), i, k)
                unit_actions[t + i][a] = act
                unit_actions[t + i][b] = act
            cursor[a] = cursor[b] = t + k
        else:
            raise ScheduleError(f"cannot schedule {op.name!r}")
    horizon = max(cursor.values(), default=0)
    return unit_actions, rz_actions, barriers, horizon


def schedule(circuit: Circuit, durations: dict | None = None, unit_time: float = UNIT_TIME,
             align: str = "alap") -> ScheduledCircuit:
    """Deterministic schedule of ``circuit``.

    ``align="alap"`` (the default) starts every qubit as late as possible so
    all qubits finish together at readout; qubits that finish early under
    ``"asap"`` instead wait at the end of the circuit. ``durations`` maps
    sorted pairs to unit counts and defaults to the circuit's own table.
    """
    if align not in ("asap", "alap"):
        raise ValueError("align must be 'asap' or 'alap'")
    durs = dict(circuit.durations)
    if durations:
        durs.update({tuple(sorted(k)): int(v) for k, v in durations.items()})
    ops = circuit.ops if align == "asap" else tuple(reversed(circuit.ops))
    unit_actions, rz_actions, barriers, horizon = _asap(ops, circuit.qubits, durs)
    if align == "alap":
        # mirror the reversed schedule back onto forward time
        flipped: dict[int, dict] = {}
        for t, row in unit_actions.items():
            flipped[horizon - 1 - t] = {
                q: (a[:3] + (a[4] - 1 - a[3], a[4]) if a[0] == "g2" else a) for q, a in row.items()
            }
        unit_actions = flipped
        rz_actions = {horizon - t: row for t, row in rz_actions.items()}
        barriers = sorted(horizon - t for t in barriers)

    end = max([horizon] + list(rz_actions))
    slices = []
    for t in range(end + 1):
        if rz_actions.get(t):
            acts = tuple(sorted((q, ("rz", a)) for q, a in rz_actions[t].items()))
            slices.append(Slice(0, acts))
        if t < horizon:
            row = unit_actions.get(t, {})
            acts = tuple((q, row.get(q, IDLE)) for q in sorted(circuit.qubits))
            slices.append(Slice(1, acts))
    return ScheduledCircuit(tuple(circuit.qubits), tuple(slices), tuple(barriers), unit_time, circuit)


def expected_1q_layer_units(n_qubits: int) -> float:
    """Mean duration, in units, of a barrier-aligned layer of ``n_qubits`` random 1Q Cliffords.

    The layer lasts as long as its longest compiled Clifford (0, 1 or 2
    X90 pulses; Rz is free).
    """
    counts = np.bincount([sum(1 for op in compile_1q(c, 0) if op[0] == "x90") for c in range(24)], minlength=3)
    cdf = np.cumsum(counts) / 24
    # E[max] = sum_k P(max >= k) = sum_k (1 - P(single < k)^n)
    return float(sum(1 - cdf[k - 1] ** n_qubits for k in range(1, len(cdf))))
