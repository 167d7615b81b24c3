"""Native-gate circuits with benchmark metadata.

JSON form::

    {"qubits": [0, 1, 2, 3],
     "ops": [["x90", [0]], ["rz", [1], 1.5707963], ["barrier", [0, 1, 2, 3]], ["cx", [0, 1]]],
     "units": [[0, 1], [2, 3]], "targets": [[0, 0], [0, 0]],
     "durations": [{"pair": [0, 1], "units": 8}],
     "family": "direct", "depth": 4, "randomization": 0, "sublayer": 0}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from ..core.clifford import native_unitary
from ..core.gates import TWO_QUBIT_GATES


class Op(NamedTuple):
    name: str  # "x90", "rz", "barrier" or a two-qubit gate name
    qubits: tuple[int, ...]
    angle: float = 0.0

    def to_list(self) -> list:
        out = [self.name, list(self.qubits)]
        if self.name == "rz":
            out.append(self.angle)
        return out


def from_native(native) -> Op:
    """Convert a ``clifford_to_native`` entry."""
    if native[0] == "x90":
        return Op("x90", (native[1],))
    if native[0] == "rz":
        return Op("rz", (native[1],), float(native[2]))
    return Op(native[0], tuple(native[1]))


@dataclass(frozen=True)
class Circuit:
    qubits: tuple[int, ...]
    ops: tuple[Op, ...]
    units: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]
    durations: dict = field(default_factory=dict)
    family: str = "direct"
    depth: int = 0
    randomization: int = 0
    sublayer: int | None = None

    def __post_init__(self):
        qset = set(self.qubits)
        for op in self.ops:
            if not set(op.qubits) <= qset:
                raise ValueError(f"{op} acts outside the circuit qubits")
            if op.name not in ("x90", "rz", "barrier") and op.name not in TWO_QUBIT_GATES:
                raise ValueError(f"unknown op {op.name!r}")
        if len(self.units) != len(self.targets):
            raise ValueError("one target per unit")
        for u, t in zip(self.units, self.targets):
            if len(u) != len(t):
                raise ValueError("target length differs from unit size")

    def count(self, name: str) -> int:
        return sum(1 for op in self.ops if op.name == name)

    def two_qubit_ops(self) -> list[Op]:
        return [op for op in self.ops if op.name in TWO_QUBIT_GATES]

    def ideal_unitary(self):
        """Dense ideal unitary over ``qubits`` (position order), for checks on small circuits."""
        pos = {q: i for i, q in enumerate(self.qubits)}
        native = []
        for op in self.ops:
            if op.name == "barrier":
                continue
            if op.name == "x90":
                native.append(("x90", pos[op.qubits[0]]))
            elif op.name == "rz":
                native.append(("rz", pos[op.qubits[0]], op.angle))
            else:
                native.append((op.name, tuple(pos[q] for q in op.qubits)))
        return native_unitary(native, len(self.qubits))

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "ops": [op.to_list() for op in self.ops],
            "units": [list(u) for u in self.units],
            "targets": [list(t) for t in self.targets],
            "durations": [{"pair": list(p), "units": d} for p, d in sorted(self.durations.items())],
            "family": self.family,
            "depth": self.depth,
            "randomization": self.randomization,
            "sublayer": self.sublayer,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        ops = tuple(Op(o[0], tuple(o[1]), float(o[2]) if len(o) > 2 else 0.0) for o in d["ops"])
        return cls(
            tuple(d["qubits"]),
            ops,
            tuple(tuple(u) for u in d["units"]),
            tuple(tuple(t) for t in d["targets"]),
            {tuple(x["pair"]): x["units"] for x in d.get("durations", [])},
            d.get("family", "direct"),
            d.get("depth", 0),
            d.get("randomization", 0),
            d.get("sublayer"),
        )
