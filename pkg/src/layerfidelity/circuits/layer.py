"""Layer specifications and benchmark configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.gates import TWO_QUBIT_GENERATORS

FAMILIES = ("direct", "simultaneous", "isolated", "mirror_pauli", "mirror_no_pauli", "staggered")
DEFAULT_2Q_DURATION = 8


class LayerSpecError(ValueError):
    pass


def _pair(edge) -> tuple[int, int]:
    return tuple(sorted(int(q) for q in edge))


@dataclass(frozen=True)
class LayerSpec:
    """A connected gate set split into disjoint sub-layers.

    ``sublayers[m]`` lists oriented edges ``(control, target)``. Gate types
    and durations (in unit time slices) are keyed by the sorted pair; both
    default to the spec-wide ``gate`` and ``DEFAULT_2Q_DURATION``.
    """

    qubits: tuple[int, ...]
    sublayers: tuple[tuple[tuple[int, int], ...], ...]
    gate: str = "cx"
    gate_types: dict = field(default_factory=dict)
    durations: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        subs = tuple(tuple((int(a), int(b)) for a, b in sub) for sub in self.sublayers)
        object.__setattr__(self, "sublayers", subs)
        object.__setattr__(self, "gate_types", {_pair(k): v for k, v in self.gate_types.items()})
        object.__setattr__(self, "durations", {_pair(k): int(v) for k, v in self.durations.items()})
        if len(set(self.qubits)) != len(self.qubits):
            raise LayerSpecError("repeated qubit in layer")
        if not subs:
            raise LayerSpecError("a layer needs at least one sub-layer")
        qset = set(self.qubits)
        seen_edges = set()
        for m, sub in enumerate(subs):
            used = [q for e in sub for q in e]
            if len(set(used)) != len(used):
                raise LayerSpecError(f"sub-layer {m} is not a matching")
            if not set(used) <= qset:
                raise LayerSpecError(f"sub-layer {m} uses qubits outside the layer")
            for e in sub:
                if e[0] == e[1]:
                    raise LayerSpecError(f"self-loop {e}")
                if _pair(e) in seen_edges:
                    raise LayerSpecError(f"edge {e} appears in two sub-layers")
                seen_edges.add(_pair(e))
        for name in {self.gate, *self.gate_types.values()}:
            if name not in TWO_QUBIT_GENERATORS:
                raise LayerSpecError(f"unknown two-qubit gate {name!r}")
        if any(d < 1 for d in self.durations.values()):
            raise LayerSpecError("two-qubit durations must be at least one unit")

    @property
    def n_sublayers(self) -> int:
        return len(self.sublayers)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for sub in self.sublayers for e in sub)

    def gate_of(self, edge) -> str:
        return self.gate_types.get(_pair(edge), self.gate)

    def duration_of(self, edge) -> int:
        return self.durations.get(_pair(edge), DEFAULT_2Q_DURATION)

    def idle(self, m: int) -> tuple[int, ...]:
        busy = {q for e in self.sublayers[m] for q in e}
        return tuple(q for q in self.qubits if q not in busy)

    def units(self, m: int) -> tuple[tuple[int, ...], ...]:
        """Disjoint measured units of sub-layer ``m``: gated pairs, then idle qubits."""
        return tuple(self.sublayers[m]) + tuple((q,) for q in self.idle(m))

    def sublayer_duration(self, m: int) -> int:
        return max((self.duration_of(e) for e in self.sublayers[m]), default=0)

    @classmethod
    def chain(cls, qubits, gate: str = "cx", durations: dict | None = None) -> "LayerSpec":
        """Even/odd split of a linear chain: edges starting at the first qubit, then the second."""
        qs = tuple(qubits)
        if len(qs) < 2:
            raise LayerSpecError("a chain needs at least two qubits")
        even = tuple((qs[i], qs[i + 1]) for i in range(0, len(qs) - 1, 2))
        odd = tuple((qs[i], qs[i + 1]) for i in range(1, len(qs) - 1, 2))
        subs = (even, odd) if odd else (even,)
        return cls(qs, subs, gate=gate, durations=durations or {})

    def with_sublayers(self, sublayers) -> "LayerSpec":
        return LayerSpec(self.qubits, sublayers, self.gate, self.gate_types, self.durations)

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "sublayers": [[list(e) for e in sub] for sub in self.sublayers],
            "gate": self.gate,
            "gate_types": [{"pair": list(p), "gate": g} for p, g in sorted(self.gate_types.items())],
            "durations": [{"pair": list(p), "units": d} for p, d in sorted(self.durations.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LayerSpec":
        return cls(
            tuple(d["qubits"]),
            tuple(tuple(tuple(e) for e in sub) for sub in d["sublayers"]),
            d.get("gate", "cx"),
            {tuple(x["pair"]): x["gate"] for x in d.get("gate_types", [])},
            {tuple(x["pair"]): x["units"] for x in d.get("durations", [])},
        )


@dataclass(frozen=True)
class RBConfig:
    """Depth grid and sampling for one benchmark family; ``shots = 0`` means exact."""

    depths: tuple[int, ...]
    randomizations: int = 6
    shots: int = 0
    seed: int = 0
    family: str = "direct"

    def __post_init__(self):
        object.__setattr__(self, "depths", tuple(int(d) for d in self.depths))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.depths or any(d < 0 for d in self.depths):
            raise ValueError("depths must be non-empty and non-negative")
        if any(b <= a for a, b in zip(self.depths, self.depths[1:])):
            raise ValueError("depths must be strictly increasing")
        if self.family.startswith("mirror") and any(d % 2 for d in self.depths):
            raise ValueError("mirror depths must be even")
        if self.randomizations < 1 or self.shots < 0:
            raise ValueError("need at least one randomization and non-negative shots")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def replace(self, **changes) -> "RBConfig":
        d = dict(depths=self.depths, randomizations=self.randomizations, shots=self.shots,
                 seed=self.seed, family=self.family)
        d.update(changes)
        return RBConfig(**d)
