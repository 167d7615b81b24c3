"""Device models: coupling graph, coherence, readout and isolated gate errors.

JSON form (version 1; times in seconds, errors as fractions)::

    {
      "version": 1,
      "name": "synthetic",
      "qubits": [{"index": 0, "T1": 1.2e-4, "T2": 9e-5, "readout_fidelity": 0.98}],
      "edges": [{"pair": [0, 1], "gate": "ECR", "error": 7e-3, "duration": 5.33e-7}]
    }

``T1`` or ``T2`` may be null (no decay of that kind).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from ..noise.model import NoiseModel

DEVICE_SCHEMA_VERSION = 1
GATE_TYPES = ("CX", "CZ", "ECR")
DEFAULT_PRUNE_RATIO = 1.25


class DeviceError(ValueError):
    pass


_time = {"type": ["number", "null"], "exclusiveMinimum": 0}
DEVICE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["qubits", "edges"],
    "properties": {
        "version": {"const": DEVICE_SCHEMA_VERSION},
        "name": {"type": "string"},
        "qubits": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["index"],
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "T1": _time,
                    "T2": _time,
                    "readout_fidelity": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["pair", "error", "duration"],
                "properties": {
                    "pair": {"type": "array", "items": {"type": "integer", "minimum": 0},
                             "minItems": 2, "maxItems": 2},
                    "gate": {"enum": list(GATE_TYPES)},
                    "error": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                    "duration": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class QubitProps:
    index: int
    T1: float | None = None
    T2: float | None = None
    readout_fidelity: float = 1.0


@dataclass(frozen=True)
class EdgeProps:
    pair: tuple[int, int]  # sorted
    error: float
    duration: float
    gate: str = "ECR"

    @property
    def fidelity(self) -> float:
        return 1.0 - self.error


@dataclass(frozen=True)
class DeviceModel:
    qubits: tuple[QubitProps, ...]
    edges: tuple[EdgeProps, ...]
    name: str = ""
    _adj: dict = field(default=None, init=False, repr=False, compare=False)
    _edge: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        qs = tuple(sorted(self.qubits, key=lambda q: q.index))
        object.__setattr__(self, "qubits", qs)
        idx = [q.index for q in qs]
        if len(set(idx)) != len(idx):
            raise DeviceError("duplicate qubit index")
        known = set(idx)
        edges, seen = [], set()
        for e in self.edges:
            a, b = e.pair
            if a == b:
                raise DeviceError(f"self-loop on qubit {a}")
            pair = (min(a, b), max(a, b))
            if pair in seen:
                raise DeviceError(f"duplicate edge {pair}")
            if not set(pair) <= known:
                raise DeviceError(f"edge {pair} references an unknown qubit")
            if not e.duration > 0:
                raise DeviceError(f"edge {pair} has non-positive duration")
            if not 0 <= e.error < 1:
                raise DeviceError(f"edge {pair} error outside [0, 1)")
            if e.gate not in GATE_TYPES:
                raise DeviceError(f"edge {pair} has unknown gate {e.gate!r}")
            seen.add(pair)
            edges.append(EdgeProps(pair, float(e.error), float(e.duration), e.gate))
        edges.sort(key=lambda e: e.pair)
        object.__setattr__(self, "edges", tuple(edges))
        adj: dict = {q: [] for q in idx}
        for e in edges:
            adj[e.pair[0]].append(e.pair[1])
            adj[e.pair[1]].append(e.pair[0])
        object.__setattr__(self, "_adj", {q: tuple(sorted(v)) for q, v in adj.items()})
        object.__setattr__(self, "_edge", {e.pair: e for e in edges})

    # -- graph queries ---------------------------------------------------------
    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(q.index for q in self.qubits)

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._adj[q]

    def edge(self, a: int, b: int) -> EdgeProps:
        try:
            return self._edge[(min(a, b), max(a, b))]
        except KeyError:
            raise DeviceError(f"no edge between {a} and {b}") from None

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge

    def qubit(self, q: int) -> QubitProps:
        for p in self.qubits:
            if p.index == q:
                return p
        raise DeviceError(f"unknown qubit {q}")

    @property
    def max_degree(self) -> int:
        return max((len(v) for v in self._adj.values()), default=0)

    def components(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for q in self.indices:
            if q in seen:
                continue
            stack, comp = [q], []
            seen.add(q)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def without_edges(self, pairs) -> "DeviceModel":
        drop = {(min(a, b), max(a, b)) for a, b in pairs}
        return DeviceModel(self.qubits, tuple(e for e in self.edges if e.pair not in drop), self.name)

    # -- serialisation -----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "version": DEVICE_SCHEMA_VERSION,
            "name": self.name,
            "qubits": [{"index": q.index, "T1": q.T1, "T2": q.T2, "readout_fidelity": q.readout_fidelity}
                       for q in self.qubits],
            "edges": [{"pair": list(e.pair), "gate": e.gate, "error": e.error, "duration": e.duration}
                      for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DeviceModel":
        try:
            jsonschema.validate(data, DEVICE_SCHEMA)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise DeviceError(f"device file invalid at {path}: {exc.message}") from None
        qubits = tuple(
            QubitProps(q["index"], q.get("T1"), q.get("T2"), q.get("readout_fidelity", 1.0))
            for q in data["qubits"]
        )
        edges = tuple(EdgeProps(tuple(e["pair"]), e["error"], e["duration"], e.get("gate", "ECR"))
                      for e in data["edges"])
        return cls(qubits, edges, data.get("name", ""))


def load_device(path) -> DeviceModel:
    """Read and validate a device JSON file."""
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise DeviceError(f"device file {p} not found") from None
    except json.JSONDecodeError as exc:
        raise DeviceError(f"device file {p} is not valid JSON (line {exc.lineno}: {exc.msg})") from None
    return DeviceModel.from_dict(data)


def prune_long_gates(device: DeviceModel, threshold_ratio: float = DEFAULT_PRUNE_RATIO) -> DeviceModel:
    """Drop edges whose duration exceeds ``threshold_ratio`` times the mean duration.

    Warns when the pruned graph is no longer connected.
    """
    if threshold_ratio <= 0:
        raise ValueError("threshold_ratio must be positive")
    if not device.edges:
        return device
    mean = sum(e.duration for e in device.edges) / len(device.edges)
    long = [e.pair for e in device.edges if e.duration > threshold_ratio * mean]
    pruned = device.without_edges(long)
    if long and device.is_connected() and not pruned.is_connected():
        warnings.warn(f"pruning {len(long)} long gates disconnects the coupling graph", stacklevel=2)
    return pruned


def depolarizing_alpha(error: float) -> float:
    """Two-qubit depolarizing parameter with process error ``error``: ``(16 (1 - e) - 1) / 15``."""
    return (16 * (1 - error) - 1) / 15


def noise_from_device(device: DeviceModel, qubits=None, coherence: bool = True) -> NoiseModel:
    """Simulator noise model: per-qubit T1/T2 and a depolarizing channel per gate.

    The gate channel reproduces each edge's isolated process error. With
    ``coherence`` the qubits also decay, so measured errors then exceed
    the listed ones by the decoherence accumulated during the layer.
    """
    keep = set(device.indices if qubits is None else qubits)
    t1 = {q.index: q.T1 for q in device.qubits if q.index in keep} if coherence else {}
    t2 = {q.index: q.T2 for q in device.qubits if q.index in keep} if coherence else {}
    for q in list(t1):
        if t1[q] is not None and t2[q] is not None and t2[q] > 2 * t1[q]:
            t2[q] = 2 * t1[q]
    gd = {e.pair: depolarizing_alpha(e.error) for e in device.edges if set(e.pair) <= keep}
    return NoiseModel(t1=t1, t2=t2, gate_depolarizing=gd)


def duration_units(device: DeviceModel, unit_time: float) -> dict:
    """Edge durations rounded to whole unit slices (at least one)."""
    return {e.pair: max(1, int(math.floor(e.duration / unit_time + 0.5))) for e in device.edges}
