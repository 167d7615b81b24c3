"""Noise model types and their JSON form.

JSON schema (all times in seconds, rates in Hz, rotations as fractions,
drift angles in radians)::

    {
      "default_t1": 5e-05, "default_t2": 5e-05,        # null T1 -> no decay,
                                                      # null T2 -> T1-limited
      "t1": {"0": 6e-05}, "t2": {"0": 4e-05},          # per-qubit overrides
      "coherent_terms": [
        {"kind": "zz_always_on", "qubits": [0, 3], "strength": 150000.0},
        {"kind": "drive_crosstalk", "qubits": [1, 2], "strength": 0.1,
         "trigger": [0, 1]}
      ],
      "stochastic_terms": [{"qubits": [0, 1], "pauli": "XZ", "probability": 1e-4}],
      "gate_depolarizing": [{"pair": [0, 1], "alpha": 0.99}]
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

COHERENT_KINDS = (
    "zz_always_on",
    "zz_simultaneous_2q",
    "overrotation_2q",
    "underrotation_1q",
    "z_drift_per_slice",
    "drive_crosstalk",
)


class NoiseModelError(ValueError):
    pass


@dataclass(frozen=True)
class CoherentTerm:
    """One coherent error source.

    ``qubits`` is a pair for the ZZ kinds, ``(source, target)`` for drive
    crosstalk, a single qubit for drift, and either empty (every gate) or
    the affected gate's qubits for the rotation kinds. ``trigger`` names
    the two-qubit gate whose drive causes a drive-crosstalk term.
    """

    kind: str
    qubits: tuple[int, ...]
    strength: float
    trigger: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.trigger is not None:
            object.__setattr__(self, "trigger", tuple(int(q) for q in self.trigger))
        k, q, s = self.kind, self.qubits, self.strength
        if k not in COHERENT_KINDS:
            raise NoiseModelError(f"unknown coherent term kind {k!r}")
        if not math.isfinite(s):
            raise NoiseModelError("strength must be finite")
        if len(set(q)) != len(q):
            raise NoiseModelError(f"repeated qubit in {q}")
        if k in ("zz_always_on", "zz_simultaneous_2q") and len(q) != 2:
            raise NoiseModelError(f"{k} needs a qubit pair")
        if k == "overrotation_2q" and len(q) not in (0, 2):
            raise NoiseModelError("overrotation_2q takes no qubits or a pair")
        if k == "underrotation_1q" and len(q) > 1:
            raise NoiseModelError("underrotation_1q takes no qubits or one qubit")
        if k == "z_drift_per_slice" and len(q) != 1:
            raise NoiseModelError("z_drift_per_slice needs one qubit")
        if k == "drive_crosstalk":
            if len(q) != 2 or self.trigger is None or len(self.trigger) != 2:
                raise NoiseModelError("drive_crosstalk needs (source, target) and a trigger pair")
        if k in ("overrotation_2q", "underrotation_1q", "drive_crosstalk") and not -1 <= s <= 1:
            raise NoiseModelError(f"{k} fraction must lie in [-1, 1]")

    def involved_qubits(self) -> tuple[int, ...]:
        return self.qubits + (self.trigger or ())

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "qubits": list(self.qubits), "strength": self.strength}
        if self.trigger is not None:
            d["trigger"] = list(self.trigger)
        return d


@dataclass(frozen=True)
class StochasticTerm:
    """Pauli error ``label`` on ``qubits`` with probability per unit time slice."""

    qubits: tuple[int, ...]
    pauli: str
    probability: float

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.pauli) != len(self.qubits) or set(self.pauli) - set("IXYZ"):
            raise NoiseModelError(f"bad Pauli label {self.pauli!r}")
        if not 0 <= self.probability <= 1:
            raise NoiseModelError("probability outside [0, 1]")


def _opt_time(v):
    if v is None:
        return None
    v = float(v)
    return None if math.isinf(v) else v


@dataclass(frozen=True)
class NoiseModel:
    default_t1: float | None = None
    default_t2: float | None = None
    t1: dict = field(default_factory=dict)
    t2: dict = field(default_factory=dict)
    coherent_terms: tuple[CoherentTerm, ...] = ()
    stochastic_terms: tuple[StochasticTerm, ...] = ()
    gate_depolarizing: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "t1", {int(k): _opt_time(v) for k, v in self.t1.items()})
        object.__setattr__(self, "t2", {int(k): _opt_time(v) for k, v in self.t2.items()})
        object.__setattr__(self, "default_t1", _opt_time(self.default_t1))
        object.__setattr__(self, "default_t2", _opt_time(self.default_t2))
        object.__setattr__(self, "coherent_terms", tuple(self.coherent_terms))
        object.__setattr__(self, "stochastic_terms", tuple(self.stochastic_terms))
        gd = {}
        for pair, a in self.gate_depolarizing.items():
            if not -1 / 15 <= a <= 1:
                raise NoiseModelError(f"depolarizing parameter {a} for {pair} is unphysical")
            gd[tuple(sorted(int(q) for q in pair))] = float(a)
        object.__setattr__(self, "gate_depolarizing", gd)
        for q in set(self.t1) | set(self.t2) | {None}:
            t1, t2 = self.coherence(q) if q is not None else (self.default_t1, self.default_t2)
            if (t1 is not None and t1 <= 0) or (t2 is not None and t2 <= 0):
                raise NoiseModelError("coherence times must be positive")
            if t1 is not None and t2 is not None and t2 > 2 * t1 * (1 + 1e-12):
                raise NoiseModelError(f"T2 > 2 T1 on qubit {q}")
        if sum(t.probability for t in self.stochastic_terms) > 1 + 1e-12:
            raise NoiseModelError("stochastic probabilities exceed 1")

    def coherence(self, q: int) -> tuple[float | None, float | None]:
        return self.t1.get(q, self.default_t1), self.t2.get(q, self.default_t2)

    def pair_depolarizing(self, pair) -> float:
        return self.gate_depolarizing.get(tuple(sorted(pair)), 1.0)

    def is_noiseless(self) -> bool:
        return (
            self.default_t1 is None
            and self.default_t2 is None
            and all(v is None for v in list(self.t1.values()) + list(self.t2.values()))
            and not self.coherent_terms
            and not self.stochastic_terms
            and all(a == 1.0 for a in self.gate_depolarizing.values())
        )

    def replace(self, **changes) -> "NoiseModel":
        d = dict(
            default_t1=self.default_t1,
            default_t2=self.default_t2,
            t1=self.t1,
            t2=self.t2,
            coherent_terms=self.coherent_terms,
            stochastic_terms=self.stochastic_terms,
            gate_depolarizing=self.gate_depolarizing,
        )
        d.update(changes)
        return NoiseModel(**d)

    def restricted(self, qubits) -> "NoiseModel":
        """Drop terms that touch qubits outside ``qubits``."""
        qs = set(qubits)
        coh = tuple(t for t in self.coherent_terms if set(t.involved_qubits()) <= qs)
        sto = tuple(t for t in self.stochastic_terms if set(t.qubits) <= qs)
        gd = {p: a for p, a in self.gate_depolarizing.items() if set(p) <= qs}
        return self.replace(coherent_terms=coh, stochastic_terms=sto, gate_depolarizing=gd)

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "default_t1": self.default_t1,
            "default_t2": self.default_t2,
            "t1": {str(k): v for k, v in sorted(self.t1.items())},
            "t2": {str(k): v for k, v in sorted(self.t2.items())},
            "coherent_terms": [t.to_dict() for t in self.coherent_terms],
            "stochastic_terms": [
                {"qubits": list(t.qubits), "pauli": t.pauli, "probability": t.probability}
                for t in self.stochastic_terms
            ],
            "gate_depolarizing": [
                {"pair": list(p), "alpha": a} for p, a in sorted(self.gate_depolarizing.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        try:
            jsonschema.validate(data, NOISE_MODEL_SCHEMA)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise NoiseModelError(f"noise model invalid at {path}: {exc.message}") from None
        return cls(
            default_t1=data.get("default_t1"),
            default_t2=data.get("default_t2"),
            t1=data.get("t1", {}),
            t2=data.get("t2", {}),
            coherent_terms=tuple(
                CoherentTerm(t["kind"], tuple(t["qubits"]), t["strength"],
                             tuple(t["trigger"]) if t.get("trigger") else None)
                for t in data.get("coherent_terms", [])
            ),
            stochastic_terms=tuple(
                StochasticTerm(tuple(t["qubits"]), t["pauli"], t["probability"])
                for t in data.get("stochastic_terms", [])
            ),
            gate_depolarizing={tuple(g["pair"]): g["alpha"] for g in data.get("gate_depolarizing", [])},
        )

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def from_json(cls, path) -> "NoiseModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


_time = {"type": ["number", "null"], "exclusiveMinimum": 0}
NOISE_MODEL_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "default_t1": _time,
        "default_t2": _time,
        "t1": {"type": "object", "additionalProperties": _time},
        "t2": {"type": "object", "additionalProperties": _time},
        "coherent_terms": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind", "qubits", "strength"],
                "properties": {
                    "kind": {"enum": list(COHERENT_KINDS)},
                    "qubits": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "strength": {"type": "number"},
                    "trigger": {
                        "type": ["array", "null"],
                        "items": {"type": "integer", "minimum": 0},
                    },
                },
            },
        },
        "stochastic_terms": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["qubits", "pauli", "probability"],
                "properties": {
                    "qubits": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "pauli": {"type": "string", "pattern": "^[IXYZ]+$"},
                    "probability": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "gate_depolarizing": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["pair", "alpha"],
                "properties": {
                    "pair": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    "alpha": {"type": "number"},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class PauliLindbladModel:
    """Generators ``L(rho) = sum_k lambda_k (P_k rho P_k - rho)``."""

    generators: tuple  # of (PauliString, rate)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        ns = {p.n for p, _ in gens}
        if len(ns) > 1:
            raise NoiseModelError("generators act on different qubit counts")
        if any(rate < 0 for _, rate in gens):
            raise NoiseModelError("Lindblad rates must be non-negative")

    @property
    def n(self) -> int:
        return self.generators[0][0].n if self.generators else 0
