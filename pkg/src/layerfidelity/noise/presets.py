"""Built-in noise scenarios for the 4-qubit simulation campaigns.

All presets use ``T1 = T2 = 50 us`` on every qubit and assume the chain
``0-1-2-3`` with CX gates on (0, 1), (2, 3) in the even sub-layer and
(1, 2) in the odd one.
"""

from __future__ import annotations

from .model import CoherentTerm, NoiseModel

T1_DEFAULT = 50e-6
T2_DEFAULT = 50e-6
UNIT_TIME = 50e-9


def decoherence_only(t1: float = T1_DEFAULT, t2: float = T2_DEFAULT) -> NoiseModel:
    return NoiseModel(default_t1=t1, default_t2=t2)


def zz_model(xi_hz: float, pairs, kind: str = "zz_always_on", base: NoiseModel | None = None) -> NoiseModel:
    """``base`` plus a ZZ term of rate ``xi_hz`` on each pair."""
    base = base or decoherence_only()
    terms = tuple(CoherentTerm(kind, tuple(p), xi_hz) for p in pairs)
    return base.replace(coherent_terms=base.coherent_terms + terms)


def _scenario_terms(name: str, n_qubits: int = 4) -> tuple[CoherentTerm, ...]:
    qs = range(n_qubits)
    if name == "a":
        return tuple(CoherentTerm("zz_always_on", p, 150e3) for p in [(0, 1), (2, 3)])
    if name == "b":
        return tuple(CoherentTerm("zz_always_on", p, 150e3) for p in [(0, 3), (1, 2)])
    if name == "c":
        return tuple(CoherentTerm("zz_simultaneous_2q", p, 150e3) for p in [(0, 1), (2, 3)])
    if name == "d":
        return tuple(CoherentTerm("zz_simultaneous_2q", p, 150e3) for p in [(0, 3), (1, 2)])
    if name == "e":
        return tuple(CoherentTerm("zz_always_on", p, 100e3) for p in [(0, 1), (1, 2), (2, 3)])
    if name == "f":
        return tuple(CoherentTerm("z_drift_per_slice", (q,), 0.02) for q in qs)
    if name == "g":
        return (CoherentTerm("overrotation_2q", (), 0.1),)
    if name == "h":
        return (CoherentTerm("overrotation_2q", (), 0.1), CoherentTerm("underrotation_1q", (), 0.1))
    if name == "i":
        # IY and ZY each at 10% of the driven gate's rate
        return (
            CoherentTerm("drive_crosstalk", (1, 2), 0.1, trigger=(0, 1)),
            CoherentTerm("drive_crosstalk", (2, 1), 0.1, trigger=(2, 3)),
            CoherentTerm("drive_crosstalk", (1, 0), 0.1, trigger=(1, 2)),
        )
    raise KeyError(f"unknown scenario {name!r}")


SCENARIOS = {
    "a": "always-on ZZ 150 kHz on (0,1), (2,3)",
    "b": "always-on ZZ 150 kHz on (0,3), (1,2)",
    "c": "simultaneous-gate ZZ 150 kHz on (0,1), (2,3)",
    "d": "simultaneous-gate ZZ 150 kHz on (0,3), (1,2)",
    "e": "always-on ZZ 100 kHz on (0,1), (1,2), (2,3)",
    "f": "Z rotation of 0.02 rad after every time slice",
    "g": "10% over-rotation on all two-qubit gates",
    "h": "10% over-rotation on 2Q gates and 10% under-rotation on 1Q gates",
    "i": "10% IY+ZY drive crosstalk: 1->2 on CX01, 2->1 on CX23, 1->0 on CX12",
}


def scenario(name: str, t1: float = T1_DEFAULT, t2: float = T2_DEFAULT) -> NoiseModel:
    """Coherent-error scenario ``a`` .. ``i`` on top of T1/T2 decay."""
    return decoherence_only(t1, t2).replace(coherent_terms=_scenario_terms(name))


def preset(name: str) -> NoiseModel:
    """Look up a preset by name: ``decoherence``, ``noiseless`` or ``scenario_<x>``."""
    if name == "decoherence":
        return decoherence_only()
    if name == "noiseless":
        return NoiseModel()
    if name.startswith("scenario_"):
        return scenario(name[len("scenario_"):])
    raise KeyError(f"unknown noise preset {name!r}")
