"""Decoherence maps, coherent error factors and closed-form error estimates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.linalg import expm

from ..core.channels import QuantumChannel
from ..core.fidelity import unitary_process_fidelity
from ..core.gates import TWO_QUBIT_GENERATORS, X90_ANGLE, X, Y, Z, I2, is_unitary
from .model import CoherentTerm, NoiseModelError


def _rates(t1: float | None, t2: float | None) -> tuple[float, float]:
    """(1/T1, pure-dephasing rate 1/T2 - 1/(2 T1)); ``None`` means infinite."""
    g1 = 0.0 if t1 is None else 1.0 / t1
    if t2 is None:
        return g1, 0.0
    if t1 is not None and t2 > 2 * t1 * (1 + 1e-12):
        raise NoiseModelError(f"T2 = {t2} exceeds 2 T1 = {2 * t1}")
    return g1, max(1.0 / t2 - 0.5 * g1, 0.0)


def t1t2_decay_factors(t1: float | None, t2: float | None, dt: float) -> tuple[float, float]:
    """``(gamma, coherence)``: excited-state loss probability and the total
    off-diagonal multiplier ``exp(-dt/T2)`` for one step."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    g1, gphi = _rates(t1, t2)
    return 1.0 - np.exp(-dt * g1), np.exp(-dt * (0.5 * g1 + gphi))


def t1t2_step_channel(t1: float | None, t2: float | None, dt: float) -> QuantumChannel:
    """Amplitude damping toward ``|0>`` followed by pure dephasing."""
    gamma, coh = t1t2_decay_factors(t1, t2, dt)
    ad = [
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex),
    ]
    lam = coh / np.sqrt(1 - gamma) if gamma < 1 else 0.0
    pd = [np.sqrt((1 + lam) / 2) * I2, np.sqrt((1 - lam) / 2) * Z]
    return QuantumChannel.from_kraus([p @ a for a in ad for p in pd])


def incoherent_layer_error(t1s: Iterable, t2s: Iterable, t_g: float) -> float:
    """``1 - prod_i (1/4 + exp(-t_g/T2_i)/2 + exp(-t_g/T1_i)/4)``.

    ``None`` coherence times are infinite; a ``None`` T2 with finite T1 is
    treated as T1-limited (``T2 = 2 T1``), as in the simulator.
    """
    if t_g < 0:
        raise ValueError("t_g must be non-negative")
    f = 1.0
    for t1, t2 in zip(t1s, t2s):
        e1 = 1.0 if t1 is None else np.exp(-t_g / t1)
        if t2 is None:
            e2 = 1.0 if t1 is None else np.exp(-t_g / (2 * t1))
        else:
            e2 = np.exp(-t_g / t2)
        f *= 0.25 + 0.5 * e2 + 0.25 * e1
    return 1.0 - f


def coherent_process_error(u: np.ndarray, u_ideal: np.ndarray) -> float:
    """``1 - |Tr(U_ideal^dagger U)|^2 / d^2``."""
    if u.shape != u_ideal.shape:
        raise ValueError("unitaries differ in size")
    for m in (u, u_ideal):
        if not is_unitary(m):
            raise ValueError("input is not unitary")
    return float(min(max(1.0 - unitary_process_fidelity(u, u_ideal), 0.0), 1.0))


# -- per-slice coherent factors ---------------------------------------------

_P11 = np.diag([0, 0, 0, 1]).astype(complex)
_ZY_PLUS_IY = np.kron(Z, Y) + np.kron(I2, Y)


@dataclass(frozen=True)
class SliceContext:
    """What happens during one unit time slice.

    ``actions`` maps each qubit to ``("x90",)``, ``("idle",)`` or
    ``("g2", gate, (a, b), index, duration)``.
    """

    dt: float
    actions: Mapping[int, tuple] = field(default_factory=dict)

    def gates_2q(self) -> dict:
        out = {}
        for act in self.actions.values():
            if act[0] == "g2":
                out[act[2]] = act
        return out

    def in_2q(self, q: int) -> bool:
        act = self.actions.get(q)
        return act is not None and act[0] == "g2"


def coherent_term_unitary(term: CoherentTerm, ctx: SliceContext, n_qubits: int | None = None):
    """Error factors contributed by ``term`` during one slice.

    Returns a list of ``(matrix, qubits)``; an empty list is the identity.
    Rotation kinds return the excess rotation, which commutes with the
    gate it modifies, so gate-then-factor equals the scaled gate.
    """
    if n_qubits is not None and any(not 0 <= q < n_qubits for q in term.involved_qubits()):
        raise NoiseModelError(f"term {term.kind} references qubits outside the system")
    kind, s = term.kind, term.strength
    if kind == "zz_always_on" or kind == "zz_simultaneous_2q":
        if kind == "zz_simultaneous_2q" and not all(ctx.in_2q(q) for q in term.qubits):
            return []
        phi = 2 * np.pi * s * ctx.dt
        if phi == 0:
            return []
        return [(np.diag([1, 1, 1, np.exp(-1j * phi)]).astype(complex), term.qubits)]
    if kind == "z_drift_per_slice":
        if s == 0:
            return []
        return [(np.diag([np.exp(-0.5j * s), np.exp(0.5j * s)]), term.qubits)]
    if kind == "underrotation_1q":
        out = []
        for q, act in sorted(ctx.actions.items()):
            if act[0] == "x90" and (not term.qubits or q in term.qubits) and s:
                a = X90_ANGLE * s  # X90 scaled by (1 - s)
                out.append((np.cos(a) * I2 + 1j * np.sin(a) * X, (q,)))
        return out
    if kind == "overrotation_2q":
        out = []
        for pair, act in sorted(ctx.gates_2q().items()):
            if term.qubits and set(term.qubits) != set(pair):
                continue
            theta, h = TWO_QUBIT_GENERATORS[act[1]]
            if s:
                out.append((expm(-1j * s * theta / act[4] * h), pair))
        return out
    if kind == "drive_crosstalk":
        act = ctx.gates_2q().get(term.trigger) or ctx.gates_2q().get(term.trigger[::-1])
        if act is None or s == 0:
            return []
        a = np.pi / 4 * s / act[4]  # relative to the pi/4 ZX angle of a CX-class gate
        return [(expm(-1j * a * _ZY_PLUS_IY), term.qubits)]
    raise NoiseModelError(f"unknown kind {kind}")
