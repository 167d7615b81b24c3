"""Dense gate matrices, generators and operator embedding.

Every native two-qubit gate is written as ``exp(-i * theta * H)`` so that a
gate of duration ``k`` units can be sliced into ``k`` equal fractions and
over/under-rotations scale ``theta``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .pauli import SINGLE_QUBIT_MATRICES as _P

I2 = _P["I"]
X = _P["X"]
Y = _P["Y"]
Z = _P["Z"]

_P1 = np.diag([0.0, 1.0]).astype(complex)
_MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)

# name -> (theta, H) with U = expm(-1j * theta * H)
TWO_QUBIT_GENERATORS: dict[str, tuple[float, np.ndarray]] = {
    "cx": (-np.pi, np.kron(_P1, _MINUS)),
    "cz": (-np.pi, np.kron(_P1, _P1)),
    "ecr": (np.pi / 4, np.kron(Z, X)),
}
TWO_QUBIT_GATES = tuple(TWO_QUBIT_GENERATORS)

X90_ANGLE = np.pi / 4  # X90 = exp(-i pi/4 X)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def x90(scale: float = 1.0) -> np.ndarray:
    a = X90_ANGLE * scale
    return np.cos(a) * I2 - 1j * np.sin(a) * X


def two_qubit_fraction(name: str, fraction: float = 1.0) -> np.ndarray:
    """``exp(-i * fraction * theta * H)`` for a native gate."""
    theta, h = TWO_QUBIT_GENERATORS[name]
    return expm(-1j * fraction * theta * h)


@lru_cache(maxsize=None)
def two_qubit_gate(name: str) -> np.ndarray:
    u = two_qubit_fraction(name)
    u.setflags(write=False)
    return u


def embed(op: np.ndarray, targets, n: int) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in that order) to ``n`` qubits."""
    targets = list(targets)
    k = len(targets)
    if op.shape != (2**k, 2**k):
        raise ValueError("operator size does not match target count")
    if len(set(targets)) != k or any(not 0 <= t < n for t in targets):
        raise ValueError(f"invalid targets {targets} for {n} qubits")
    rest = [q for q in range(n) if q not in targets]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    order = targets + rest
    perm = [order.index(q) for q in range(n)]
    t = full.reshape([2] * (2 * n))
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(2**n, 2**n)


def is_unitary(u: np.ndarray, atol: float = 1e-8) -> bool:
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(len(u)), ord=2) <= atol)


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, atol: float = 1e-9) -> bool:
    d = len(u)
    return abs(abs(np.trace(u.conj().T @ v)) / d - 1.0) <= atol
