"""Pauli strings in symplectic form.

A Pauli string on ``n`` qubits is stored as two bit masks ``x`` and ``z``
(bit ``q`` refers to qubit ``q``) and a phase exponent ``k`` so that the
operator is ``i**k * P_0 (x) P_1 (x) ... (x) P_{n-1}`` with the per-qubit
factor chosen from ``I, X, Y, Z`` by ``(x_q, z_q)``; ``(1, 1)`` is the
Hermitian ``Y``.

Qubit 0 is always the leftmost tensor factor and the first character of a
label, so ``"XZ"`` means ``X`` on qubit 0 and ``Z`` on qubit 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PAULI_LABELS = "IXYZ"

_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LABEL = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_PHASES = (1, 1j, -1, -1j)

SINGLE_QUBIT_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    # exponent of i picked up by sigma(x1,z1) * sigma(x2,z2)
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    k: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bit mask exceeds qubit count")
        object.__setattr__(self, "k", self.k % 4)

    @classmethod
    def from_label(cls, label: str, phase: complex = 1) -> "PauliString":
        """Build from a label such as ``"XIZ"`` or ``"-iYY"``."""
        sign = {"+": 0, "-": 2, "+i": 1, "i": 1, "-i": 3}
        prefix = ""
        while label and label[0] in "+-i":
            prefix += label[0]
            label = label[1:]
        k = sign[prefix] if prefix else 0
        k += _phase_exponent(phase)
        x = z = 0
        for q, ch in enumerate(label):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli symbol {ch!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(label), x, z, k)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, symbol: str) -> "PauliString":
        bx, bz = _BITS[symbol]
        return cls(n, bx << qubit, bz << qubit)

    @property
    def labels(self) -> str:
        return "".join(_LABEL[(self.x >> q) & 1, (self.z >> q) & 1] for q in range(self.n))

    @property
    def phase(self) -> complex:
        return _PHASES[self.k]

    @property
    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    @property
    def support(self) -> tuple[int, ...]:
        m = self.x | self.z
        return tuple(q for q in range(self.n) if (m >> q) & 1)

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        k = self.k + other.k
        for q in range(self.n):
            k += _g((self.x >> q) & 1, (self.z >> q) & 1, (other.x >> q) & 1, (other.z >> q) & 1)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, k)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.k + 2)

    def symplectic_product(self, other: "PauliString") -> int:
        """``<a, b>`` in GF(2): 0 if the strings commute, 1 otherwise."""
        return (bin(self.x & other.z).count("1") + bin(self.z & other.x).count("1")) & 1

    def commutes(self, other: "PauliString") -> bool:
        return self.symplectic_product(other) == 0

    def to_matrix(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for ch in self.labels:
            out = np.kron(out, SINGLE_QUBIT_MATRICES[ch])
        return self.phase * out

    def restrict(self, qubits) -> "PauliString":
        """Unsigned sub-string on ``qubits`` (in the given order)."""
        x = z = 0
        for i, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << i
            z |= ((self.z >> q) & 1) << i
        return PauliString(len(qubits), x, z)

    def replace(self, qubits, sub: "PauliString") -> "PauliString":
        """Overwrite the factors on ``qubits`` with ``sub``; phases multiply."""
        x, z = self.x, self.z
        for i, q in enumerate(qubits):
            x = (x & ~(1 << q)) | (((sub.x >> i) & 1) << q)
            z = (z & ~(1 << q)) | (((sub.z >> i) & 1) << q)
        return PauliString(self.n, x, z, self.k + sub.k)

    def tensor(self, other: "PauliString") -> "PauliString":
        return PauliString(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
            self.k + other.k,
        )

    def __str__(self) -> str:
        return ("", "i", "-", "-i")[self.k] + self.labels


def _phase_exponent(phase: complex) -> int:
    for k, p in enumerate(_PHASES):
        if abs(phase - p) < 1e-12:
            return k
    raise ValueError(f"phase must be one of +-1, +-i, got {phase}")


def pauli_labels(n: int) -> list[str]:
    """All ``4**n`` labels in lexicographic ``IXYZ`` order, qubit 0 leftmost."""
    return ["".join(p) for p in itertools.product(PAULI_LABELS, repeat=n)]


@lru_cache(maxsize=None)
def pauli_basis(n: int) -> tuple[PauliString, ...]:
    return tuple(PauliString.from_label(lab) for lab in pauli_labels(n))


@lru_cache(maxsize=None)
def pauli_matrices(n: int) -> np.ndarray:
    """Stack of shape ``(4**n, 2**n, 2**n)`` in :func:`pauli_labels` order."""
    mats = np.array([[1.0 + 0j]])[None]
    for _ in range(n):
        singles = np.stack([SINGLE_QUBIT_MATRICES[c] for c in PAULI_LABELS])
        mats = np.einsum("aij,bkl->abikjl", mats, singles).reshape(
            len(mats) * 4, mats.shape[1] * 2, mats.shape[2] * 2
        )
    mats.setflags(write=False)
    return mats


@lru_cache(maxsize=None)
def symplectic_sign_matrix(n: int) -> np.ndarray:
    """``S[a, b] = (-1)**<a, b>`` over the Pauli basis."""
    basis = pauli_basis(n)
    xs = np.array([p.x for p in basis])
    zs = np.array([p.z for p in basis])
    par = np.zeros((len(basis), len(basis)), dtype=int)
    for q in range(n):
        xa, za = (xs >> q) & 1, (zs >> q) & 1
        par += np.outer(xa, za) + np.outer(za, xa)
    out = 1 - 2 * (par & 1)
    out.setflags(write=False)
    return out
