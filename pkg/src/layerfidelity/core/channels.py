"""Density matrices, quantum channels and Pauli transfer matrices.

Superoperators use row-major vectorisation, ``vec(A B C) = (A (x) C^T) vec(B)``,
and PTM rows/columns follow :func:`~layerfidelity.core.pauli.pauli_labels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .pauli import PauliString, pauli_labels, pauli_matrices, symplectic_sign_matrix

MAX_PTM_QUBITS = 4
TP_ATOL = 1e-10


class ChannelError(ValueError):
    """Invalid channel, or an operation outside its supported domain."""


@dataclass(frozen=True)
class DensityMatrix:
    data: np.ndarray

    def __post_init__(self):
        d = self.data.shape[0]
        if self.data.shape != (d, d) or d & (d - 1):
            raise ChannelError("density matrix must be square with power-of-two size")

    @property
    def n(self) -> int:
        return self.data.shape[0].bit_length() - 1

    @classmethod
    def zero(cls, n: int) -> "DensityMatrix":
        rho = np.zeros((2**n, 2**n), dtype=complex)
        rho[0, 0] = 1
        return cls(rho)

    def validate(self, trace_atol: float = 1e-10, psd_atol: float = 1e-9) -> None:
        rho = self.data
        if not np.allclose(rho, rho.conj().T, atol=1e-10):
            raise ChannelError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > trace_atol:
            raise ChannelError(f"trace {np.trace(rho).real} != 1")
        if np.linalg.eigvalsh(rho).min() < -psd_atol:
            raise ChannelError("density matrix is not positive semidefinite")

    def probabilities(self) -> np.ndarray:
        return np.clip(np.real(np.diag(self.data)), 0.0, 1.0)


@dataclass(frozen=True)
class PTM:
    """Real ``4**n x 4**n`` matrix with ``R_ij = Tr(P_i L[P_j]) / d``."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return (self.matrix.shape[0].bit_length() - 1) // 2

    @property
    def dim(self) -> int:
        return 2**self.n

    def pauli_fidelities(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    def is_diagonal(self, atol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.all(np.abs(m - np.diag(np.diag(m))) <= atol))

    def __matmul__(self, other: "PTM") -> "PTM":
        return PTM(self.matrix @ other.matrix)


def _pauli_columns(n: int) -> np.ndarray:
    # columns are row-major vec(P_j)
    mats = pauli_matrices(n)
    return mats.reshape(len(mats), -1).T


class QuantumChannel:
    """A channel held as Kraus operators, Pauli probabilities or a PTM.

    Exactly one representation is supplied; the others are derived on
    demand. Pauli probabilities are given as a mapping from label (or
    :class:`PauliString`) to probability.
    """

    def __init__(
        self,
        n: int,
        kraus: Sequence[np.ndarray] | None = None,
        pauli_probs: Mapping | None = None,
        ptm: np.ndarray | PTM | None = None,
    ):
        given = [r is not None for r in (kraus, pauli_probs, ptm)]
        if sum(given) != 1:
            raise ChannelError("supply exactly one representation")
        self.n = n
        self._kraus = None
        self._probs = None
        self._ptm = None
        d = 2**n
        if kraus is not None:
            ops = [np.asarray(k, dtype=complex) for k in kraus]
            if any(k.shape != (d, d) for k in ops):
                raise ChannelError("Kraus operator has wrong shape")
            self._kraus = ops
        elif pauli_probs is not None:
            probs = np.zeros(4**n)
            index = {lab: i for i, lab in enumerate(pauli_labels(n))}
            for key, p in pauli_probs.items():
                lab = key.labels if isinstance(key, PauliString) else key
                if len(lab) != n:
                    raise ChannelError(f"label {lab!r} is not on {n} qubits")
                probs[index[lab]] += p
            if probs.min() < -1e-12:
                raise ChannelError("negative Pauli probability")
            self._probs = probs
        else:
            m = ptm.matrix if isinstance(ptm, PTM) else np.asarray(ptm, dtype=float)
            if m.shape != (4**n, 4**n):
                raise ChannelError("PTM has wrong shape")
            self._ptm = m

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_kraus(cls, kraus: Sequence[np.ndarray]) -> "QuantumChannel":
        d = np.asarray(kraus[0]).shape[0]
        return cls(d.bit_length() - 1, kraus=kraus)

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> "QuantumChannel":
        return cls.from_kraus([u])

    @classmethod
    def from_pauli_probs(cls, n: int, probs: Mapping) -> "QuantumChannel":
        return cls(n, pauli_probs=probs)

    @classmethod
    def from_ptm(cls, ptm: np.ndarray | PTM) -> "QuantumChannel":
        m = ptm.matrix if isinstance(ptm, PTM) else np.asarray(ptm)
        return cls((m.shape[0].bit_length() - 1) // 2, ptm=m)

    @classmethod
    def identity(cls, n: int) -> "QuantumChannel":
        return cls(n, kraus=[np.eye(2**n, dtype=complex)])

    @classmethod
    def depolarizing(cls, n: int, alpha: float) -> "QuantumChannel":
        """``rho -> alpha rho + (1 - alpha) I/d``: all non-trivial Pauli fidelities are ``alpha``."""
        d2 = 4**n
        probs = {lab: (1 - alpha) / d2 for lab in pauli_labels(n)}
        probs["I" * n] = 1 - (d2 - 1) * (1 - alpha) / d2
        return cls(n, pauli_probs=probs)

    # -- representations --------------------------------------------------
    @property
    def dim(self) -> int:
        return 2**self.n

    def is_pauli(self) -> bool:
        if self._probs is not None:
            return True
        return PTM(self.ptm_matrix()).is_diagonal(1e-10)

    def pauli_probabilities(self) -> np.ndarray:
        if self._probs is not None:
            return self._probs.copy()
        m = self.ptm_matrix()
        if not PTM(m).is_diagonal(1e-10):
            raise ChannelError("channel is not a Pauli channel")
        return symplectic_sign_matrix(self.n) @ np.diag(m) / 4**self.n

    def superoperator(self) -> np.ndarray:
        if self._kraus is not None:
            return sum(np.kron(k, k.conj()) for k in self._kraus)
        b = _pauli_columns(self.n)
        return b @ self.ptm_matrix() @ b.conj().T / self.dim

    def ptm_matrix(self) -> np.ndarray:
        if self._ptm is not None:
            return self._ptm
        if self._probs is not None:
            return np.diag(symplectic_sign_matrix(self.n) @ self._probs).astype(float)
        if self.n > MAX_PTM_QUBITS + 1:
            raise ChannelError("dense PTM construction capped")
        b = _pauli_columns(self.n)
        r = b.conj().T @ self.superoperator() @ b / self.dim
        return np.real(r)

    def choi(self) -> np.ndarray:
        d = self.dim
        s = self.superoperator().reshape(d, d, d, d)
        return s.transpose(0, 2, 1, 3).reshape(d * d, d * d)

    def kraus_ops(self) -> list[np.ndarray]:
        if self._kraus is not None:
            return list(self._kraus)
        if self._probs is not None:
            mats = pauli_matrices(self.n)
            return [np.sqrt(p) * mats[i] for i, p in enumerate(self._probs) if p > 1e-15]
        d = self.dim
        w, v = np.linalg.eigh(self.choi())
        if w.min() < -1e-9:
            raise ChannelError("channel is not completely positive")
        return [np.sqrt(wi) * v[:, i].reshape(d, d) for i, wi in enumerate(w) if wi > 1e-14]

    # -- checks and algebra -----------------------------------------------
    def is_trace_preserving(self, atol: float = TP_ATOL) -> bool:
        if self._probs is not None:
            return abs(self._probs.sum() - 1) <= atol
        if self._kraus is not None:
            total = sum(k.conj().T @ k for k in self._kraus)
            return bool(np.allclose(total, np.eye(self.dim), atol=atol))
        first = self._ptm[0]
        target = np.zeros_like(first)
        target[0] = 1
        return bool(np.allclose(first, target, atol=atol))

    def is_cp(self, atol: float = 1e-9) -> bool:
        return bool(np.linalg.eigvalsh(self.choi()).min() >= -atol)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops())

    def compose(self, other: "QuantumChannel") -> "QuantumChannel":
        """Apply ``self`` first, then ``other``."""
        if self.n != other.n:
            raise ChannelError("qubit count mismatch")
        if self._probs is not None and other._probs is not None:
            f = np.diag(self.ptm_matrix()) * np.diag(other.ptm_matrix())
            return QuantumChannel(self.n, ptm=np.diag(f))
        kraus = [b @ a for a in self.kraus_ops() for b in other.kraus_ops()]
        return QuantumChannel(self.n, kraus=kraus)

    def tensor(self, other: "QuantumChannel") -> "QuantumChannel":
        kraus = [np.kron(a, b) for a in self.kraus_ops() for b in other.kraus_ops()]
        return QuantumChannel(self.n + other.n, kraus=kraus)


def ptm_from_channel(channel: QuantumChannel) -> PTM:
    if channel.n > MAX_PTM_QUBITS:
        raise ChannelError(f"dense PTM limited to {MAX_PTM_QUBITS} qubits, got {channel.n}")
    if not channel.is_trace_preserving():
        raise ChannelError("channel is not trace preserving")
    return PTM(channel.ptm_matrix())
