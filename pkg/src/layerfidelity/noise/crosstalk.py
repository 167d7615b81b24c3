"""Exact comparison of true and layer-estimated fidelity for one crosstalk term.

Two subsystems ``k`` (qubits ``0..n_k-1``) and ``j`` (the next ``n_j``)
are hit by a weight-2 Pauli ``P_x`` with one factor in each. Twirling
each subsystem separately and multiplying the two subsystem fidelities
double counts the shared error, so the estimate sits below the truth.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..core.pauli import PauliString, pauli_basis

MAX_CROSSTALK_QUBITS = 5


class CrosstalkFidelities(NamedTuple):
    F_true: float
    F_layer_estimate: float
    F_k: float
    F_j: float


def _diag_ptm(n: int, alpha: float, px: PauliString, flavor: str, paulis) -> np.ndarray:
    """``R_ii`` for the listed Paulis, evaluated densely from the channel."""
    d = 2**n
    pm = px.unsigned().to_matrix()
    if flavor == "coherent":
        u = np.cos(alpha) * np.eye(d) - 1j * np.sin(alpha) * pm
        kraus = [u]
    else:
        kraus = [np.sqrt(1 - alpha**2) * np.eye(d), alpha * pm]
    out = np.empty(len(paulis))
    for i, p in enumerate(paulis):
        m = p.to_matrix()
        img = sum(k @ m @ k.conj().T for k in kraus)
        out[i] = np.real(np.trace(m @ img)) / d
    return out


def _subsystem_fidelity(n_sub: int, offset: int, n: int, alpha, px, flavor) -> float:
    """Process fidelity seen by an RB twirl restricted to one subsystem."""
    pad = n - offset - n_sub
    paulis = [PauliString.from_label("I" * offset + p.labels + "I" * pad) for p in pauli_basis(n_sub)]
    r = _diag_ptm(n, alpha, px, flavor, paulis)
    # r[0] is the identity entry, so the mean is (1 + (d^2 - 1) alpha_sub) / d^2
    return float(np.mean(r))


def crosstalk_bound_oracle(alpha: float, n_k: int, n_j: int, P_x, flavor: str = "coherent") -> CrosstalkFidelities:
    """True layer fidelity versus the product of per-subsystem fidelities.

    ``coherent``: ``U = exp(-i alpha P_x)``. ``stochastic``:
    ``rho -> (1 - alpha^2) rho + alpha^2 P_x rho P_x``.
    """
    if flavor not in ("coherent", "stochastic"):
        raise ValueError(f"unknown flavor {flavor!r}")
    if n_k < 1 or n_j < 1:
        raise ValueError("both subsystems need at least one qubit")
    n = n_k + n_j
    if n > MAX_CROSSTALK_QUBITS:
        raise ValueError(f"dense oracle limited to {MAX_CROSSTALK_QUBITS} qubits")
    px = P_x if isinstance(P_x, PauliString) else PauliString.from_label(P_x)
    if px.n != n:
        raise ValueError("P_x size does not match n_k + n_j")
    in_k = [q for q in px.support if q < n_k]
    in_j = [q for q in px.support if q >= n_k]
    if len(in_k) != 1 or len(in_j) != 1:
        raise ValueError("P_x must be weight 2 with one factor in each subsystem")
    if flavor == "stochastic" and not 0 <= alpha <= 1:
        raise ValueError("stochastic alpha must lie in [0, 1]")

    f_true = float(np.mean(_diag_ptm(n, alpha, px, flavor, pauli_basis(n))))
    f_k = _subsystem_fidelity(n_k, 0, n, alpha, px, flavor)
    f_j = _subsystem_fidelity(n_j, n_k, n, alpha, px, flavor)
    return CrosstalkFidelities(f_true, f_k * f_j, f_k, f_j)

