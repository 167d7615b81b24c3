"""Process-fidelity arithmetic."""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .channels import PTM, ChannelError


def process_fidelity(exp: PTM, ideal: PTM) -> float:
    """``Tr(R_ideal^-1 R_exp) / d^2``."""
    if exp.matrix.shape != ideal.matrix.shape:
        raise ChannelError("PTM dimensions differ")
    if np.linalg.cond(ideal.matrix) > 1e12:
        raise ChannelError("ideal PTM is singular")
    d2 = ideal.matrix.shape[0]
    return float(np.trace(np.linalg.solve(ideal.matrix, exp.matrix)) / d2)


def unitary_process_fidelity(u: np.ndarray, u_ideal: np.ndarray) -> float:
    d = len(u)
    return float(abs(np.trace(u_ideal.conj().T @ u)) ** 2 / d**2)


class FidelityConversions(NamedTuple):
    F_g: float
    eps_g: float
    eps_p: float


def fidelity_conversions(F_p: float, d: int) -> FidelityConversions:
    """Average gate fidelity and the two error conventions for a process fidelity."""
    if d not in (2, 4):
        raise ValueError("dimension must be 2 or 4")
    if not -1.0 / (d * d - 1) - 1e-12 <= F_p <= 1 + 1e-12:
        raise ValueError(f"unphysical process fidelity {F_p}")
    F_g = (d * F_p + 1) / (d + 1)
    return FidelityConversions(F_g, 1 - F_g, 1 - F_p)


def process_error_from_gate_error(eps_g: float, d: int) -> float:
    return (d + 1) / d * eps_g


def gate_error_from_process_error(eps_p: float, d: int) -> float:
    return d / (d + 1) * eps_p


def fidelity_product_disjoint(fidelities: Iterable[float]) -> float:
    """Fidelity of a tensor product of maps on disjoint subsystems.

    Exact for disjoint subsystems. Across sequential layers the product is
    only a small-error approximation of the composed map's fidelity.
    """
    out = 1.0
    for f in fidelities:
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"fidelity {f} outside [0, 1]")
        out *= f
    return out
