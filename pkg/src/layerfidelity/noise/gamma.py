"""Sampling-overhead (gamma) calculators and their bounds for Pauli channels.

Conventions: ``gamma`` is the PEC sampling overhead of the inverse of a
Pauli channel, so ``gamma**-0.5`` is the geometric mean of the Pauli
fidelities (identity included), while the process fidelity is their
arithmetic mean.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..core.channels import PTM, ChannelError, QuantumChannel
from ..core.pauli import pauli_basis
from .model import NoiseModelError, PauliLindbladModel

# Above this process fidelity the lambda_0 expression loses all precision;
# both bounds collapse onto F_p there.
BOUND_SWITCH = 1 - 1e-6


def gamma_from_lindblad(model: PauliLindbladModel) -> float:
    """``exp(2 sum_k lambda_k)``."""
    return float(np.exp(2.0 * sum(rate for _, rate in model.generators)))


def lindblad_pauli_fidelities(model: PauliLindbladModel, n: int | None = None) -> np.ndarray:
    """``R_a = exp(-2 sum_{k anticommuting with a} lambda_k)`` over the Pauli basis."""
    n = model.n if n is None else n
    if model.generators and model.n != n:
        raise NoiseModelError("generator size does not match n")
    basis = pauli_basis(n)
    out = np.empty(len(basis))
    for i, a in enumerate(basis):
        s = sum(rate for p, rate in model.generators if not a.commutes(p))
        out[i] = np.exp(-2.0 * s)
    return out


def gamma_from_det(ptm: PTM | np.ndarray) -> float:
    """``det(R)^(-2/d^2)`` for a diagonal PTM with positive entries."""
    m = ptm.matrix if isinstance(ptm, PTM) else np.asarray(ptm, dtype=float)
    if not PTM(m).is_diagonal(1e-10):
        raise ChannelError("gamma_from_det needs a Pauli (diagonal) PTM")
    f = np.diag(m)
    if f.min() <= 0:
        raise ChannelError("non-positive Pauli fidelity: gamma undefined")
    return float(np.exp(-2.0 * np.mean(np.log(f))))


def gamma_inverse_sqrt(ptm: PTM | np.ndarray) -> float:
    """Geometric mean of the Pauli fidelities, ``gamma**-0.5``."""
    return gamma_from_det(ptm) ** -0.5


class GammaBounds(NamedTuple):
    lower: float
    upper: float


def _lambda0(fp: float) -> float:
    c = 2 * fp - 1
    return (math.log(2 - 2 * fp) - math.log(-math.log(c))) / math.log(c)


def gamma_bounds(F_p: float) -> GammaBounds:
    """Bounds on ``gamma**-0.5`` for any Pauli channel with process fidelity ``F_p``.

    ``lower = F_p - 1 + 2 l0 (1 - F_p) + (2 F_p - 1)**l0`` with ``l0`` the
    stationary point of the arithmetic/geometric mean gap; ``upper = F_p``.
    """
    if not 0.5 < F_p <= 1:
        raise ValueError(f"bounds need F_p in (1/2, 1], got {F_p}")
    if F_p > BOUND_SWITCH:
        return GammaBounds(F_p, F_p)
    l0 = _lambda0(F_p)
    c = 2 * F_p - 1
    lower = F_p - 1 + 2 * l0 * (1 - F_p) + c**l0
    return GammaBounds(min(lower, F_p), F_p)


class LemmaGap(NamedTuple):
    numeric_max: float
    analytic_bound: float
    lambda0: float


def lemma_gap(c: float, d_hi: float, N: int) -> LemmaGap:
    """Largest arithmetic-minus-geometric mean gap over ``[c, d_hi]^N``.

    The maximum of a convex function sits on the corners of the box, and by
    symmetry only the count ``m`` of coordinates at ``c`` matters. The
    analytic bound relaxes ``m/N`` to a continuous ``lambda`` and maximises
    ``f(lambda) = lambda c + (1 - lambda) d - c**lambda d**(1 - lambda)``.
    """
    if not 0 < c < d_hi:
        raise ValueError("need 0 < c < d_hi")
    if N < 1:
        raise ValueError("N must be at least 1")
    m = np.arange(N + 1)
    x = m / N
    gaps = x * c + (1 - x) * d_hi - c**x * d_hi ** (1 - x)
    r = math.log(d_hi / c)
    l0 = (math.log(r) - math.log((d_hi - c) / d_hi)) / r
    l0 = min(max(l0, 0.0), 1.0)
    f0 = l0 * c + (1 - l0) * d_hi - c**l0 * d_hi ** (1 - l0)
    return LemmaGap(float(gaps.max()), float(f0), float(l0))


# -- saturating families ------------------------------------------------------


class FamilyPoint(NamedTuple):
    F_p: float
    gamma_inv_sqrt: float


def global_depolarizing_point(n: int, alpha: float) -> FamilyPoint:
    d2 = 4**n
    return FamilyPoint((1 + (d2 - 1) * alpha) / d2, alpha ** ((d2 - 1) / d2))


def tensor_depolarizing_point(n: int, alpha: float) -> FamilyPoint:
    """Product of ``n/2`` two-qubit depolarizing channels, each with parameter ``alpha``."""
    if n % 2:
        raise ValueError("n must be even")
    pairs = n // 2
    fp = sum(alpha**k * 15**k * math.comb(pairs, k) for k in range(pairs + 1)) / 4**n
    return FamilyPoint(fp, alpha ** (15 * n / 32))


def single_pauli_point(p: float) -> FamilyPoint:
    """``rho -> p rho + (1 - p) P rho P``."""
    return FamilyPoint(p, math.sqrt(2 * p - 1))


def single_pauli_channel(n: int, p: float, pauli: str | None = None) -> QuantumChannel:
    label = pauli or "X" + "I" * (n - 1)
    return QuantumChannel.from_pauli_probs(n, {"I" * n: p, label: 1 - p})


def random_pauli_channel(n: int, rng: np.random.Generator, identity_floor: float = 0.5) -> QuantumChannel:
    """Pauli channel with flat-Dirichlet probabilities and ``p_I >= identity_floor``."""
    d2 = 4**n
    p = rng.dirichlet(np.ones(d2)) * (1 - identity_floor)
    p[0] += identity_floor
    basis = pauli_basis(n)
    return QuantumChannel.from_pauli_probs(n, {b.labels: float(pi) for b, pi in zip(basis, p)})


def depolarizing_gamma(alphas) -> float:
    """``prod_i alpha_i^(-15/8)`` for a product of two-qubit depolarizing channels."""
    out = 1.0
    for a in alphas:
        if not 0 < a <= 1:
            raise ValueError(f"depolarizing parameter {a} outside (0, 1]")
        out *= a ** (-15 / 8)
    return out


def lindblad_from_pauli_channel(channel: QuantumChannel) -> PauliLindbladModel | None:
    """Invert ``R = exp(-2 M lambda)`` for a Pauli channel; ``None`` if any rate is negative.

    ``M[a, k] = 1`` when Paulis ``a`` and ``k`` anticommute.
    """
    n = channel.n
    basis = pauli_basis(n)
    f = np.diag(channel.ptm_matrix())
    if f.min() <= 0:
        return None
    m = np.array([[0.0 if a.commutes(b) else 1.0 for b in basis[1:]] for a in basis[1:]])
    lam = np.linalg.solve(m, -0.5 * np.log(f[1:]))
    if lam.min() < -1e-12:
        return None
    return PauliLindbladModel(tuple((b, max(float(r), 0.0)) for b, r in zip(basis[1:], lam)))

