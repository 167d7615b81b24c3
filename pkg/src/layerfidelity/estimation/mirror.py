"""Polarization of mirror-circuit outputs and its decay."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fit import fit_pure_exponential


def hamming_distribution(probs, target, n: int) -> np.ndarray:
    """``h_k``: probability of landing Hamming distance ``k`` from ``target``.

    ``probs`` is indexed by bitstring with the first qubit most significant.
    """
    p = np.asarray(probs, dtype=float)
    if p.shape != (2**n,):
        raise ValueError("distribution size does not match n")
    t = 0
    for b in target:
        t = 2 * t + int(b)
    idx = np.arange(2**n) ^ t
    weights = np.array([bin(i).count("1") for i in range(2**n)])
    h = np.bincount(weights[idx], weights=p, minlength=n + 1)
    return h / h.sum()


def polarization(probs, target, n: int) -> float:
    """``S = 4^n/(4^n - 1) sum_k (-1/2)^k h_k - 1/(4^n - 1)``; 1 for a perfect output, 0 if uniform."""
    h = hamming_distribution(probs, target, n)
    d2 = 4**n
    return float(d2 / (d2 - 1) * np.sum((-0.5) ** np.arange(n + 1) * h) - 1 / (d2 - 1))


@dataclass(frozen=True)
class MirrorFit:
    A: float
    alpha_S: float
    A_err: float
    alpha_err: float
    n: int

    @property
    def layer_fidelity(self) -> float:
        """Process fidelity of one full layer, ``(1 + (4^n - 1) alpha_S) / 4^n``."""
        d2 = 4**self.n
        return (1 + (d2 - 1) * self.alpha_S) / d2

    @property
    def layer_error(self) -> float:
        return 1 - self.layer_fidelity

    def to_dict(self) -> dict:
        return {"A": self.A, "alpha_S": self.alpha_S, "A_err": self.A_err, "alpha_err": self.alpha_err,
                "n": self.n, "layer_fidelity": self.layer_fidelity}


def mirror_polarization(depths, S_means, n: int, S_sems=None) -> MirrorFit:
    """Fit ``S(l) = A alpha_S**l``."""
    a, al, ae, ale = fit_pure_exponential(depths, S_means, S_sems)
    return MirrorFit(a, al, ae, ale, n)
