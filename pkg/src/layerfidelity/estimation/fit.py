"""Exponential decay fits ``P(l) = A alpha**l + B``."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

UNDERDRIVEN_LEVEL = 0.95
SIGMA_FLOOR = 1e-6


@dataclass(frozen=True)
class DecayCurve:
    depths: tuple[int, ...]
    means: tuple[float, ...]
    sems: tuple[float, ...]
    unit: tuple[int, ...] = ()
    sublayer: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "depths", tuple(int(x) for x in self.depths))
        object.__setattr__(self, "means", tuple(float(x) for x in self.means))
        object.__setattr__(self, "sems", tuple(float(x) for x in self.sems))
        if not len(self.depths) == len(self.means) == len(self.sems):
            raise ValueError("depths, means and sems must have equal length")
        if any(not -1e-9 <= m <= 1 + 1e-9 for m in self.means):
            raise ValueError("survival outside [0, 1]")

    @property
    def dimension(self) -> int:
        return 2 ** len(self.unit) if self.unit else 4

    @classmethod
    def from_samples(cls, depths, samples, unit=(), sublayer=None) -> "DecayCurve":
        """``samples[i]`` holds the per-randomization survivals at ``depths[i]``.

        Means are clipped into ``[0, 1]`` (sampling noise can push them out).
        """
        means, sems = [], []
        for s in samples:
            s = np.asarray(s, dtype=float)
            means.append(float(np.clip(s.mean(), 0.0, 1.0)))
            sems.append(float(s.std(ddof=1) / np.sqrt(len(s))) if len(s) > 1 else 0.0)
        return cls(tuple(depths), tuple(means), tuple(sems), tuple(unit), sublayer)

    def to_dict(self) -> dict:
        return {"unit": list(self.unit), "sublayer": self.sublayer, "depths": list(self.depths),
                "means": list(self.means), "sems": list(self.sems)}


@dataclass(frozen=True)
class FitResult:
    A: float
    alpha: float
    B: float
    A_err: float
    alpha_err: float
    B_err: float
    reduced_chi2: float
    converged: bool = True
    flags: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("A", "alpha", "B", "A_err", "alpha_err", "B_err",
                                              "reduced_chi2", "converged")} | {"flags": list(self.flags)}


def _model(l, a, alpha, b):
    return a * alpha**l + b


def fit_decay(curve: DecayCurve, d: int | None = None, max_restarts: int = 4) -> FitResult:
    """Weighted bounded least squares with ``A, B in [0, 1]`` and ``alpha in (0, 1]``.

    Weights are the per-depth standard errors (floored); the covariance is
    inflated by the reduced chi-square when that exceeds one. A curve that
    never falls below 0.95 is flagged ``underdriven``; a constant curve at
    1 pins ``alpha = 1``.
    """
    d = d or curve.dimension
    x = np.asarray(curve.depths, dtype=float)
    y = np.clip(np.asarray(curve.means, dtype=float), 0.0, 1.0)
    if len(set(curve.depths)) < 4:
        raise ValueError("fit needs at least four distinct depths")
    flags = []
    if y.min() >= UNDERDRIVEN_LEVEL:
        flags.append("underdriven")
    if np.all(y >= 1 - 1e-12):
        return FitResult(1 - 1 / d**2, 1.0, 1 / d**2, 0.0, 0.0, 0.0, 0.0, True, tuple(flags))

    sems = np.asarray(curve.sems, dtype=float)
    have_sigma = bool(np.any(sems > 0))
    sigma = None
    if have_sigma:
        sigma = np.maximum(sems, max(SIGMA_FLOOR, 0.1 * sems[sems > 0].min()))

    b0 = 1 / d**2
    i0, i1 = int(np.argmin(x)), int(np.argmax(x))
    a0 = min(max(y[i0] - b0, 1e-3), 1.0)
    ratio = (y[i1] - b0) / max(y[i0] - b0, 1e-12)
    alpha0 = ratio ** (1 / (x[i1] - x[i0])) if ratio > 0 else 0.5
    starts = [min(max(alpha0, 0.01), 0.9999), 0.99, 0.9, 0.5, 0.999][: max_restarts + 1]

    best = None
    for a_start in starts:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                popt, pcov = curve_fit(
                    _model, x, y, p0=[a0, a_start, b0], sigma=sigma, absolute_sigma=have_sigma,
                    bounds=([0.0, 1e-12, 0.0], [1.0, 1.0, 1.0]), maxfev=20000,
                )
        except (RuntimeError, ValueError):
            continue
        resid = (y - _model(x, *popt)) / (sigma if sigma is not None else 1.0)
        cost = float(resid @ resid)
        if best is None or cost < best[2]:
            best = (popt, pcov, cost)
    if best is None:
        flags.append("no_convergence")
        return FitResult(np.nan, np.nan, np.nan, np.inf, np.inf, np.inf, np.inf, False, tuple(flags))

    popt, pcov, cost = best
    dof = max(len(x) - 3, 1)
    chi2 = cost / dof
    if have_sigma and chi2 > 1:
        pcov = pcov * chi2
    errs = np.sqrt(np.clip(np.diag(pcov), 0, None))
    if not np.all(np.isfinite(errs)):
        flags.append("singular_covariance")
        errs = np.where(np.isfinite(errs), errs, np.inf)
    return FitResult(float(popt[0]), float(popt[1]), float(popt[2]), float(errs[0]), float(errs[1]),
                     float(errs[2]), float(chi2), True, tuple(flags))


def fidelity_from_alpha(alpha: float, d: int) -> float:
    """Process fidelity ``(1 + (d^2 - 1) alpha) / d^2`` of a depolarizing decay."""
    return (1 + (d * d - 1) * alpha) / (d * d)


def alpha_from_fidelity(F: float, d: int) -> float:
    return (d * d * F - 1) / (d * d - 1)


def fit_pure_exponential(depths, means, sems=None) -> tuple[float, float, float, float]:
    """Fit ``A alpha**l`` (no offset); returns ``(A, alpha, A_err, alpha_err)``."""
    x = np.asarray(depths, dtype=float)
    y = np.asarray(means, dtype=float)
    sigma = None
    if sems is not None and np.any(np.asarray(sems) > 0):
        s = np.asarray(sems, dtype=float)
        sigma = np.maximum(s, max(SIGMA_FLOOR, 0.1 * s[s > 0].min()))
    pos = y > 0
    if pos.sum() >= 2:
        slope, icpt = np.polyfit(x[pos], np.log(y[pos]), 1)
        p0 = [min(max(np.exp(icpt), 1e-3), 1.0), min(max(np.exp(slope), 1e-3), 1.0)]
    else:
        p0 = [1.0, 0.5]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        popt, pcov = curve_fit(lambda l, a, al: a * al**l, x, y, p0=p0, sigma=sigma,
                               absolute_sigma=sigma is not None, bounds=([0, 1e-12], [1.5, 1.0]),
                               maxfev=20000)
    resid = (y - popt[0] * popt[1] ** x) / (sigma if sigma is not None else 1.0)
    chi2 = float(resid @ resid) / max(len(x) - 2, 1)
    if sigma is not None and chi2 > 1:
        pcov = pcov * chi2
    errs = np.sqrt(np.clip(np.diag(pcov), 0, None))
    return float(popt[0]), float(popt[1]), float(errs[0]), float(errs[1])
