"""Result containers and their JSON / CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .fit import DecayCurve, FitResult, fidelity_from_alpha
from .layer import SubchainResult, eplg, gamma_from_lf, layer_fidelity


@dataclass(frozen=True)
class ElementResult:
    unit: tuple[int, ...]
    sublayer: int | None
    curve: DecayCurve
    fit: FitResult

    @property
    def d(self) -> int:
        return 2 ** len(self.unit)

    @property
    def fidelity(self) -> float:
        return fidelity_from_alpha(self.fit.alpha, self.d)

    @property
    def fidelity_err(self) -> float:
        d2 = self.d**2
        return (d2 - 1) / d2 * self.fit.alpha_err

    @property
    def error(self) -> float:
        return 1 - self.fidelity

    @property
    def usable(self) -> bool:
        return self.fit.converged and math.isfinite(self.fit.alpha)

    def to_dict(self) -> dict:
        return {"unit": list(self.unit), "sublayer": self.sublayer, "d": self.d,
                "fidelity": self.fidelity, "fidelity_err": self.fidelity_err,
                "fit": self.fit.to_dict(), "curve": self.curve.to_dict()}


@dataclass(frozen=True)
class LayerFidelityResult:
    elements: tuple[tuple[ElementResult, ...], ...]  # by sub-layer, in unit order
    n_2q: int
    subchains: tuple[SubchainResult, ...] = ()
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def element_fidelities(self) -> list[dict]:
        return [{e.unit: e.fidelity for e in sub if e.usable} for sub in self.elements]

    @property
    def per_sublayer(self) -> tuple[float, ...]:
        return layer_fidelity(self.element_fidelities).per_sublayer

    @property
    def LF(self) -> float:
        return layer_fidelity(self.element_fidelities).LF

    @property
    def LF_err(self) -> float:
        """First-order propagation of the per-element fidelity errors."""
        rel2 = sum((e.fidelity_err / e.fidelity) ** 2 for sub in self.elements for e in sub if e.usable)
        return self.LF * math.sqrt(rel2)

    @property
    def EPLG(self) -> float:
        return eplg(self.LF, self.n_2q)

    @property
    def gamma(self) -> float:
        return gamma_from_lf(self.LF)

    def to_dict(self) -> dict:
        return {
            "LF": self.LF,
            "LF_err": self.LF_err,
            "LF_per_sublayer": list(self.per_sublayer),
            "n_2q": self.n_2q,
            "EPLG": self.EPLG,
            "gamma": self.gamma,
            "elements": [[e.to_dict() for e in sub] for sub in self.elements],
            "subchains": [
                {"N": s.N, "LF": s.LF, "EPLG": s.EPLG, "start": s.start, "qubits": list(s.qubits)}
                for s in self.subchains
            ],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def subchain_csv(rows) -> str:
    """``N, LF, EPLG, start, qubits`` per row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "LF", "EPLG", "start", "qubits"])
    for r in rows:
        w.writerow([r.N, repr(r.LF), repr(r.EPLG), r.start, " ".join(map(str, r.qubits))])
    return buf.getvalue()
