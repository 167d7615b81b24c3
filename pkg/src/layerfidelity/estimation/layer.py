"""Layer fidelity, EPLG, sub-chain tables and gamma estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence


class CompletenessError(ValueError):
    """A sub-layer is missing the fidelity of one of its gated pairs or idle qubits."""


def _key(unit) -> tuple[int, ...]:
    return tuple(sorted(int(q) for q in unit))


@dataclass(frozen=True)
class LayerFidelity:
    per_sublayer: tuple[float, ...]
    LF: float


def layer_fidelity(elements: Sequence[Mapping], spec=None) -> LayerFidelity:
    """``LF_m = prod_j F_jm`` and ``LF = prod_m LF_m``.

    ``elements[m]`` maps each unit (pair or 1-tuple idle qubit) to its
    process fidelity. With a ``spec`` every pair and idle qubit of every
    sub-layer must be present.
    """
    if spec is not None:
        if len(elements) != spec.n_sublayers:
            raise CompletenessError("one fidelity table per sub-layer is required")
        for m, table in enumerate(elements):
            have = {_key(u) for u in table}
            for u in spec.units(m):
                if _key(u) not in have:
                    kind = "pair" if len(u) == 2 else "idle qubit"
                    raise CompletenessError(f"sub-layer {m} lacks the fidelity of {kind} {u}")
    per = []
    for table in elements:
        lf_m = 1.0
        for u, f in table.items():
            if not 0 < f <= 1 + 1e-12:
                raise ValueError(f"fidelity {f} of {u} outside (0, 1]")
            lf_m *= f
        per.append(lf_m)
    return LayerFidelity(tuple(per), math.prod(per))


def eplg(LF: float, n_2q: int) -> float:
    """Error per layered gate ``1 - LF**(1/n_2q)``."""
    if not 0 < LF <= 1:
        raise ValueError("LF must lie in (0, 1]")
    if n_2q < 1:
        raise ValueError("n_2q must be positive")
    return 1.0 - LF ** (1.0 / n_2q)


# -- sub-chains ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainFidelities:
    """Element fidelities along a linear chain.

    ``edge`` is keyed by sorted qubit pair; ``idle`` holds, per qubit, the
    product of its idle fidelities over the sub-layers where it is idle.
    """

    qubits: tuple[int, ...]
    edge: dict
    idle: dict = field(default_factory=dict)
    edge_err: dict = field(default_factory=dict)
    idle_err: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "edge", {_key(k): float(v) for k, v in self.edge.items()})
        object.__setattr__(self, "idle", {int(k): float(v) for k, v in self.idle.items()})
        object.__setattr__(self, "edge_err", {_key(k): float(v) for k, v in self.edge_err.items()})
        object.__setattr__(self, "idle_err", {int(k): float(v) for k, v in self.idle_err.items()})
        for i in range(len(self.qubits) - 1):
            if _key(self.qubits[i:i + 2]) not in self.edge:
                raise ValueError(f"missing fidelity for edge {self.qubits[i:i + 2]}")

    def window_lf(self, start: int, N: int) -> float:
        """LF of ``qubits[start:start+N]``; gates straddling the boundary count as ``F**0.5``."""
        qs = self.qubits
        inside = set(qs[start:start + N])
        lf = 1.0
        for i in range(len(qs) - 1):
            a, b = qs[i], qs[i + 1]
            n_in = (a in inside) + (b in inside)
            if n_in == 2:
                lf *= self.edge[_key((a, b))]
            elif n_in == 1:
                lf *= math.sqrt(self.edge[_key((a, b))])
        for q in inside:
            lf *= self.idle.get(q, 1.0)
        return lf

    def window_lf_err(self, start: int, N: int) -> float:
        """First-order uncertainty of :meth:`window_lf` from ``edge_err`` and ``idle_err``."""
        qs = self.qubits
        inside = set(qs[start:start + N])
        rel2 = 0.0
        for i in range(len(qs) - 1):
            k = _key((qs[i], qs[i + 1]))
            n_in = (qs[i] in inside) + (qs[i + 1] in inside)
            if n_in:
                rel2 += (0.5 * n_in * self.edge_err.get(k, 0.0) / self.edge[k]) ** 2
        for q in inside:
            if q in self.idle:
                rel2 += (self.idle_err.get(q, 0.0) / self.idle[q]) ** 2
        return self.window_lf(start, N) * math.sqrt(rel2)


@dataclass(frozen=True)
class SubchainResult:
    N: int
    LF: float
    EPLG: float
    start: int
    qubits: tuple[int, ...]
    table: tuple[float, ...]  # LF of every window, by start index


def best_subchain_lf(chain: ChainFidelities, N: int) -> SubchainResult:
    """Best window of ``N`` contiguous qubits; ties go to the lowest start index.

    ``n_2q = N - 1`` for the EPLG.
    """
    if N < 2:
        raise ValueError("sub-chains need at least two qubits")
    if N > len(chain.qubits):
        raise ValueError("window longer than the chain")
    table = tuple(chain.window_lf(s, N) for s in range(len(chain.qubits) - N + 1))
    best = max(range(len(table)), key=lambda s: (table[s], -s))
    lf = table[best]
    return SubchainResult(N, lf, eplg(lf, N - 1), best, chain.qubits[best:best + N], table)


def subchain_table(chain: ChainFidelities, Ns=None) -> list[SubchainResult]:
    Ns = Ns if Ns is not None else range(2, len(chain.qubits) + 1)
    return [best_subchain_lf(chain, N) for N in Ns]


def merge_subchain_tables(tables: Sequence[Sequence[SubchainResult]]) -> list[SubchainResult]:
    """Keep the largest LF per ``N`` across chains; earlier tables win ties."""
    best: dict = {}
    for rows in tables:
        for r in rows:
            if r.N not in best or r.LF > best[r.N].LF:
                best[r.N] = r
    return [best[n] for n in sorted(best)]


# -- gamma ---------------------------------------------------------------------


def gamma_from_lf(LF: float) -> float:
    """``1 / LF**2``, valid when every decay parameter is close to 1."""
    if not 0 < LF <= 1:
        raise ValueError("LF must lie in (0, 1]")
    return 1.0 / LF**2


def gamma_depth1(EPLG: float, N_gamma: int) -> tuple[float, float]:
    """``((1 - EPLG)**-N_gamma, (1 - EPLG)**-2)`` for a depth-one layer of ``N_gamma`` qubits."""
    if N_gamma % 2:
        raise ValueError("N_gamma must be even")
    if not 0 <= EPLG < 1:
        raise ValueError("EPLG must lie in [0, 1)")
    return (1 - EPLG) ** -N_gamma, (1 - EPLG) ** -2


def gamma_exact_depolarizing(F_list) -> float:
    """``prod_i alpha_i**(-15/8)`` from two-qubit process fidelities."""
    out = 1.0
    for f in F_list:
        a = (16 * f - 1) / 15
        if not 0 < a <= 1 + 1e-12:
            raise ValueError(f"fidelity {f} gives depolarizing parameter {a} outside (0, 1]")
        out *= min(a, 1.0) ** (-15 / 8)
    return out
