"""Predicted layer fidelity of chains and the beam search for good chains."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..noise.channels import incoherent_layer_error
from .decompose import Chain, DisjointDecomposition
from .device import DeviceModel

DEFAULT_BEAM_WIDTH = 64


def idle_fidelity(device: DeviceModel, q: int, duration: float) -> float:
    """Decoherence-only process fidelity of qubit ``q`` idling for ``duration`` seconds."""
    p = device.qubit(q)
    return 1.0 - incoherent_layer_error([p.T1], [p.T2], duration)


def predicted_element_fidelities(decomp: DisjointDecomposition, device: DeviceModel) -> list[dict]:
    """Per class: ``{pair: 1 - isolated error}`` plus ``{(q,): idle fidelity}``.

    Idle qubits decay for the class duration, i.e. its longest gate.
    """
    out = []
    for m, cls in enumerate(decomp.classes):
        table: dict = {}
        t = max(device.edge(*e).duration for e in cls)
        for e in cls:
            table[tuple(e)] = device.edge(*e).fidelity
        for q in decomp.idle(m):
            table[(q,)] = idle_fidelity(device, q, t)
        out.append(table)
    return out


def predicted_layer_fidelity(decomp: DisjointDecomposition, device: DeviceModel) -> float:
    return math.prod(f for table in predicted_element_fidelities(decomp, device) for f in table.values())


def predicted_lf(chain: Chain, device: DeviceModel) -> float:
    """Product of ``1 - isolated error`` over the chain's gates and idle-decay factors.

    The idle factors come from the even/odd split: qubits left out of a
    sub-layer idle for that sub-layer's longest gate.
    """
    chain.validate(device)
    return predicted_layer_fidelity(chain.decomposition(), device)


# -- beam search ---------------------------------------------------------------


@dataclass(frozen=True)
class _Partial:
    qubits: tuple[int, ...]
    log_edges: float
    even_max: float
    odd_max: float

    def log_lf(self, device: DeviceModel) -> float:
        """Log predicted LF; idle qubits of a chain are only ever its end points."""
        qs = self.qubits
        n = len(qs)
        total = self.log_edges
        if n < 2:
            return total
        if n % 2:  # last qubit idles in the even class
            total += math.log(idle_fidelity(device, qs[-1], self.even_max))
        if n >= 3:
            total += math.log(idle_fidelity(device, qs[0], self.odd_max))
            if n % 2 == 0:
                total += math.log(idle_fidelity(device, qs[-1], self.odd_max))
        return total

    def extend(self, q: int, device: DeviceModel) -> "_Partial":
        e = device.edge(self.qubits[-1], q)
        k = len(self.qubits) - 1  # index of the new edge
        even_max, odd_max = self.even_max, self.odd_max
        if k % 2 == 0:
            even_max = max(even_max, e.duration)
        else:
            odd_max = max(odd_max, e.duration)
        return _Partial(self.qubits + (q,), self.log_edges + math.log(e.fidelity), even_max, odd_max)


@dataclass(frozen=True)
class CandidateChain:
    chain: Chain
    predicted_lf: float
    overlap: int  # qubits shared with earlier candidates
    complete: bool  # False when no path reached the requested length

    def to_dict(self) -> dict:
        return {"qubits": list(self.chain.qubits), "predicted_lf": self.predicted_lf,
                "overlap": self.overlap, "complete": self.complete}


def _beam(device: DeviceModel, n_max: int, taken: frozenset, exclude: set, width: int):
    def key(p: _Partial):
        return (len(taken.intersection(p.qubits)), -p.log_lf(device), p.qubits)

    beam = [_Partial((q,), 0.0, 0.0, 0.0) for q in device.indices]
    best_full = None
    longest = min(beam, key=key) if beam else None
    for _ in range(n_max - 1):
        grown: dict = {}
        for p in beam:
            for q in device.neighbors(p.qubits[-1]):
                if q in p.qubits:
                    continue
                c = p.extend(q, device)
                k = (q, frozenset(c.qubits))
                if k not in grown or key(c) < key(grown[k]):
                    grown[k] = c
        if not grown:
            break
        ranked = sorted(grown.values(), key=key)
        beam = ranked[:width]
        allowed = [p for p in ranked if p.qubits not in exclude]
        if allowed:
            longest = allowed[0]
    if longest is not None and len(longest.qubits) == n_max:
        best_full = longest
    return best_full, longest


def find_candidate_chains(device: DeviceModel, n_max: int, k: int = 3,
                          beam_width: int = DEFAULT_BEAM_WIDTH) -> list[CandidateChain]:
    """Up to ``k`` chains of ``n_max`` qubits with high predicted LF.

    The first maximises predicted LF. Each later chain first minimises the
    number of qubits shared with the chains already chosen, then maximises
    predicted LF. Chains are oriented with the lower-labelled end first.
    When no simple path of ``n_max`` qubits is found the longest path found
    is returned with ``complete = False``.
    """
    if n_max < 2:
        raise ValueError("chains need at least two qubits")
    if k < 1:
        raise ValueError("k must be positive")
    out: list[CandidateChain] = []
    taken: frozenset = frozenset()
    exclude: set = set()
    for _ in range(k):
        full, longest = _beam(device, n_max, taken, exclude, beam_width)
        pick = full or longest
        if pick is None or len(pick.qubits) < 2:
            break
        # a path and its reverse share one predicted LF; report the lower-labelled end first
        chain = Chain(pick.qubits if pick.qubits[0] < pick.qubits[-1] else pick.qubits[::-1])
        out.append(CandidateChain(chain, math.exp(pick.log_lf(device)),
                                  len(taken.intersection(pick.qubits)), full is not None))
        taken = taken | frozenset(pick.qubits)
        exclude |= {pick.qubits, pick.qubits[::-1]}
    return out
