"""Chains and their split into disjoint sub-layers (edge colourings)."""

from __future__ import annotations

from dataclasses import dataclass

from ..circuits.layer import LayerSpec
from .device import DeviceError, DeviceModel, duration_units

_GATE_NAMES = {"CX": "cx", "CZ": "cz", "ECR": "ecr"}


def _pair(e) -> tuple[int, int]:
    a, b = int(e[0]), int(e[1])
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class DisjointDecomposition:
    """Edge classes that can each run simultaneously, over ``qubits``."""

    qubits: tuple[int, ...]
    classes: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "classes", tuple(tuple(tuple(int(q) for q in e) for e in c)
                                                  for c in self.classes))
        qs = set(self.qubits)
        seen = set()
        for i, c in enumerate(self.classes):
            if not c:
                raise ValueError(f"class {i} is empty")
            used = [q for e in c for q in e]
            if len(set(used)) != len(used):
                raise ValueError(f"class {i} is not a matching")
            if not set(used) <= qs:
                raise ValueError(f"class {i} touches qubits outside the set")
            for e in c:
                if _pair(e) in seen:
                    raise ValueError(f"edge {e} in two classes")
                seen.add(_pair(e))

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for c in self.classes for e in c)

    def idle(self, m: int) -> tuple[int, ...]:
        busy = {q for e in self.classes[m] for q in e}
        return tuple(q for q in self.qubits if q not in busy)

    def to_layer_spec(self, device: DeviceModel | None = None, unit_time: float = 50e-9,
                      gate: str = "cx") -> LayerSpec:
        """Layer spec with gate types and durations (in unit slices) taken from ``device``."""
        if device is None:
            return LayerSpec(self.qubits, self.classes, gate=gate)
        units = duration_units(device, unit_time)
        types = {_pair(e): _GATE_NAMES[device.edge(*e).gate] for e in self.edges}
        durs = {_pair(e): units[_pair(e)] for e in self.edges}
        return LayerSpec(self.qubits, self.classes, gate=gate, gate_types=types, durations=durs)

    def to_dict(self) -> dict:
        return {"qubits": list(self.qubits),
                "classes": [[list(e) for e in c] for c in self.classes],
                "idle": [list(self.idle(m)) for m in range(self.n_classes)]}


@dataclass(frozen=True)
class Chain:
    """A simple path of qubits; the even class starts at the first qubit."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) < 2:
            raise ValueError("a chain needs at least two qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("a chain may not repeat qubits")

    def __len__(self) -> int:
        return len(self.qubits)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.qubits, self.qubits[1:]))

    @property
    def even(self) -> tuple[tuple[int, int], ...]:
        return self.edges[0::2]

    @property
    def odd(self) -> tuple[tuple[int, int], ...]:
        return self.edges[1::2]

    def validate(self, device: DeviceModel) -> None:
        for a, b in self.edges:
            if not device.has_edge(a, b):
                raise DeviceError(f"chain step {a}-{b} is not a device edge")

    def decomposition(self) -> DisjointDecomposition:
        classes = tuple(c for c in (self.even, self.odd) if c)
        return DisjointDecomposition(self.qubits, classes)

    def to_dict(self) -> dict:
        return {"qubits": list(self.qubits), "even": [list(e) for e in self.even],
                "odd": [list(e) for e in self.odd]}


def _path_order(edges) -> tuple[int, ...] | None:
    """Qubit order if ``edges`` form one simple path, else ``None``."""
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) > 2 for v in adj.values()):
        return None
    ends = sorted(q for q, v in adj.items() if len(v) == 1)
    if len(ends) != 2:
        return None
    order, prev = [ends[0]], None
    while len(order) < len(adj):
        nxt = [q for q in adj[order[-1]] if q != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return tuple(order) if len(order) == len(adj) and len(edges) == len(adj) - 1 else None


def _misra_gries(edges) -> list[list[tuple[int, int]]]:
    """Proper edge colouring with at most ``max degree + 1`` colours."""
    deg: dict = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    n_colors = max(deg.values(), default=0) + 1
    color: dict = {}  # sorted pair -> colour
    at: dict = {q: {} for q in deg}  # vertex -> {colour: neighbour}

    def free(v, c):
        return c not in at[v]

    def first_free(v):
        return next(c for c in range(n_colors) if free(v, c))

    def set_color(u, v, c):
        old = color.get(_pair((u, v)))
        if old is not None:
            del at[u][old]
            del at[v][old]
        color[_pair((u, v))] = c
        at[u][c] = v
        at[v][c] = u

    def unset(u, v):
        c = color.pop(_pair((u, v)))
        del at[u][c]
        del at[v][c]

    for u, v in sorted(_pair(e) for e in edges):
        # maximal fan of u starting at v
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            nxt = None
            for c, w in sorted(at[u].items()):
                if w not in in_fan and free(last, c):
                    nxt = w
                    break
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)
        c = first_free(u)
        d = first_free(fan[-1])
        if not free(u, d):
            # invert the cd-path starting at u
            path, x, col = [], u, d
            while col in at[x]:
                y = at[x][col]
                path.append((x, y, col))
                x = y
                col = c if col == d else d
            for x, y, col in path:
                unset(x, y)
            for x, y, col in path:
                set_color(x, y, c if col == d else d)
        # shorten the fan to the first member where d is free
        def is_fan(i):
            for j in range(1, i + 1):
                cj = color.get(_pair((u, fan[j])))
                if cj is None or not free(fan[j - 1], cj):
                    return False
            return True

        w_idx = next(i for i, w in enumerate(fan) if free(w, d) and is_fan(i))
        for j in range(w_idx):
            cj = color[_pair((u, fan[j + 1]))]
            unset(u, fan[j + 1])
            set_color(u, fan[j], cj)
        set_color(u, fan[w_idx], d)

    classes: list[list[tuple[int, int]]] = [[] for _ in range(n_colors)]
    for e, c in sorted(color.items()):
        classes[c].append(e)
    return [c for c in classes if c]


def _split(classes: list[list], n_classes: int) -> list[list]:
    """Split the largest class (earliest on ties) in alternating halves until there are ``n_classes``."""
    classes = [list(c) for c in classes]
    while len(classes) < n_classes:
        i = max(range(len(classes)), key=lambda k: (len(classes[k]), -k))
        c = classes[i]
        classes[i:i + 1] = [c[0::2], c[1::2]]
    return classes


def decompose_disjoint(edges, n_classes: int | None = None, qubits=None) -> DisjointDecomposition:
    """Split a gate set into simultaneously executable classes.

    A simple path gets the even/odd split starting from its lower-labelled
    end; any other graph gets a colouring with at most ``max degree + 1``
    classes. ``n_classes`` forces a sparser split by repeatedly halving
    the largest class.
    """
    edges = [tuple(int(q) for q in e) for e in edges]
    if not edges:
        raise ValueError("no edges to decompose")
    if len({_pair(e) for e in edges}) != len(edges):
        raise ValueError("duplicate edge")
    if any(a == b for a, b in edges):
        raise ValueError("self-loop")
    touched = sorted({q for e in edges for q in e})
    qubits = tuple(qubits) if qubits is not None else tuple(touched)
    order = _path_order([_pair(e) for e in edges])
    if order is not None:
        chain = Chain(order)
        oriented = {_pair(e): e for e in edges}
        classes = [[oriented[_pair(e)] for e in c] for c in (chain.even, chain.odd) if c]
    else:
        oriented = {_pair(e): e for e in edges}
        classes = [[oriented[e] for e in c] for c in _misra_gries(edges)]
    if n_classes is not None:
        if n_classes > len(edges):
            raise ValueError(f"cannot split {len(edges)} edges into {n_classes} non-empty classes")
        if n_classes < len(classes):
            raise ValueError(f"{n_classes} classes requested but the colouring needs {len(classes)}")
        classes = _split(classes, n_classes)
    return DisjointDecomposition(qubits, tuple(tuple(c) for c in classes))
