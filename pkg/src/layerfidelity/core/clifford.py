"""Clifford tableaux on one and two qubits, and synthesis into native gates.

A tableau stores the conjugation images ``U P U^dagger`` of the generators
``X_0 .. X_{n-1}, Z_0 .. Z_{n-1}`` as signed :class:`PauliString` objects.
``a.compose(b)`` is "apply ``a``, then ``b``".

Native one-qubit gates are ``X90 = exp(-i pi/4 X)`` and virtual ``Rz``.
Each of the 24 single-qubit Cliffords compiles to ``Rz X90 Rz X90 Rz``
with the minimum number of ``X90`` pulses (0, 1 or 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gates import embed, rz, two_qubit_gate, x90
from .pauli import PauliString, pauli_basis

NativeOp = tuple  # ("x90", q) | ("rz", q, angle) | (gate_name, (a, b))


class CliffordError(ValueError):
    pass


@dataclass(frozen=True)
class CliffordTableau:
    n: int
    images: tuple[PauliString, ...]

    def __post_init__(self):
        if self.n not in (1, 2):
            raise CliffordError(f"tableaux supported for n in {{1, 2}}, got {self.n}")
        if len(self.images) != 2 * self.n:
            raise CliffordError("need one image per generator")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        xs = [PauliString.single(n, q, "X") for q in range(n)]
        zs = [PauliString.single(n, q, "Z") for q in range(n)]
        return cls(n, tuple(xs + zs))

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> "CliffordTableau":
        d = len(u)
        n = d.bit_length() - 1
        gens = cls.identity(n).images
        images = []
        for g in gens:
            m = u @ g.to_matrix() @ u.conj().T
            for p in pauli_basis(n):
                c = np.trace(p.to_matrix() @ m) / d
                if abs(c) > 0.5:
                    if abs(abs(c) - 1) > 1e-8 or abs(c.imag) > 1e-8:
                        raise CliffordError("unitary is not Clifford")
                    images.append(p if c.real > 0 else -p)
                    break
            else:
                raise CliffordError("unitary is not Clifford")
        return cls(n, tuple(images))

    @property
    def key(self) -> tuple:
        return tuple((p.x, p.z, p.k) for p in self.images)

    @property
    def symplectic_key(self) -> tuple:
        return tuple((p.x, p.z) for p in self.images)

    def apply(self, p: PauliString) -> PauliString:
        """Image ``U P U^dagger`` of an arbitrary Pauli string."""
        n = self.n
        out = PauliString(n, 0, 0, p.k + bin(p.x & p.z).count("1"))
        for q in range(n):
            if (p.x >> q) & 1:
                out = out * self.images[q]
            if (p.z >> q) & 1:
                out = out * self.images[n + q]
        return out

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        if other.n != self.n:
            raise CliffordError("qubit count mismatch")
        return CliffordTableau(self.n, tuple(other.apply(img) for img in self.images))

    def inverse(self) -> "CliffordTableau":
        table = {}
        for p in pauli_basis(self.n):
            img = self.apply(p)
            table[(img.x, img.z)] = (p, img.k)
        images = []
        for g in CliffordTableau.identity(self.n).images:
            p, k = table[(g.x, g.z)]
            images.append(p if k == 0 else -p)
        return CliffordTableau(self.n, tuple(images))

    def is_identity(self) -> bool:
        return self.key == CliffordTableau.identity(self.n).key

    def tensor(self, other: "CliffordTableau") -> "CliffordTableau":
        n = self.n + other.n
        if n > 2:
            raise CliffordError("tensor product exceeds two qubits")
        ident = PauliString.identity
        xs = [self.images[q].tensor(ident(other.n)) for q in range(self.n)]
        xs += [ident(self.n).tensor(other.images[q]) for q in range(other.n)]
        zs = [self.images[self.n + q].tensor(ident(other.n)) for q in range(self.n)]
        zs += [ident(self.n).tensor(other.images[other.n + q]) for q in range(other.n)]
        return CliffordTableau(n, tuple(xs + zs))


# -- single-qubit Clifford group -------------------------------------------

_QUARTER = (0.0, np.pi / 2, np.pi, -np.pi / 2)


@dataclass(frozen=True)
class OneQubitClifford:
    index: int
    ops: tuple  # time-ordered ("rz", angle) / ("x90",)
    unitary: np.ndarray
    tableau: CliffordTableau

    @property
    def x90_count(self) -> int:
        return sum(1 for op in self.ops if op[0] == "x90")


def _ops_unitary(ops) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for op in ops:
        u = (x90() if op[0] == "x90" else rz(op[1])) @ u
    return u


@lru_cache(maxsize=None)
def one_qubit_cliffords() -> tuple[OneQubitClifford, ...]:
    """The 24 single-qubit Cliffords, each with a minimal-X90 compilation."""
    candidates = [[("rz", a)] for a in _QUARTER]
    candidates += [[("rz", a), ("x90",), ("rz", b)] for a in _QUARTER for b in _QUARTER]
    candidates += [[("rz", a), ("x90",), ("x90",)] for a in _QUARTER]
    out: list[OneQubitClifford] = []
    seen = set()
    for ops in candidates:
        ops = tuple(op for op in ops if not (op[0] == "rz" and op[1] == 0.0))
        u = _ops_unitary(ops)
        t = CliffordTableau.from_unitary(u)
        if t.key in seen:
            continue
        seen.add(t.key)
        out.append(OneQubitClifford(len(out), ops, u, t))
    if len(out) != 24:
        raise RuntimeError("failed to enumerate the single-qubit Clifford group")
    return tuple(out)


@lru_cache(maxsize=None)
def _one_qubit_index() -> dict:
    return {c.tableau.key: c.index for c in one_qubit_cliffords()}


def one_qubit_index(t: CliffordTableau) -> int:
    return _one_qubit_index()[t.key]


@lru_cache(maxsize=None)
def one_qubit_tables() -> tuple[np.ndarray, np.ndarray]:
    """``(compose, inverse)`` lookup tables; ``compose[a, b]`` is "a then b"."""
    cl = one_qubit_cliffords()
    comp = np.zeros((24, 24), dtype=int)
    for a in cl:
        for b in cl:
            comp[a.index, b.index] = one_qubit_index(a.tableau.compose(b.tableau))
    inv = np.array([one_qubit_index(c.tableau.inverse()) for c in cl])
    comp.setflags(write=False)
    inv.setflags(write=False)
    return comp, inv


def compose_1q(a: int, b: int) -> int:
    return int(one_qubit_tables()[0][a, b])


def inverse_1q(a: int) -> int:
    return int(one_qubit_tables()[1][a])


@lru_cache(maxsize=None)
def pauli_1q_index(symbol: str) -> int:
    return one_qubit_index(CliffordTableau.from_unitary(PauliString.from_label(symbol).to_matrix()))


@lru_cache(maxsize=None)
def local_tableau(a: int, b: int) -> CliffordTableau:
    cl = one_qubit_cliffords()
    return cl[a].tableau.tensor(cl[b].tableau)


@lru_cache(maxsize=None)
def gate_tableau(name: str) -> CliffordTableau:
    return CliffordTableau.from_unitary(two_qubit_gate(name))


# -- two-qubit synthesis ---------------------------------------------------


@lru_cache(maxsize=None)
def _symplectic_table(gate: str) -> dict:
    """Minimal ``L (G L)^k`` words for each of the 720 symplectic classes.

    Words use one representative Clifford per single-qubit symplectic class
    (the one with fewest X90s); the sign frame is fixed afterwards by a
    Pauli folded into the final local layer. Ties at equal ``k`` keep the
    word with the fewest X90 pulses.
    """
    cl = one_qubit_cliffords()
    reps: dict = {}
    for c in cl:
        k = c.tableau.symplectic_key
        if k not in reps or c.x90_count < cl[reps[k]].x90_count:
            reps[k] = c.index
    locals_ = sorted(
        ((a, b) for a in reps.values() for b in reps.values()),
        key=lambda ab: cl[ab[0]].x90_count + cl[ab[1]].x90_count,
    )
    cost = {ab: cl[ab[0]].x90_count + cl[ab[1]].x90_count for ab in locals_}
    g = gate_tableau(gate)

    table: dict = {}
    frontier = {}
    for ab in locals_:
        t = local_tableau(*ab)
        key = t.symplectic_key
        if key not in table or cost[ab] < table[key][1]:
            table[key] = ((ab,), cost[ab])
            frontier[key] = (t, (ab,), cost[ab])
    while frontier:
        nxt: dict = {}
        for t, word, c in frontier.values():
            tg = t.compose(g)
            for ab in locals_:
                t2 = tg.compose(local_tableau(*ab))
                key = t2.symplectic_key
                if key in table:
                    continue
                c2 = c + cost[ab]
                if key not in nxt or c2 < nxt[key][2]:
                    nxt[key] = (t2, word + (ab,), c2)
        for key, (t2, word, c2) in nxt.items():
            table[key] = (word, c2)
        frontier = nxt
    if len(table) != 720:
        raise RuntimeError(f"expected 720 symplectic classes, found {len(table)}")
    return table


def _word_tableau(word, gate: str) -> CliffordTableau:
    t = local_tableau(*word[0])
    for ab in word[1:]:
        t = t.compose(gate_tableau(gate)).compose(local_tableau(*ab))
    return t


@lru_cache(maxsize=4096)
def synthesize_2q_word(key: tuple, gate: str) -> tuple:
    """Local-layer word ``((a0, b0), (a1, b1), ...)`` realising tableau ``key``.

    Consecutive local layers are separated by one native gate on (0, 1).
    """
    target = CliffordTableau(2, tuple(PauliString(2, x, z, k) for x, z, k in key))
    word, _ = _symplectic_table(gate)[target.symplectic_key]
    frame = _word_tableau(word, gate).inverse().compose(target)
    # frame is a Pauli conjugation: sign of X_q image <-> Z_q component
    fix = []
    for q in range(2):
        zq = frame.images[q].k == 2
        xq = frame.images[2 + q].k == 2
        fix.append({(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(xq, zq)])
    a, b = word[-1]
    last = (compose_1q(a, pauli_1q_index(fix[0])), compose_1q(b, pauli_1q_index(fix[1])))
    return word[:-1] + (last,)


def clifford_to_native(tableau: CliffordTableau, gate: str = "cx", qubits=None) -> list[NativeOp]:
    """Native gate sequence equal to ``tableau`` up to global phase.

    One qubit: minimal-X90 ``Rz``/``X90`` form. Two qubits: at most three
    native gates interleaved with single-qubit layers.
    """
    if qubits is None:
        qubits = tuple(range(tableau.n))
    if tableau.n == 1:
        return compile_1q(one_qubit_index(tableau), qubits[0])
    if tableau.n != 2:
        raise CliffordError("unsupported qubit count")
    word = synthesize_2q_word(tableau.key, gate)
    ops: list[NativeOp] = []
    for i, (a, b) in enumerate(word):
        if i:
            ops.append((gate, (qubits[0], qubits[1])))
        ops += compile_1q(a, qubits[0])
        ops += compile_1q(b, qubits[1])
    return ops


def compile_1q(index: int, qubit: int) -> list[NativeOp]:
    out = []
    for op in one_qubit_cliffords()[index].ops:
        out.append(("x90", qubit) if op[0] == "x90" else ("rz", qubit, op[1]))
    return out


def native_unitary(ops, n: int) -> np.ndarray:
    """Dense ideal unitary of a native sequence (oracle for tests)."""
    u = np.eye(2**n, dtype=complex)
    for op in ops:
        if op[0] == "x90":
            g = embed(x90(), [op[1]], n)
        elif op[0] == "rz":
            g = embed(rz(op[2]), [op[1]], n)
        else:
            g = embed(two_qubit_gate(op[0]), list(op[1]), n)
        u = g @ u
    return u
