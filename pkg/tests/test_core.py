import itertools

import numpy as np
import pytest

from conftest import random_unitary
from layerfidelity.core import (
    PTM,
    ChannelError,
    CliffordError,
    CliffordTableau,
    DensityMatrix,
    PauliString,
    QuantumChannel,
    clifford_to_native,
    compile_1q,
    compose_1q,
    embed,
    equal_up_to_phase,
    fidelity_conversions,
    fidelity_product_disjoint,
    gate_error_from_process_error,
    gate_tableau,
    inverse_1q,
    is_unitary,
    native_unitary,
    one_qubit_cliffords,
    pauli_basis,
    pauli_labels,
    pauli_matrices,
    process_error_from_gate_error,
    process_fidelity,
    ptm_from_channel,
    symplectic_sign_matrix,
    two_qubit_gate,
    unitary_process_fidelity,
    x90,
)
from layerfidelity.core.clifford import _symplectic_table

SINGLE = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]),
          "Z": np.diag([1, -1])}


def dense_pauli(label):
    out = np.eye(1)
    for c in label:
        out = np.kron(out, SINGLE[c])
    return out


# -- Pauli strings -----------------------------------------------------------------


def test_pauli_labels_and_basis_order():
    assert pauli_labels(1) == ["I", "X", "Y", "Z"]
    assert len(pauli_basis(2)) == 16
    assert pauli_basis(2)[0].labels == "II"


def test_pauli_matrices_match_kronecker_products():
    mats = pauli_matrices(2)
    for lab, m in zip(pauli_labels(2), mats):
        assert np.allclose(m, dense_pauli(lab))


def test_pauli_product_phase_against_dense_product():
    for a, b in itertools.product(pauli_labels(2), repeat=2):
        pa, pb = PauliString.from_label(a), PauliString.from_label(b)
        assert np.allclose((pa * pb).to_matrix(), dense_pauli(a) @ dense_pauli(b))


def test_commutation_matches_dense():
    for a, b in itertools.product(pauli_labels(2), repeat=2):
        ma, mb = dense_pauli(a), dense_pauli(b)
        dense = np.allclose(ma @ mb, mb @ ma)
        assert PauliString.from_label(a).commutes(PauliString.from_label(b)) == dense


def test_symplectic_sign_matrix_is_commutation_sign():
    s = symplectic_sign_matrix(2)
    labels = pauli_labels(2)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            ma, mb = dense_pauli(a), dense_pauli(b)
            assert s[i, j] == (1 if np.allclose(ma @ mb, mb @ ma) else -1)


def test_pauli_weight_support_and_restrict():
    p = PauliString.from_label("XIZ")
    assert p.weight == 2
    assert p.support == (0, 2)
    assert p.restrict([2]).labels == "Z"
    assert p.replace([1], PauliString.from_label("Y")).labels == "XYZ"


def test_bad_pauli_label():
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


# -- gates --------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cx", "cz", "ecr"])
def test_native_gates_are_unitary(name):
    assert is_unitary(two_qubit_gate(name))


def test_cx_matrix():
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert equal_up_to_phase(two_qubit_gate("cx"), cx)


def test_ecr_is_zx_quarter_turn():
    zx = np.kron(SINGLE["Z"], SINGLE["X"])
    u = (np.eye(4) - 1j * zx) / np.sqrt(2)
    assert equal_up_to_phase(two_qubit_gate("ecr"), u)


def test_x90_squares_to_x():
    assert equal_up_to_phase(x90() @ x90(), SINGLE["X"])


def test_embed_orders_targets():
    cx10 = embed(two_qubit_gate("cx"), [1, 0], 2)
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(cx10, swap @ two_qubit_gate("cx") @ swap)


# -- Cliffords ----------------------------------------------------------------------


def test_24_single_qubit_cliffords_distinct_and_compiled():
    cl = one_qubit_cliffords()
    assert len(cl) == 24
    for c in cl:
        u = native_unitary(compile_1q(c.index, 0), 1)
        assert equal_up_to_phase(u, c.unitary)
        assert c.x90_count <= 2
    # no two elements agree up to phase
    for a, b in itertools.combinations(cl, 2):
        assert not equal_up_to_phase(a.unitary, b.unitary)


def test_x90_count_distribution():
    # 4 Rz-only, 16 with one X90, 4 with two X90
    counts = np.bincount([c.x90_count for c in one_qubit_cliffords()])
    assert counts.tolist() == [4, 16, 4]


def test_compose_and_inverse_tables():
    cl = one_qubit_cliffords()
    for a in range(24):
        assert cl[compose_1q(a, inverse_1q(a))].tableau.is_identity()
        for b in (0, 5, 17):
            ab = cl[compose_1q(a, b)].unitary
            assert equal_up_to_phase(ab, cl[b].unitary @ cl[a].unitary)


def test_two_qubit_symplectic_classes_complete():
    # |Sp(4, 2)| = 720
    assert len(_symplectic_table("cx")) == 720


def random_clifford_unitary(rng, gate="cx", layers=4):
    cl = one_qubit_cliffords()
    u = np.eye(4, dtype=complex)
    for _ in range(layers):
        a, b = rng.integers(24, size=2)
        u = np.kron(cl[a].unitary, cl[b].unitary) @ u
        if rng.random() < 0.7:
            u = two_qubit_gate(gate) @ u
    return u


@pytest.mark.parametrize("gate", ["cx", "cz", "ecr"])
def test_two_qubit_synthesis_reproduces_unitary(gate, rng):
    for _ in range(40):
        u = random_clifford_unitary(rng, gate)
        t = CliffordTableau.from_unitary(u)
        ops = clifford_to_native(t, gate)
        assert sum(1 for op in ops if op[0] == gate) <= 3
        assert equal_up_to_phase(native_unitary(ops, 2), u)


def test_tableau_inverse_and_compose(rng):
    for _ in range(20):
        u = random_clifford_unitary(rng)
        t = CliffordTableau.from_unitary(u)
        assert t.compose(t.inverse()).is_identity()
        v = random_clifford_unitary(rng)
        tv = CliffordTableau.from_unitary(v)
        assert t.compose(tv).key == CliffordTableau.from_unitary(v @ u).key


def test_tableau_rejects_non_clifford():
    t_gate = np.diag([1, np.exp(1j * np.pi / 4)])
    with pytest.raises(CliffordError):
        CliffordTableau.from_unitary(t_gate)


def test_gate_tableau_cx_images():
    t = gate_tableau("cx")
    assert [p.labels for p in t.images] == ["XX", "IX", "ZI", "ZZ"]


# -- channels -------------------------------------------------------------------------


def test_depolarizing_ptm_diagonal():
    ch = QuantumChannel.depolarizing(2, 0.9)
    f = np.diag(ch.ptm_matrix())
    assert f[0] == pytest.approx(1)
    assert np.allclose(f[1:], 0.9)


def test_pauli_channel_representations_agree(rng):
    p = rng.dirichlet(np.ones(4))
    ch = QuantumChannel.from_pauli_probs(1, dict(zip("IXYZ", p)))
    kraus = QuantumChannel.from_kraus([np.sqrt(pi) * SINGLE[c] for c, pi in zip("IXYZ", p)])
    assert np.allclose(ch.ptm_matrix(), kraus.ptm_matrix())
    assert np.allclose(kraus.pauli_probabilities(), p)


def test_unitary_channel_ptm_is_orthogonal(rng):
    u = random_unitary(4, rng)
    r = ptm_from_channel(QuantumChannel.from_unitary(u)).matrix
    assert np.allclose(r @ r.T, np.eye(16), atol=1e-10)


def test_channel_apply_and_compose(rng):
    u, v = random_unitary(2, rng), random_unitary(2, rng)
    rho = DensityMatrix.zero(1).data
    ch = QuantumChannel.from_unitary(u).compose(QuantumChannel.from_unitary(v))
    assert np.allclose(ch.apply(rho), v @ u @ rho @ u.conj().T @ v.conj().T)


def test_trace_preservation_and_cp():
    ad = [np.array([[1, 0], [0, np.sqrt(0.7)]]), np.array([[0, np.sqrt(0.3)], [0, 0]])]
    ch = QuantumChannel.from_kraus(ad)
    assert ch.is_trace_preserving() and ch.is_cp()
    bad = QuantumChannel.from_kraus([0.5 * np.eye(2)])
    assert not bad.is_trace_preserving()
    with pytest.raises(ChannelError):
        ptm_from_channel(bad)


def test_channel_needs_one_representation():
    with pytest.raises(ChannelError):
        QuantumChannel(1)


def test_density_matrix_validation():
    DensityMatrix.zero(2).validate()
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.5, 0.6])).validate()


# -- fidelity -------------------------------------------------------------------------


def test_process_fidelity_of_depolarizing():
    ideal = PTM(np.eye(16))
    exp = ptm_from_channel(QuantumChannel.depolarizing(2, 0.9))
    assert process_fidelity(exp, ideal) == pytest.approx((1 + 15 * 0.9) / 16)


def test_unitary_process_fidelity_against_ptm(rng):
    u, v = random_unitary(2, rng), random_unitary(2, rng)
    ru = ptm_from_channel(QuantumChannel.from_unitary(u))
    rv = ptm_from_channel(QuantumChannel.from_unitary(v))
    assert unitary_process_fidelity(u, v) == pytest.approx(process_fidelity(ru, rv), abs=1e-10)


def test_fidelity_conversions():
    c = fidelity_conversions(0.99, 4)
    assert c.F_g == pytest.approx(0.992)
    assert c.eps_p == pytest.approx(0.01)
    assert process_error_from_gate_error(gate_error_from_process_error(0.01, 4), 4) == pytest.approx(0.01)
    with pytest.raises(ValueError):
        fidelity_conversions(0.9, 3)


def test_fidelity_product_disjoint_is_exact_for_tensor_products():
    a = QuantumChannel.depolarizing(1, 0.8)
    b = QuantumChannel.depolarizing(1, 0.6)
    fa, fb = (1 + 3 * 0.8) / 4, (1 + 3 * 0.6) / 4
    f_ab = process_fidelity(ptm_from_channel(a.tensor(b)), PTM(np.eye(16)))
    assert f_ab == pytest.approx(fidelity_product_disjoint([fa, fb]))
