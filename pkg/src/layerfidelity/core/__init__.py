from .channels import PTM, ChannelError, DensityMatrix, QuantumChannel, ptm_from_channel
from .clifford import (
    CliffordError,
    CliffordTableau,
    clifford_to_native,
    compile_1q,
    compose_1q,
    gate_tableau,
    inverse_1q,
    local_tableau,
    native_unitary,
    one_qubit_cliffords,
    pauli_1q_index,
    synthesize_2q_word,
)
from .fidelity import (
    fidelity_conversions,
    fidelity_product_disjoint,
    gate_error_from_process_error,
    process_error_from_gate_error,
    process_fidelity,
    unitary_process_fidelity,
)
from .gates import TWO_QUBIT_GATES, embed, equal_up_to_phase, is_unitary, rz, two_qubit_gate, x90
from .pauli import PauliString, pauli_basis, pauli_labels, pauli_matrices, symplectic_sign_matrix
