from .engine import (
    MAX_CLUSTER_QUBITS,
    MAX_SUPEROPERATOR_QUBITS,
    SimOutcome,
    SimulationError,
    Simulator,
    find_clusters,
    marginal_distribution,
    sample,
    superoperator,
    superoperator_fidelity,
    unit_survival,
)
