from .chains import (
    DEFAULT_BEAM_WIDTH,
    CandidateChain,
    find_candidate_chains,
    idle_fidelity,
    predicted_element_fidelities,
    predicted_layer_fidelity,
    predicted_lf,
)
from .decompose import Chain, DisjointDecomposition, decompose_disjoint
from .device import (
    DEFAULT_PRUNE_RATIO,
    DEVICE_SCHEMA,
    DeviceError,
    DeviceModel,
    EdgeProps,
    QubitProps,
    depolarizing_alpha,
    duration_units,
    load_device,
    noise_from_device,
    prune_long_gates,
)
