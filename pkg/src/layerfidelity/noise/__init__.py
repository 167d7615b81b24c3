from .channels import coherent_process_error, incoherent_layer_error, t1t2_decay_factors, t1t2_step_channel
from .crosstalk import CrosstalkFidelities, crosstalk_bound_oracle
from .gamma import (
    GammaBounds,
    LemmaGap,
    depolarizing_gamma,
    gamma_bounds,
    gamma_from_det,
    gamma_from_lindblad,
    gamma_inverse_sqrt,
    global_depolarizing_point,
    lemma_gap,
    lindblad_from_pauli_channel,
    lindblad_pauli_fidelities,
    random_pauli_channel,
    single_pauli_channel,
    single_pauli_point,
    tensor_depolarizing_point,
)
from .model import (
    COHERENT_KINDS,
    NOISE_MODEL_SCHEMA,
    CoherentTerm,
    NoiseModel,
    NoiseModelError,
    PauliLindbladModel,
    StochasticTerm,
)
from .presets import SCENARIOS, decoherence_only, preset, scenario, zz_model
