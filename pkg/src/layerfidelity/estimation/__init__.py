from .fit import DecayCurve, FitResult, alpha_from_fidelity, fidelity_from_alpha, fit_decay, fit_pure_exponential
from .layer import (
    ChainFidelities,
    CompletenessError,
    LayerFidelity,
    SubchainResult,
    best_subchain_lf,
    eplg,
    gamma_depth1,
    gamma_exact_depolarizing,
    gamma_from_lf,
    layer_fidelity,
    merge_subchain_tables,
    subchain_table,
)
from .mirror import MirrorFit, hamming_distribution, mirror_polarization, polarization
from .results import ElementResult, LayerFidelityResult, subchain_csv
