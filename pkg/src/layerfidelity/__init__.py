"""Layer fidelity benchmarking of two-qubit gate layers against a noise simulator."""

from .circuits import LayerSpec, RBConfig, schedule
from .estimation import LayerFidelityResult, eplg, layer_fidelity
from .noise import NoiseModel
from .protocol import exact_layer_fidelity, measure_layer_fidelity, measure_mirror, measure_units
from .simulator import Simulator
from .topology import Chain, DeviceModel, decompose_disjoint, find_candidate_chains, load_device

__version__ = "0.1.0"
