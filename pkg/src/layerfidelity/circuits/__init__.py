from .builders import (
    build_direct_rb,
    build_family,
    build_isolated_rb,
    build_mirror,
    build_simultaneous_rb,
    build_staggered,
    circuit_rng,
    one_qubit_layer_ops,
)
from .circuit import Circuit, Op
from .layer import FAMILIES, LayerSpec, LayerSpecError, RBConfig
from .schedule import UNIT_TIME, ScheduledCircuit, ScheduleError, Slice, expected_1q_layer_units, schedule
