import numpy as np
import pytest

from layerfidelity.circuits import (
    FAMILIES,
    Circuit,
    LayerSpec,
    LayerSpecError,
    Op,
    RBConfig,
    ScheduleError,
    build_family,
    build_mirror,
    expected_1q_layer_units,
    one_qubit_layer_ops,
    schedule,
)


def chain4(**kw):
    return LayerSpec.chain([0, 1, 2, 3], **kw)


def ideal_output_probability(c: Circuit) -> list[float]:
    """Probability of each unit's target from the dense ideal unitary."""
    psi = c.ideal_unitary()[:, 0]
    probs = np.abs(psi) ** 2
    n = len(c.qubits)
    pos = {q: i for i, q in enumerate(c.qubits)}
    out = []
    for u, t in zip(c.units, c.targets):
        p = 0.0
        for idx, pr in enumerate(probs):
            bits = [(idx >> (n - 1 - pos[q])) & 1 for q in u]
            if tuple(bits) == tuple(t):
                p += pr
        out.append(p)
    return out


# -- layer spec -------------------------------------------------------------------


def test_chain_even_odd_split():
    spec = LayerSpec.chain(range(5))
    assert spec.sublayers == (((0, 1), (2, 3)), ((1, 2), (3, 4)))
    assert spec.idle(0) == (4,)
    assert spec.idle(1) == (0,)
    assert spec.units(0) == ((0, 1), (2, 3), (4,))


def test_layer_spec_validation():
    with pytest.raises(LayerSpecError):
        LayerSpec((0, 1, 2), (((0, 1), (1, 2)),))
    with pytest.raises(LayerSpecError):
        LayerSpec((0, 1), (((0, 1),), ((1, 0),)))
    with pytest.raises(LayerSpecError):
        LayerSpec((0, 1), (((0, 1),),), gate="swap")
    with pytest.raises(LayerSpecError):
        LayerSpec((0, 1), (((0, 5),),))


def test_layer_spec_round_trip():
    spec = LayerSpec((0, 1, 2, 3), (((0, 1), (2, 3)), ((1, 2),)), gate_types={(2, 3): "ecr"},
                     durations={(0, 1): 5})
    assert LayerSpec.from_dict(spec.to_dict()) == spec
    assert spec.sublayer_duration(0) == 8
    assert spec.gate_of((3, 2)) == "ecr"


def test_rb_config_validation():
    with pytest.raises(ValueError):
        RBConfig((1, 1, 2))
    with pytest.raises(ValueError):
        RBConfig((2, 3), family="mirror_pauli")
    with pytest.raises(ValueError):
        RBConfig((1, 2), family="bogus")
    with pytest.raises(ValueError):
        RBConfig((1, 2), seed=2**64)
    assert RBConfig((1, 2)).replace(shots=10).shots == 10


# -- builders ---------------------------------------------------------------------


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_is_ideally_identity(family):
    spec = chain4(durations={(0, 1): 5})
    depths = (2, 4) if family.startswith("mirror") else (1, 3)
    cfg = RBConfig(depths, randomizations=3, seed=7, family=family)
    for m in range(spec.n_sublayers if family in ("direct", "simultaneous", "staggered") else 1):
        for c in build_family(spec, cfg, m=m):
            assert np.allclose(ideal_output_probability(c), 1.0)


@pytest.mark.parametrize("gate", ["cz", "ecr"])
def test_other_native_gates_invert(gate):
    spec = chain4(gate=gate)
    for fam in ("direct", "mirror_pauli"):
        cfg = RBConfig((2, 4), randomizations=3, family=fam)
        for c in build_family(spec, cfg):
            assert np.allclose(ideal_output_probability(c), 1.0)


def test_circuits_are_reproducible_and_seed_dependent():
    spec = chain4()
    a = build_family(spec, RBConfig((1, 5), 2, seed=3))
    b = build_family(spec, RBConfig((1, 5), 2, seed=3))
    c = build_family(spec, RBConfig((1, 5), 2, seed=4))
    assert [x.to_json() for x in a] == [x.to_json() for x in b]
    assert [x.to_json() for x in a] != [x.to_json() for x in c]


def test_circuit_independent_of_depth_grid():
    spec = chain4()
    a = build_family(spec, RBConfig((1, 5), 2))
    b = build_family(spec, RBConfig((5, 9), 2))
    assert [x.to_json() for x in a if x.depth == 5] == [x.to_json() for x in b if x.depth == 5]


def test_direct_rb_gate_count():
    spec = chain4()
    for c in build_family(spec, RBConfig((6,), 1)):
        # 6 layers of two gates plus at most three per pair in the inverse
        assert 12 <= len(c.two_qubit_ops()) <= 18


def test_mirror_pauli_targets_vary():
    spec = chain4()
    targets = {c.targets[0] for c in build_mirror(spec, RBConfig((4,), 12, family="mirror_pauli"))}
    assert len(targets) > 1
    assert {c.targets[0] for c in build_mirror(spec, RBConfig((4,), 5), pauli_layer=False)} == {(0, 0, 0, 0)}


def test_isolated_requires_layer_edge():
    with pytest.raises(ValueError):
        build_family(chain4(), RBConfig((1, 2), family="isolated"), pair=(0, 2))


def test_circuit_json_round_trip():
    c = build_family(chain4(), RBConfig((2,), 1))[0]
    assert Circuit.from_dict(c.to_dict()).to_json() == c.to_json()


def test_one_qubit_layer_ops_ignores_identity():
    assert one_qubit_layer_ops({0: 0, 1: 0}) == []


# -- scheduling -------------------------------------------------------------------


def _circ(ops, qubits=(0, 1), durations=None):
    return Circuit(qubits, tuple(ops), (), (), durations or {})


def test_alap_idles_at_start():
    c = _circ([Op("x90", (0,)), Op("cx", (0, 1))], durations={(0, 1): 3})
    s = schedule(c)
    assert s.n_units == 4
    first = s.slices[0].action_map()
    assert first[0] == ("x90",) and first[1] == ("idle",)
    asap = schedule(c, align="asap")
    assert asap.n_units == 4


def test_alap_moves_short_qubit_late():
    c = _circ([Op("x90", (0,)), Op("x90", (1,)), Op("x90", (1,)), Op("x90", (1,))])
    s = schedule(c)
    assert [sl.action_map()[0] for sl in s.slices] == [("idle",), ("idle",), ("x90",)]
    s2 = schedule(c, align="asap")
    assert [sl.action_map()[0] for sl in s2.slices] == [("x90",), ("idle",), ("idle",)]


def test_rz_is_free_and_barrier_aligns():
    c = _circ([Op("rz", (0,), 0.3), Op("x90", (1,)), Op("barrier", (0, 1)), Op("x90", (0,))])
    s = schedule(c, align="asap")
    assert s.n_units == 2
    assert any(sl.duration == 0 for sl in s.slices)
    assert s.barriers == (1,)
    assert s.slices[-1].action_map()[0] == ("x90",)


def test_two_qubit_gate_slices_carry_index():
    c = _circ([Op("cx", (0, 1))], durations={(0, 1): 5})
    s = schedule(c)
    acts = [sl.action_map()[0] for sl in s.slices]
    assert [a[3] for a in acts] == [0, 1, 2, 3, 4]
    assert s.wall_time == pytest.approx(5 * 50e-9)


def test_schedule_rejects_bad_duration():
    with pytest.raises(ScheduleError):
        schedule(_circ([Op("cx", (0, 1))], durations={(0, 1): 0}))


@pytest.mark.parametrize("n", [1, 2, 4, 10])
def test_expected_1q_layer_units_closed_form(n):
    # 4/24 Cliffords need no X90, 16/24 one, 4/24 two
    assert expected_1q_layer_units(n) == pytest.approx(2 - (5 / 6) ** n - (1 / 6) ** n)


def test_expected_1q_layer_units_monte_carlo(rng):
    spec_q = (0, 1, 2, 3)
    total = 0
    trials = 3000
    for _ in range(trials):
        ops = one_qubit_layer_ops(dict(zip(spec_q, rng.integers(24, size=4))))
        c = Circuit(spec_q, tuple(ops) + (Op("barrier", spec_q),), (), ())
        total += schedule(c).n_units
    assert total / trials == pytest.approx(expected_1q_layer_units(4), abs=0.03)
