import numpy as np
import pytest

from conftest import random_unitary
from layerfidelity.circuits import Circuit, LayerSpec, Op, RBConfig, build_family, schedule
from layerfidelity.core import QuantumChannel, embed, rz, x90
from layerfidelity.core.gates import two_qubit_fraction
from layerfidelity.noise import CoherentTerm, NoiseModel, NoiseModelError, StochasticTerm, scenario, t1t2_step_channel
from layerfidelity.simulator import (
    SimulationError,
    Simulator,
    find_clusters,
    marginal_distribution,
    sample,
    superoperator,
    superoperator_fidelity,
)


def reference_evolve(sched, noise: NoiseModel, rho=None):
    """Dense Kraus-by-Kraus evolution; supports gates, always-on ZZ, gate depolarizing and T1/T2."""
    qs = list(sched.qubits)
    n = len(qs)
    pos = {q: i for i, q in enumerate(qs)}
    if rho is None:
        rho = np.zeros((2**n, 2**n), dtype=complex)
        rho[0, 0] = 1

    def channel(kraus, targets):
        return sum(embed(k, targets, n) @ rho @ embed(k, targets, n).conj().T for k in kraus)

    for s in sched.slices:
        acts = s.action_map()
        u = np.eye(2**n, dtype=complex)
        finishing = []
        for q, a in acts.items():
            if a[0] == "rz":
                u = embed(rz(a[1]), [pos[q]], n) @ u
            elif a[0] == "x90":
                u = embed(x90(), [pos[q]], n) @ u
            elif a[0] == "g2" and a[2][0] == q:
                u = embed(two_qubit_fraction(a[1], 1 / a[4]), [pos[a[2][0]], pos[a[2][1]]], n) @ u
                if a[3] == a[4] - 1:
                    finishing.append(a[2])
        if s.duration:
            for t in noise.coherent_terms:
                assert t.kind == "zz_always_on"
                phi = 2 * np.pi * t.strength * sched.unit_time
                u = embed(np.diag([1, 1, 1, np.exp(-1j * phi)]), [pos[q] for q in t.qubits], n) @ u
        rho = u @ rho @ u.conj().T
        if not s.duration:
            continue
        for pair in finishing:
            alpha = noise.pair_depolarizing(pair)
            if alpha != 1:
                rho = channel(QuantumChannel.depolarizing(2, alpha).kraus_ops(), [pos[pair[0]], pos[pair[1]]])
        for q in qs:
            t1, t2 = noise.coherence(q)
            if t1 is not None or t2 is not None:
                rho = channel(t1t2_step_channel(t1, t2, sched.unit_time).kraus_ops(), [pos[q]])
    return rho


def random_circuit(rng, qubits=(0, 1, 2), n_ops=14):
    ops = []
    pairs = [(0, 1), (1, 2), (2, 1)]
    for _ in range(n_ops):
        r = rng.random()
        if r < 0.4:
            ops.append(Op("x90", (int(rng.choice(qubits)),)))
        elif r < 0.6:
            ops.append(Op("rz", (int(rng.choice(qubits)),), float(rng.uniform(-np.pi, np.pi))))
        elif r < 0.9:
            p = pairs[rng.integers(len(pairs))]
            ops.append(Op(["cx", "cz", "ecr"][rng.integers(3)], p))
        else:
            ops.append(Op("barrier", qubits))
    return Circuit(qubits, tuple(ops), (qubits,), ((0,) * len(qubits),), {(0, 1): 3, (1, 2): 2})


NOISES = [
    NoiseModel(),
    NoiseModel(default_t1=20e-6, default_t2=15e-6),
    NoiseModel(t1={0: 10e-6}, t2={2: 5e-6}, gate_depolarizing={(0, 1): 0.9, (1, 2): 0.95}),
    NoiseModel(default_t1=30e-6, coherent_terms=(CoherentTerm("zz_always_on", (0, 2), 400e3),)),
]


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("align", ["alap", "asap"])
def test_simulator_matches_dense_reference(noise, align, rng):
    for _ in range(4):
        c = random_circuit(rng)
        s = schedule(c, align=align)
        got = Simulator(noise).evolve(s).data
        assert np.allclose(got, reference_evolve(s, noise), atol=1e-10)


def test_noiseless_rb_survival_is_one():
    spec = LayerSpec.chain([0, 1, 2, 3])
    sim = Simulator()
    for fam in ("direct", "mirror_pauli", "simultaneous"):
        depths = (2, 4) if fam.startswith("mirror") else (1, 3)
        for c in build_family(spec, RBConfig(depths, 2, family=fam)):
            assert np.allclose(sim.run(schedule(c)).survivals, 1.0)


def test_t1_decay_of_excited_qubit():
    t1 = 20e-6
    ops = [Op("x90", (0,)), Op("x90", (0,))] + [Op("x90", (1,))] * 42
    c = Circuit((0, 1), tuple(ops), ((0,),), ((1,),))
    s = schedule(c, align="asap")
    out = Simulator(NoiseModel(t1={0: t1})).run(s)
    # excited after the second pulse; loses population during it and 40 idle units
    p = out.survivals[0]
    lo = np.exp(-42 * 50e-9 / t1)
    hi = np.exp(-40 * 50e-9 / t1)
    assert lo <= p <= hi


def test_clusters_follow_gates_and_crosstalk():
    c = Circuit((0, 1, 2, 3), (Op("cx", (0, 1)),), ((0, 1), (2,), (3,)), ((0, 0), (0,), (0,)))
    s = schedule(c)
    assert find_clusters(s, NoiseModel()) == [(0, 1), (2,), (3,)]
    zz = NoiseModel(coherent_terms=(CoherentTerm("zz_always_on", (1, 2), 1e5),))
    assert find_clusters(s, zz) == [(0, 1, 2), (3,)]


def test_cluster_cap():
    c = Circuit((0, 1, 2), (Op("cx", (0, 1)), Op("cx", (1, 2))), ((0, 1, 2),), ((0, 0, 0),))
    with pytest.raises(SimulationError):
        Simulator(max_cluster=2).run(schedule(c))


def test_noise_outside_system_rejected():
    c = Circuit((0, 1), (Op("cx", (0, 1)),), ((0, 1),), ((0, 0),))
    bad = NoiseModel(stochastic_terms=(StochasticTerm((5,), "X", 0.1),))
    with pytest.raises(NoiseModelError):
        Simulator(bad).run(schedule(c))


def test_stochastic_term_flips_each_slice():
    p = 0.01
    c = Circuit((0,), tuple([Op("x90", (0,))] * 4), ((0,),), ((0,),))
    out = Simulator(NoiseModel(stochastic_terms=(StochasticTerm((0,), "Z", p),))).run(schedule(c))
    # X90^4 = identity up to phase; Z errors before the last pulses flip the outcome
    assert 0 < 1 - out.survivals[0] < 4 * p


def test_marginal_distribution_ordering():
    rho = np.zeros((8, 8))
    rho[0b011, 0b011] = 1  # qubit order (a, b, c): a=0, b=1, c=1
    assert np.allclose(marginal_distribution(rho, (5, 6, 7), (7, 5)), [0, 0, 1, 0])


def test_sample_shots(rng):
    p = np.array([0.25, 0.75])
    assert np.array_equal(sample(p, 0, rng), p)
    assert sample(p, 1000, rng).sum() == 1000
    with pytest.raises(ValueError):
        sample(p, -1, rng)


def test_shot_mode_reproducible():
    spec = LayerSpec.chain([0, 1])
    c = build_family(spec, RBConfig((3,), 1))[0]
    sim = Simulator(NoiseModel(default_t1=20e-6))
    a = sim.run(schedule(c), shots=100, seed=5).counts
    b = sim.run(schedule(c), shots=100, seed=5).counts
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


# -- superoperators -------------------------------------------------------------------


@pytest.mark.parametrize("noise", NOISES)
def test_superoperator_matches_reference_on_matrix_units(noise, rng):
    c = random_circuit(rng, n_ops=8)
    s = schedule(c)
    S = superoperator(s, noise)
    d = 8
    for k in rng.choice(d * d, size=6, replace=False):
        e = np.zeros((d, d), dtype=complex)
        e.flat[k] = 1
        assert np.allclose(S[:, k].reshape(d, d), reference_evolve(s, noise, e), atol=1e-10)


def test_superoperator_fidelity_of_unitary(rng):
    u = random_unitary(4, rng)
    v = random_unitary(4, rng)
    S = np.kron(v, v.conj())
    assert superoperator_fidelity(S, u) == pytest.approx(abs(np.trace(u.conj().T @ v)) ** 2 / 16)
    assert superoperator_fidelity(np.kron(u, u.conj()), u) == pytest.approx(1.0)


def test_superoperator_fidelity_depolarizing():
    c = Circuit((0, 1), (Op("cx", (0, 1)),), (), (), {(0, 1): 2})
    S = superoperator(schedule(c), NoiseModel(gate_depolarizing={(0, 1): 0.9}))
    assert superoperator_fidelity(S, c.ideal_unitary()) == pytest.approx((1 + 15 * 0.9) / 16)


def test_superoperator_size_cap():
    qs = tuple(range(6))
    c = Circuit(qs, (Op("x90", (0,)),), (), ())
    with pytest.raises(SimulationError):
        superoperator(schedule(c), NoiseModel())


def test_scenario_noise_simulates():
    spec = LayerSpec.chain([0, 1, 2, 3])
    c = build_family(spec, RBConfig((2,), 1))[0]
    out = Simulator(scenario("e")).run(schedule(c))
    assert all(0 < s < 1 for s in out.survivals)
