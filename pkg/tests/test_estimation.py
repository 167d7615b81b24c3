import math

import numpy as np
import pytest

from layerfidelity.circuits import LayerSpec
from layerfidelity.estimation import (
    ChainFidelities,
    CompletenessError,
    DecayCurve,
    alpha_from_fidelity,
    best_subchain_lf,
    eplg,
    fidelity_from_alpha,
    fit_decay,
    gamma_depth1,
    gamma_exact_depolarizing,
    gamma_from_lf,
    hamming_distribution,
    layer_fidelity,
    merge_subchain_tables,
    mirror_polarization,
    polarization,
    subchain_table,
)
from layerfidelity.estimation.layer import SubchainResult

DEPTHS = (1, 10, 20, 40, 80, 150)


def synthetic_curve(alpha, A=0.7, B=0.25, noise=0.0, rng=None, depths=DEPTHS, d=4):
    means = A * np.power(alpha, depths) + B
    sems = np.full(len(depths), noise if noise else 0.0)
    if noise:
        means = np.clip(means + rng.normal(0, noise, len(depths)), 0, 1)
    return DecayCurve(depths, tuple(means), tuple(sems), unit=(0, 1) if d == 4 else (0,))


# -- fitting -----------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [0.9, 0.98, 0.995])
def test_fit_recovers_exact_curve(alpha):
    r = fit_decay(synthetic_curve(alpha))
    assert r.alpha == pytest.approx(alpha, abs=1e-6)
    assert r.A == pytest.approx(0.7, abs=1e-4)
    assert r.B == pytest.approx(0.25, abs=1e-4)


def test_fit_with_noise_covers_truth(rng):
    hits = 0
    for _ in range(40):
        r = fit_decay(synthetic_curve(0.98, noise=0.005, rng=rng))
        hits += abs(r.alpha - 0.98) <= 2 * r.alpha_err
    assert hits >= 30


def test_fit_flags_and_edge_cases():
    flat = DecayCurve(DEPTHS, (1.0,) * 6, (0.0,) * 6, unit=(0, 1))
    r = fit_decay(flat)
    assert r.alpha == 1.0 and "underdriven" in r.flags
    assert "underdriven" in fit_decay(synthetic_curve(0.9999, B=0.28)).flags
    with pytest.raises(ValueError):
        fit_decay(DecayCurve((1, 2, 3), (0.9, 0.8, 0.7), (0, 0, 0)))


def test_curve_validation_and_from_samples():
    with pytest.raises(ValueError):
        DecayCurve((1, 2), (0.5,), (0.1, 0.1))
    with pytest.raises(ValueError):
        DecayCurve((1,), (1.5,), (0.0,))
    c = DecayCurve.from_samples((1, 2), [[0.9, 1.1], [0.5, 0.7]], unit=(3,))
    assert c.means == (1.0, 0.6)
    assert c.sems[1] == pytest.approx(np.std([0.5, 0.7], ddof=1) / math.sqrt(2))
    assert c.dimension == 2


def test_fidelity_alpha_conversions():
    assert fidelity_from_alpha(0.9, 4) == pytest.approx((1 + 15 * 0.9) / 16)
    assert fidelity_from_alpha(0.9, 2) == pytest.approx((1 + 3 * 0.9) / 4)
    assert alpha_from_fidelity(fidelity_from_alpha(0.97, 4), 4) == pytest.approx(0.97)


# -- layer fidelity -------------------------------------------------------------------


def test_layer_fidelity_product():
    tables = [{(0, 1): 0.99, (2, 3): 0.98, (4,): 0.995}, {(1, 2): 0.97, (3, 4): 0.96, (0,): 0.999}]
    lf = layer_fidelity(tables, LayerSpec.chain(range(5)))
    assert lf.per_sublayer[0] == pytest.approx(0.99 * 0.98 * 0.995)
    assert lf.LF == pytest.approx(math.prod(tables[0].values()) * math.prod(tables[1].values()))


def test_layer_fidelity_completeness():
    spec = LayerSpec.chain(range(5))
    with pytest.raises(CompletenessError, match="idle qubit"):
        layer_fidelity([{(0, 1): 0.99, (2, 3): 0.98}, {(1, 2): 0.97, (3, 4): 0.96, (0,): 1}], spec)
    with pytest.raises(CompletenessError, match="pair"):
        layer_fidelity([{(0, 1): 0.99, (4,): 1}, {(1, 2): 0.97, (3, 4): 0.96, (0,): 1}], spec)
    with pytest.raises(CompletenessError):
        layer_fidelity([{(0, 1): 0.99}], spec)
    with pytest.raises(ValueError):
        layer_fidelity([{(0, 1): 0.0}])


def test_eplg():
    assert eplg(0.9, 1) == pytest.approx(0.1)
    assert eplg(0.81, 2) == pytest.approx(0.1)
    assert eplg(1.0, 5) == 0.0
    with pytest.raises(ValueError):
        eplg(0.0, 3)
    with pytest.raises(ValueError):
        eplg(0.9, 0)


# -- sub-chains ------------------------------------------------------------------------


def random_chain(rng, n=8):
    qs = tuple(int(q) for q in rng.permutation(20)[:n])
    edge = {(qs[i], qs[i + 1]): float(rng.uniform(0.9, 1)) for i in range(n - 1)}
    idle = {q: float(rng.uniform(0.98, 1)) for q in qs if rng.random() < 0.7}
    return ChainFidelities(qs, edge, idle)


def window_oracle(cf: ChainFidelities, start, N):
    """LF of a window from its gate list: inside gates in full, boundary gates at half weight."""
    qs = cf.qubits
    w = qs[start:start + N]
    lf = 1.0
    for a, b in zip(w, w[1:]):
        lf *= cf.edge[tuple(sorted((a, b)))]
    if start > 0:
        lf *= cf.edge[tuple(sorted((qs[start - 1], qs[start])))] ** 0.5
    if start + N < len(qs):
        lf *= cf.edge[tuple(sorted((qs[start + N - 1], qs[start + N])))] ** 0.5
    for q in w:
        lf *= cf.idle.get(q, 1.0)
    return lf


def test_windows_match_oracle_and_brute_force_best(rng):
    for _ in range(10):
        cf = random_chain(rng)
        for N in range(2, len(cf.qubits) + 1):
            r = best_subchain_lf(cf, N)
            lfs = [window_oracle(cf, s, N) for s in range(len(cf.qubits) - N + 1)]
            assert np.allclose(r.table, lfs)
            assert r.LF == pytest.approx(max(lfs))
            assert r.start == int(np.argmax(lfs))
            assert r.EPLG == pytest.approx(1 - r.LF ** (1 / (N - 1)))
            assert r.qubits == cf.qubits[r.start:r.start + N]


def test_full_chain_window_has_no_boundary_terms():
    cf = ChainFidelities((0, 1, 2), {(0, 1): 0.99, (1, 2): 0.99})
    assert cf.window_lf(0, 3) == pytest.approx(0.9801)
    assert cf.window_lf(0, 2) == pytest.approx(0.99 * math.sqrt(0.99))


def test_window_ties_go_to_lowest_start():
    cf = ChainFidelities((0, 1, 2, 3), {(0, 1): 0.99, (1, 2): 0.99, (2, 3): 0.99})
    # both end windows carry one boundary gate
    assert best_subchain_lf(cf, 2).start == 0


def test_window_error_propagation():
    cf = ChainFidelities((0, 1, 2), {(0, 1): 0.9, (1, 2): 0.8}, edge_err={(0, 1): 0.01, (1, 2): 0.02})
    lf = cf.window_lf(0, 2)
    expected = lf * math.hypot(0.01 / 0.9, 0.5 * 0.02 / 0.8)
    assert cf.window_lf_err(0, 2) == pytest.approx(expected)


def test_subchain_errors():
    cf = ChainFidelities((0, 1), {(0, 1): 0.9})
    with pytest.raises(ValueError):
        best_subchain_lf(cf, 1)
    with pytest.raises(ValueError):
        best_subchain_lf(cf, 3)
    with pytest.raises(ValueError):
        ChainFidelities((0, 1, 2), {(0, 1): 0.9})


def test_merge_keeps_max_and_first_on_tie(rng):
    a = subchain_table(random_chain(rng, 5))
    b = subchain_table(random_chain(rng, 7))
    merged = merge_subchain_tables([a, b])
    assert [r.N for r in merged] == list(range(2, 8))
    for r in merged:
        cands = [x.LF for x in a + b if x.N == r.N]
        assert r.LF == max(cands)
    x = SubchainResult(2, 0.9, eplg(0.9, 1), 0, (0, 1), (0.9,))
    y = SubchainResult(2, 0.9, eplg(0.9, 1), 0, (5, 6), (0.9,))
    assert merge_subchain_tables([[x], [y]])[0].qubits == (0, 1)


# -- gamma ------------------------------------------------------------------------------


def test_gamma_helpers():
    assert gamma_from_lf(0.5) == pytest.approx(4.0)
    g, g2 = gamma_depth1(0.01, 4)
    assert g == pytest.approx(0.99**-4) and g2 == pytest.approx(0.99**-2)
    with pytest.raises(ValueError):
        gamma_depth1(0.01, 3)
    assert gamma_exact_depolarizing([fidelity_from_alpha(0.98, 4)] * 3) == pytest.approx(0.98 ** (-45 / 8))
    with pytest.raises(ValueError):
        gamma_exact_depolarizing([0.01])


def test_gamma_from_lf_approximates_exact_for_small_errors():
    fs = [0.995, 0.99, 0.992]
    assert gamma_from_lf(math.prod(fs)) == pytest.approx(gamma_exact_depolarizing(fs), rel=2e-3)


# -- mirror polarization -------------------------------------------------------------------


def test_hamming_distribution_and_polarization():
    n = 3
    p = np.zeros(8)
    p[0b101] = 1
    assert np.allclose(hamming_distribution(p, (1, 0, 1), n), [1, 0, 0, 0])
    assert polarization(p, (1, 0, 1), n) == pytest.approx(1.0)
    assert polarization(np.full(8, 1 / 8), (0, 0, 0), n) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        hamming_distribution(np.ones(4) / 4, (0, 0, 0), n)


def test_polarization_of_depolarized_state():
    # depolarizing with parameter a on each of n qubits: S = product of per-qubit factors
    n, a = 2, 0.8
    one = np.array([(1 + a) / 2, (1 - a) / 2])
    p = np.kron(one, one)
    # each qubit's Pauli fidelities are (1, a, a, a); the global average over non-identity Paulis
    expected = (6 * a + 9 * a * a) / 15
    assert polarization(p, (0, 0), n) == pytest.approx(expected)


def test_mirror_polarization_fit():
    depths = np.array([2, 4, 8, 16, 32])
    fit = mirror_polarization(depths, 0.95 * 0.97**depths, 2)
    assert fit.alpha_S == pytest.approx(0.97, abs=1e-8)
    assert fit.layer_fidelity == pytest.approx((1 + 15 * 0.97) / 16)
