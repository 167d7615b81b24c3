"""Numerical checks of the gamma bounds, the mean-gap lemma and the crosstalk bound."""

from __future__ import annotations

import math

import numpy as np

from ..core.pauli import PauliString, symplectic_sign_matrix
from ..noise import (
    crosstalk_bound_oracle,
    gamma_bounds,
    global_depolarizing_point,
    lemma_gap,
    single_pauli_point,
    tensor_depolarizing_point,
)

CHECKS = ("bounds", "families", "lemma", "crosstalk")
TOL = 1e-12


def random_pauli_fidelities(rng: np.random.Generator, n: int = 2, min_fp: float = 0.55):
    """Pauli probabilities with ``p_I > min_fp`` and their Pauli fidelities ``f = S p``."""
    signs = symplectic_sign_matrix(n)
    while True:
        probs = rng.dirichlet(np.ones(4**n)) * 0.5
        probs[0] += 0.5
        if probs[0] > min_fp:
            return probs, signs @ probs


def check_bounds(n_channels: int = 10_000, seed: int = 0) -> dict:
    """``lower <= gamma**-0.5 <= F_p`` on random two-qubit Pauli channels."""
    rng = np.random.default_rng([int(seed), 31])
    violations, worst = 0, math.inf
    for _ in range(n_channels):
        probs, f = random_pauli_fidelities(rng)
        g = float(np.exp(np.mean(np.log(f))))  # gamma**-0.5 = geometric mean of f
        b = gamma_bounds(float(probs[0]))
        slack = min(g - b.lower, b.upper - g)
        worst = min(worst, slack)
        violations += slack < -TOL
    return {"check": "bounds", "checked": n_channels, "violations": int(violations), "min_slack": worst,
            "passed": violations == 0}


def family_table(grid_points: int = 41) -> list[dict]:
    """``(F_p, lower, gamma**-0.5, upper)`` along the global, tensor and single-Pauli families."""
    rows = []

    def add(name, pt):
        if pt.F_p > 0.5:
            b = gamma_bounds(pt.F_p)
            rows.append({"family": name, "F_p": pt.F_p, "lower": b.lower, "gamma_inv_sqrt": pt.gamma_inv_sqrt,
                         "upper": b.upper})

    for a in np.linspace(0.5, 1.0, grid_points):
        add("global_depolarizing", global_depolarizing_point(10, float(a)))
        add("tensor_depolarizing", tensor_depolarizing_point(10, float(a)))
    for p in np.linspace(0.55, 1.0, grid_points):
        add("single_pauli", single_pauli_point(float(p)))
    return rows


def check_families(grid_points: int = 41) -> dict:
    """Global depolarizing hugs ``F_p`` at high fidelity; single-Pauli is ``sqrt(2p - 1)``."""
    rows = family_table(grid_points)
    glob_gap = max(abs(r["gamma_inv_sqrt"] - r["F_p"]) for r in rows
                   if r["family"] == "global_depolarizing" and r["F_p"] >= global_depolarizing_point(10, 0.9).F_p)
    single_gap = max(abs(r["gamma_inv_sqrt"] - math.sqrt(2 * r["F_p"] - 1)) for r in rows
                     if r["family"] == "single_pauli")
    outside = sum(not (r["lower"] - TOL <= r["gamma_inv_sqrt"] <= r["upper"] + TOL) for r in rows)
    return {"check": "families", "rows": rows, "global_max_gap_alpha_ge_0.9": glob_gap,
            "single_pauli_max_gap": single_gap, "outside_bounds": int(outside),
            "passed": glob_gap <= 1e-3 and single_gap == 0.0 and outside == 0}


def check_lemma(n_cases: int = 100, seed: int = 0) -> dict:
    """Largest corner gap of the box never exceeds the continuous maximum ``f(lambda_0)``."""
    rng = np.random.default_rng([int(seed), 37])
    cases, violations = [], 0
    for _ in range(n_cases):
        c = float(rng.uniform(0.01, 0.99))
        d_hi = float(rng.uniform(c + 1e-3, 1.0))
        N = int(rng.integers(1, 11))
        g = lemma_gap(c, d_hi, N)
        violations += g.numeric_max > g.analytic_bound + TOL
        cases.append({"c": c, "d_hi": d_hi, "N": N, "numeric_max": g.numeric_max, "bound": g.analytic_bound})
    return {"check": "lemma", "checked": n_cases, "violations": int(violations), "cases": cases,
            "passed": violations == 0}


def random_crosstalk_case(rng: np.random.Generator) -> tuple[int, int, PauliString]:
    """Random subsystem sizes and a weight-2 Pauli with one factor in each subsystem."""
    n_k, n_j = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    labels = ["I"] * (n_k + n_j)
    labels[int(rng.integers(n_k))] = "XYZ"[rng.integers(3)]
    labels[n_k + int(rng.integers(n_j))] = "XYZ"[rng.integers(3)]
    return n_k, n_j, PauliString.from_label("".join(labels))


def check_crosstalk(n_cases: int = 200, seed: int = 0) -> dict:
    """Per-subsystem twirling never overestimates the layer fidelity; small-angle forms at 0.1."""
    rng = np.random.default_rng([int(seed), 41])
    violations = 0
    for _ in range(n_cases):
        n_k, n_j, px = random_crosstalk_case(rng)
        a = float(rng.uniform(0.0, 0.3))
        flavor = ("coherent", "stochastic")[int(rng.integers(2))]
        r = crosstalk_bound_oracle(a, n_k, n_j, px, flavor)
        violations += r.F_layer_estimate > r.F_true + TOL
    r = crosstalk_bound_oracle(0.1, 1, 1, "XX")
    true_gap = abs(r.F_true - (1 - 0.1**2))
    est_gap = abs(r.F_layer_estimate - (1 - 0.1**2) ** 2)
    return {"check": "crosstalk", "checked": n_cases, "violations": int(violations),
            "small_angle_true_gap": true_gap, "small_angle_estimate_gap": est_gap,
            "passed": violations == 0 and true_gap <= 1e-3 and est_gap <= 1e-3}


def run_check(name: str, seed: int = 0) -> dict:
    if name == "bounds":
        return check_bounds(seed=seed)
    if name == "families":
        return check_families()
    if name == "lemma":
        return check_lemma(seed=seed)
    if name == "crosstalk":
        return check_crosstalk(seed=seed)
    raise KeyError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
