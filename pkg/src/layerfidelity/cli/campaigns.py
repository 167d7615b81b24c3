"""Campaign payloads: each returns a JSON payload plus CSV-ready plot panels.

Every series is computed independently; a failing series is recorded in
``errors`` and the campaign carries on with the rest.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from ..circuits import LayerSpec, RBConfig, expected_1q_layer_units
from ..estimation import ChainFidelities, merge_subchain_tables, subchain_table
from ..estimation.layer import gamma_exact_depolarizing, gamma_from_lf
from ..noise import (
    NoiseModel,
    gamma_bounds,
    gamma_from_det,
    preset,
    scenario,
    zz_model,
)
from ..noise.channels import incoherent_layer_error
from ..protocol import chain_fidelities, exact_layer_fidelity, measure_layer_fidelity, measure_mirror, measure_units
from ..topology import (
    DeviceModel,
    decompose_disjoint,
    find_candidate_chains,
    load_device,
    noise_from_device,
    predicted_element_fidelities,
    prune_long_gates,
)
from .config import CampaignConfig
from .theory import check_bounds, check_families, check_lemma

log = logging.getLogger(__name__)

BUILTIN_DEVICES = ("synthetic_ladder_20", "synthetic_heavy_hex_27")
ZZ_PAIRS = ((0, 3), (1, 2))


@dataclass(frozen=True)
class PlotRow:
    series: str
    x: float | str
    y: float
    yerr: float = 0.0


@dataclass
class CampaignOutput:
    payload: dict = field(default_factory=dict)
    panels: dict = field(default_factory=dict)  # panel name -> list of PlotRow
    errors: list = field(default_factory=list)

    def add(self, panel: str, series: str, x, y, yerr: float = 0.0) -> None:
        self.panels.setdefault(panel, []).append(PlotRow(series, x, float(y), float(yerr)))

    def guard(self, label: str, fn: Callable):
        """Run one series; record its failure instead of aborting the campaign."""
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - every failure is reported per series
            log.warning("series %s failed: %s", label, exc)
            self.errors.append({"series": label, "error": f"{type(exc).__name__}: {exc}"})
            return None


# -- shared helpers -------------------------------------------------------------


def resolve_device(name_or_path: str) -> DeviceModel:
    if name_or_path in BUILTIN_DEVICES:
        ref = resources.files("layerfidelity") / "data" / f"{name_or_path}.json"
        with resources.as_file(ref) as p:
            return load_device(p)
    return load_device(Path(name_or_path))


def _noise(cfg: CampaignConfig) -> NoiseModel:
    return preset(cfg.noise) if cfg.noise else NoiseModel()


def _rb(cfg: CampaignConfig, **changes) -> RBConfig:
    rb = cfg.rb or {}
    base = RBConfig(depths=tuple(rb.get("depths", (1, 10, 20, 40, 80, 150))),
                    randomizations=rb.get("randomizations", 6), shots=rb.get("shots", 0), seed=cfg.seed)
    return base.replace(**changes) if changes else base


def _mirror_cfg(cfg: CampaignConfig) -> RBConfig:
    return _rb(cfg, depths=tuple(cfg.params["mirror_depths"]), family="mirror_pauli")


def _chain4(durations=(8, 8)) -> LayerSpec:
    return LayerSpec.chain([0, 1, 2, 3], durations={(0, 1): durations[0], (2, 3): durations[1]})


def decoherence_layer_prediction(spec: LayerSpec, noise: NoiseModel, unit_time: float) -> float:
    """LF predicted from T1/T2 alone: every qubit decays for each sub-layer's gate time plus its 1Q layer."""
    t1s, t2s = zip(*(noise.coherence(q) for q in spec.qubits))
    one_q = expected_1q_layer_units(len(spec.qubits))
    lf = 1.0
    for m in range(spec.n_sublayers):
        lf *= 1 - incoherent_layer_error(t1s, t2s, (spec.sublayer_duration(m) + one_q) * unit_time)
    return lf


def _compare_full_layer(out: CampaignOutput, panel: str, label, spec: LayerSpec, noise: NoiseModel,
                        cfg: CampaignConfig, exact_samples: int = 0) -> dict:
    """Layer RB, mirror with and without Pauli layer (and optionally the exact value) on one noise model."""
    row: dict = {"label": label}
    lf = out.guard(f"{label}/layer", lambda: measure_layer_fidelity(spec, _rb(cfg), noise, cfg.unit_time,
                                                                      cfg.workers))
    if lf is not None:
        row["layer_error"] = 1 - lf.LF
        row["layer_error_err"] = lf.LF_err
        row["layer"] = lf.to_dict()
        out.add(panel, "layer", label, 1 - lf.LF, lf.LF_err)
    for pl, name in ((True, "mirror_pauli"), (False, "mirror_no_pauli")):
        mr = out.guard(f"{label}/{name}", lambda pl=pl: measure_mirror(spec, _mirror_cfg(cfg), noise, pl,
                                                                        cfg.unit_time, cfg.workers))
        if mr is not None:
            row[f"{name}_error"] = mr.fit.layer_error
            row[f"{name}_fit"] = mr.fit.to_dict()
            row[f"{name}_curve"] = mr.curve.to_dict()
            d2 = 4 ** mr.fit.n
            out.add(panel, name, label, mr.fit.layer_error, (d2 - 1) / d2 * mr.fit.alpha_err)
    if exact_samples:
        ex = out.guard(f"{label}/exact", lambda: exact_layer_fidelity(spec, noise, exact_samples, cfg.seed,
                                                                        cfg.unit_time))
        if ex is not None:
            row["exact_error"] = ex.error
            row["exact_error_err"] = ex.sem
            out.add(panel, "exact", label, ex.error, ex.sem)
    return row


# -- campaigns ----------------------------------------------------------------------


def run_figure4(cfg: CampaignConfig) -> CampaignOutput:
    """Incoherent errors only: layer vs simultaneous RB on the even layer, then layer vs mirror."""
    out = CampaignOutput()
    p = cfg.params
    noise = _noise(cfg)
    spec = _chain4(tuple(p["durations"]))
    one_q = expected_1q_layer_units(len(spec.qubits))
    if "top" in p["panels"]:
        rows = []
        layer = out.guard("top/layer", lambda: measure_units(spec, _rb(cfg), noise, 0, unit_time=cfg.unit_time,
                                                             workers=cfg.workers))
        simul = out.guard("top/simultaneous", lambda: measure_units(spec, _rb(cfg, family="simultaneous"), noise, 0,
                                                                    unit_time=cfg.unit_time, workers=cfg.workers))
        layer_len = spec.sublayer_duration(0) + one_q
        for e in spec.sublayers[0]:
            own = spec.duration_of(e)
            pair_t = [noise.coherence(q) for q in e]
            th_layer = incoherent_layer_error([t[0] for t in pair_t], [t[1] for t in pair_t], layer_len * cfg.unit_time)
            th_own = incoherent_layer_error([t[0] for t in pair_t], [t[1] for t in pair_t],
                                            (own + expected_1q_layer_units(2)) * cfg.unit_time)
            row = {"pair": list(e), "duration": own, "theory_layer": th_layer, "theory_own_length": th_own}
            out.add("figure4_top", "theory_layer", own, th_layer)
            out.add("figure4_top", "theory_own_length", own, th_own)
            for name, res in (("layer", layer), ("simultaneous", simul)):
                if res is not None and e in res:
                    row[name] = res[e].error
                    row[f"{name}_err"] = res[e].fidelity_err
                    out.add("figure4_top", name, own, res[e].error, res[e].fidelity_err)
            rows.append(row)
        out.payload["top"] = {"effective_layer_units": layer_len, "pairs": rows}
    if "bottom" in p["panels"]:
        row = _compare_full_layer(out, "figure4_bottom", "full_layer", spec, noise, cfg)
        theory_lf = decoherence_layer_prediction(spec, noise, cfg.unit_time)
        row["theory_error"] = 1 - theory_lf
        out.add("figure4_bottom", "theory", "full_layer", 1 - theory_lf)
        if "layer_error" in row:
            for l in p["mirror_depths"]:
                out.add("figure4_bottom_decay", "layer_lf_power", l, (1 - row["layer_error"]) ** l)
                out.add("figure4_bottom_decay", "theory_lf_power", l, theory_lf**l)
        if "mirror_pauli_curve" in row:
            c = row["mirror_pauli_curve"]
            for l, s, e in zip(c["depths"], c["means"], c["sems"]):
                out.add("figure4_bottom_decay", "mirror_pauli_polarization", l, s, e)
        out.payload["bottom"] = row
    return out


def run_figure5(cfg: CampaignConfig) -> CampaignOutput:
    """ZZ crosstalk sweeps: isolated/simultaneous/layer RB, layer vs mirror, and staggered layers."""
    out = CampaignOutput()
    p = cfg.params
    base = _noise(cfg)
    spec = _chain4()
    if "top" in p["panels"]:
        rows = []
        for xi in p["xi_khz"]:
            noise = zz_model(xi * 1e3, ZZ_PAIRS, "zz_always_on", base)
            row = {"xi_khz": xi}
            fams = {"layer": lambda n=noise: measure_units(spec, _rb(cfg), n, 0, unit_time=cfg.unit_time,
                                                           workers=cfg.workers),
                    "simultaneous": lambda n=noise: measure_units(spec, _rb(cfg, family="simultaneous"), n, 0,
                                                                  unit_time=cfg.unit_time, workers=cfg.workers)}
            for e in spec.sublayers[0]:
                fams[f"isolated_{e[0]}_{e[1]}"] = (
                    lambda n=noise, e=e: measure_units(spec, _rb(cfg, family="isolated"), n, pair=e,
                                                       unit_time=cfg.unit_time, workers=cfg.workers))
            for name, fn in fams.items():
                res = out.guard(f"top/{name}/{xi}", fn)
                if res is None:
                    continue
                for u, el in res.items():
                    if len(u) != 2:
                        continue
                    series = name if name.startswith("isolated") else f"{name}_{u[0]}_{u[1]}"
                    row[series] = el.error
                    row[f"{series}_err"] = el.fidelity_err
                    out.add("figure5_top", series, xi, el.error, el.fidelity_err)
            rows.append(row)
        out.payload["top"] = rows
    if "middle" in p["panels"]:
        out.payload["middle"] = [
            {"xi_khz": xi, **_compare_full_layer(out, "figure5_middle", xi, spec,
                                                 zz_model(xi * 1e3, ZZ_PAIRS, "zz_always_on", base), cfg)}
            for xi in p["middle_xi_khz"]
        ]
    if "bottom" in p["panels"]:
        rows = []
        for xi in p["bottom_xi_khz"]:
            noise = zz_model(xi * 1e3, ZZ_PAIRS, "zz_simultaneous_2q", base)
            row = {"xi_khz": xi}
            for fam in ("direct", "staggered"):
                res = out.guard(f"bottom/{fam}/{xi}", lambda n=noise, f=fam: measure_units(
                    spec, _rb(cfg, family=f), n, 0, unit_time=cfg.unit_time, workers=cfg.workers))
                if res is None:
                    continue
                name = "layer" if fam == "direct" else "staggered"
                for u in spec.sublayers[0]:
                    series = f"{name}_{u[0]}_{u[1]}"
                    row[series] = res[u].error
                    row[f"{series}_err"] = res[u].fidelity_err
                    out.add("figure5_bottom", series, xi, res[u].error, res[u].fidelity_err)
            rows.append(row)
        out.payload["bottom"] = rows
    return out


def run_figure6(cfg: CampaignConfig) -> CampaignOutput:
    out = CampaignOutput()
    spec = _chain4()
    out.payload["scenarios"] = [
        _compare_full_layer(out, "figure6", s, spec, scenario(s), cfg, cfg.params["exact_samples"])
        for s in cfg.params["scenarios"]
    ]
    return out


def run_mirror_compare(cfg: CampaignConfig) -> CampaignOutput:
    out = CampaignOutput()
    spec = _chain4()
    noise = _noise(cfg)
    if cfg.params["xi_khz"]:
        noise = zz_model(cfg.params["xi_khz"] * 1e3, ZZ_PAIRS, "zz_always_on", noise)
    row = _compare_full_layer(out, "mirror_compare", cfg.noise or "noiseless", spec, noise, cfg,
                              cfg.params["exact_samples"])
    if noise.default_t1 is not None or noise.t1:
        row["decoherence_prediction_error"] = 1 - decoherence_layer_prediction(spec, noise, cfg.unit_time)
    out.payload["comparison"] = row
    return out


def run_layer_count_sweep(cfg: CampaignConfig) -> CampaignOutput:
    """The same chain split into more and more disjoint sub-layers."""
    out = CampaignOutput()
    p = cfg.params
    noise = _noise(cfg)
    qs = list(range(p["n_qubits"]))
    edges = list(zip(qs, qs[1:]))
    rows = []
    for k in p["n_layers"]:
        row: dict = {"n_layers": k}
        try:
            dec = decompose_disjoint(edges, n_classes=k, qubits=qs)
        except ValueError as exc:
            out.errors.append({"series": f"decompose/{k}", "error": str(exc)})
            continue
        spec = dec.to_layer_spec()
        row["classes"] = [[list(e) for e in c] for c in dec.classes]
        pred = decoherence_layer_prediction(spec, noise, cfg.unit_time)
        row["predicted_lf"] = pred
        out.add("layer_count_sweep", "predicted", k, pred)
        res = out.guard(f"measured/{k}", lambda s=spec: measure_layer_fidelity(s, _rb(cfg), noise, cfg.unit_time,
                                                                                 cfg.workers))
        if res is not None:
            row["measured_lf"] = res.LF
            row["measured_lf_err"] = res.LF_err
            row["per_sublayer"] = list(res.per_sublayer)
            out.add("layer_count_sweep", "measured", k, res.LF, res.LF_err)
        rows.append(row)
    out.payload["sweep"] = rows
    return out


def injected_pair_errors(n_qubits: int, max_error: float, seed: int) -> dict:
    rng = np.random.default_rng([int(seed), 29])
    errs = rng.uniform(max_error / 5, max_error, size=n_qubits - 1)
    return {(i, i + 1): float(e) for i, e in enumerate(errs)}


def run_gamma_compare(cfg: CampaignConfig) -> CampaignOutput:
    """``1/LF^2`` from simulated layer RB against gamma of the injected per-pair channels."""
    out = CampaignOutput()
    n = cfg.params["n_qubits"]
    errs = injected_pair_errors(n, cfg.params["max_error"], cfg.seed)
    alphas = {e: (16 * (1 - v) - 1) / 15 for e, v in errs.items()}
    noise = _noise(cfg).replace(gate_depolarizing=alphas)
    spec = LayerSpec.chain(range(n))
    model = 1.0
    for a in alphas.values():
        model *= gamma_from_det(np.diag([1.0] + [a] * 15))
    out.payload["gamma_model"] = model
    out.payload["injected_errors"] = [{"pair": list(k), "error": v} for k, v in errs.items()]
    out.add("gamma", "gamma_model", n, model)
    res = out.guard("layer", lambda: measure_layer_fidelity(spec, _rb(cfg), noise, cfg.unit_time, cfg.workers))
    if res is not None:
        g = gamma_from_lf(res.LF)
        g_err = 2 * g * res.LF_err / res.LF
        pair_f = [e.fidelity for sub in res.elements for e in sub if len(e.unit) == 2]
        gd = gamma_exact_depolarizing(pair_f)
        out.payload.update({"LF": res.LF, "LF_err": res.LF_err, "gamma_from_lf": g, "gamma_from_lf_err": g_err,
                            "gamma_depolarizing_from_fits": gd,
                            "relative_difference": abs(g - model) / model})
        out.add("gamma", "gamma_from_lf", n, g, g_err)
        out.add("gamma", "gamma_depolarizing_from_fits", n, gd)
    return out


def run_theory_check(cfg: CampaignConfig) -> CampaignOutput:
    """Gamma bounds against random and saturating Pauli channels, plus the mean-gap lemma."""
    out = CampaignOutput()
    p = cfg.params
    for f in np.linspace(0.55, 1.0, p["grid_points"]):
        b = gamma_bounds(float(f))
        out.add("theory_bounds", "lower", float(f), b.lower)
        out.add("theory_bounds", "upper", float(f), b.upper)
    fam = check_families(p["grid_points"])
    for r in fam["rows"]:
        out.add("theory_families", r["family"], r["F_p"], r["gamma_inv_sqrt"])
    out.payload["families"] = fam
    out.payload["random_channels"] = check_bounds(p["n_random_channels"], cfg.seed)
    out.payload["lemma"] = check_lemma(p["n_lemma_cases"], cfg.seed)
    return out


def run_lf_scan(cfg: CampaignConfig) -> CampaignOutput:
    """Chain search on a device, layer RB on each candidate, and the merged LF-vs-N table."""
    out = CampaignOutput()
    p = cfg.params
    device = resolve_device(cfg.device or BUILTIN_DEVICES[0])
    pruned = prune_long_gates(device, p["prune_ratio"])
    removed = sorted(set(e.pair for e in device.edges) - set(e.pair for e in pruned.edges))
    n_max = min(p["n_max"], len(device.qubits))
    cands = find_candidate_chains(pruned, n_max, p["k"])
    out.payload["device"] = {"name": device.name, "n_qubits": len(device.qubits), "pruned_edges": removed}
    tables, measured_err, chains = [], {}, []
    ns = p.get("n_values")
    for i, cand in enumerate(cands):
        chain = cand.chain
        spec = chain.decomposition().to_layer_spec(device, cfg.unit_time)
        noise = noise_from_device(device, chain.qubits, coherence=p["decoherence"])
        entry = {"index": i, **cand.to_dict()}
        res = out.guard(f"chain{i}", lambda s=spec, n=noise: measure_layer_fidelity(
            s, _rb(cfg), n, cfg.unit_time, cfg.workers, chain=True))
        if res is not None:
            cf = chain_fidelities(spec, res)
            rows = subchain_table(cf, ns)
            tables.append([(r, cf) for r in rows])
            entry["result"] = res.to_dict()
            for sub in res.elements:
                for e in sub:
                    if len(e.unit) == 2 and e.usable:
                        measured_err.setdefault(tuple(sorted(e.unit)), e.error)
        # analytic reference from the device numbers themselves
        pred = predicted_element_fidelities(chain.decomposition(), device)
        idle: dict = {}
        if p["decoherence"]:
            for table in pred:
                for u, f in table.items():
                    if len(u) == 1:
                        idle[u[0]] = idle.get(u[0], 1.0) * f
        ref = ChainFidelities(chain.qubits, {e: device.edge(*e).fidelity for e in chain.edges}, idle)
        entry["analytic"] = [{"N": r.N, "LF": r.LF, "start": r.start} for r in subchain_table(ref, ns)]
        chains.append(entry)
    out.payload["chains"] = chains

    merged_rows = merge_subchain_tables([[r for r, _ in t] for t in tables])
    owner = {}
    for t in tables:
        for r, cf in t:
            if owner.get(r.N) is None and any(r is m for m in merged_rows):
                owner[r.N] = cf
    merged = []
    for r in merged_rows:
        cf = owner[r.N]
        err = cf.window_lf_err(r.start, r.N)
        merged.append({"N": r.N, "LF": r.LF, "LF_err": err, "EPLG": r.EPLG, "start": r.start,
                       "qubits": list(r.qubits)})
        out.add("lf_vs_n", "measured", r.N, r.LF, err)
        eplg_err = (r.LF ** (1 / (r.N - 1)) / (r.N - 1)) * err / r.LF
        out.add("eplg_vs_n", "measured", r.N, r.EPLG, eplg_err)
    out.payload["subchains"] = merged
    out.panels.setdefault("lf_vs_n", [])
    out.panels.setdefault("eplg_vs_n", [])

    iso = sorted(device.edge(*k).error for k in measured_err)
    lay = sorted(measured_err.values())
    for name, vals in (("isolated", iso), ("layered", lay)):
        for j, v in enumerate(vals):
            out.add("error_quantiles", name, (j + 0.5) / len(vals), v)
    out.panels.setdefault("error_quantiles", [])
    out.payload["error_quantiles"] = {"isolated": iso, "layered": lay}
    return out


CAMPAIGN_RUNNERS = {
    "lf_scan": run_lf_scan,
    "figure4": run_figure4,
    "figure5": run_figure5,
    "figure6": run_figure6,
    "mirror_compare": run_mirror_compare,
    "layer_count_sweep": run_layer_count_sweep,
    "gamma_compare": run_gamma_compare,
    "theory_check": run_theory_check,
}


def best_window_by_enumeration(cf: ChainFidelities, N: int) -> tuple[int, float]:
    """Best ``(start, LF)`` over every window, rebuilt from the gate list.

    Each gate contributes ``F**(k/2)`` with ``k`` its endpoints inside the
    window. Kept separate from the sub-chain scan as a cross-check.
    """
    qs = cf.qubits
    best = (-1, -1.0)
    for s in range(len(qs) - N + 1):
        inside = qs[s:s + N]
        log_lf = sum(math.log(cf.idle.get(q, 1.0)) for q in inside)
        for pair, f in cf.edge.items():
            k = sum(q in inside for q in pair)
            log_lf += 0.5 * k * math.log(f)
        if math.exp(log_lf) > best[1] * (1 + 1e-12):
            best = (s, math.exp(log_lf))
    return best
