import hashlib
import json

import pytest

from layerfidelity.cli import CampaignConfig, ConfigError, panel_csv, read_panel_csv, run_campaign
from layerfidelity.cli.campaigns import CampaignOutput, best_window_by_enumeration, resolve_device
from layerfidelity.cli.main import main
from layerfidelity.estimation import ChainFidelities, best_subchain_lf

SMALL_RB = {"depths": [4, 10, 20, 40], "randomizations": 2, "shots": 0}


def device_file(tmp_path, n=5, error=0.0, t1=None, name="line"):
    data = {"name": name,
            "qubits": [{"index": i, "T1": t1, "T2": t1} for i in range(n)],
            "edges": [{"pair": [i, i + 1], "error": error, "duration": 4e-7} for i in range(n - 1)]}
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(data))
    return str(p)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- config -------------------------------------------------------------------------


def test_config_defaults_and_overrides():
    cfg = CampaignConfig.from_dict({"campaign": "lf_scan", "rb": {"randomizations": 3}, "params": {"k": 2}})
    assert cfg.rb["randomizations"] == 3 and cfg.rb["depths"][0] == 4
    assert cfg.params["k"] == 2 and cfg.params["n_max"] == 20


@pytest.mark.parametrize("bad", [
    {"campaign": "nope"},
    {"campaign": "lf_scan", "colour": 1},
    {"campaign": "lf_scan", "params": {"bogus": 1}},
    {"campaign": "lf_scan", "rb": {"depths": [1, 2]}},
    {"campaign": "lf_scan", "seed": -1},
    {},
])
def test_config_rejects_invalid(bad):
    with pytest.raises(ConfigError):
        CampaignConfig.from_dict(bad)


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        CampaignConfig.load(tmp_path / "none.json")
    (tmp_path / "c.json").write_text("{oops")
    with pytest.raises(ConfigError, match="not valid JSON"):
        CampaignConfig.load(tmp_path / "c.json")


# -- CSV --------------------------------------------------------------------------------


def test_empty_panel_csv_has_header_only(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(panel_csv([]))
    assert p.read_text() == "series,x,y,yerr\n"
    assert read_panel_csv(p) == []


def test_panel_csv_round_trip(tmp_path):
    out = CampaignOutput()
    out.add("lf", "a", 2, 0.9, 0.01)
    out.add("lf", "a", 3, 0.8)
    p = tmp_path / "lf.csv"
    p.write_text(panel_csv(out.panels["lf"]))
    rows = read_panel_csv(p)
    assert [r.series for r in rows] == ["a", "a"]
    assert rows[0] == out.panels["lf"][0]
    assert rows[1].y == 0.8


def test_guard_records_failure_and_continues():
    out = CampaignOutput()
    assert out.guard("bad", lambda: 1 / 0) is None
    assert out.guard("ok", lambda: 3) == 3
    assert [e["series"] for e in out.errors] == ["bad"]


# -- commands ---------------------------------------------------------------------------


def test_validate_command(capsys):
    code, out, _ = run_cli(capsys, "validate", "--device", "synthetic_heavy_hex_27")
    assert code == 0
    info = json.loads(out)
    assert info["n_qubits"] == 27 and info["n_edges"] == 28 and info["connected"]


def test_validate_bad_device(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"qubits": [{"index": 0}], "edges": [{"pair": [0, 0], "error": 0, "duration": 1}]}))
    code, _, err = run_cli(capsys, "validate", "--device", str(p))
    assert code == 2
    assert json.loads(err)["error"] == "device"


def test_unknown_device_name(capsys):
    code, _, err = run_cli(capsys, "validate", "--device", "no_such_device")
    assert code == 2 and json.loads(err)["error"] == "device"


def test_chains_command(capsys):
    code, out, _ = run_cli(capsys, "chains", "--device", "synthetic_heavy_hex_27", "--nmax", "8", "--k", "2")
    assert code == 0
    res = json.loads(out)
    assert res["pruned_edges"] == [[1, 2], [22, 25]]
    assert len(res["chains"]) == 2 and all(len(c["qubits"]) == 8 for c in res["chains"])


@pytest.mark.parametrize("check", ["bounds", "families", "lemma", "crosstalk"])
def test_theory_command(capsys, check):
    code, out, _ = run_cli(capsys, "theory", "--check", check)
    res = json.loads(out)
    assert code == 0 and res["passed"] and res["check"] == check


def test_usage_errors(capsys):
    code, _, err = run_cli(capsys, "run", "not_a_campaign")
    assert code == 2 and json.loads(err)["error"] == "usage"
    code, _, err = run_cli(capsys, "theory")
    assert code == 2
    code, _, err = run_cli(capsys, "run", "lf_scan", "--seed", "-5")
    assert code == 2 and json.loads(err)["error"] == "config"


def test_config_campaign_mismatch(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"campaign": "figure4"}))
    code, _, err = run_cli(capsys, "run", "lf_scan", "--config", str(p))
    assert code == 2 and "figure4" in json.loads(err)["message"]


# -- lf_scan end to end -----------------------------------------------------------------


def _scan_config(tmp_path, device, out, **params):
    cfg = {"campaign": "lf_scan", "device": device, "rb": SMALL_RB, "out": str(out),
           "params": {"n_max": 5, "k": 1, **params}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


def test_lf_scan_noise_free_device(capsys, tmp_path):
    dev = device_file(tmp_path)
    out = tmp_path / "out"
    code, stdout, _ = run_cli(capsys, "run", "lf_scan", "--config", _scan_config(tmp_path, dev, out))
    assert code == 0 and json.loads(stdout)["failed_series"] == []
    res = json.loads((out / "results.json").read_text())["payload"]
    for row in res["subchains"]:
        assert row["LF"] == pytest.approx(1.0, abs=1e-12)
        assert row["EPLG"] == pytest.approx(0.0, abs=1e-12)
    assert {"results.json", "manifest.json", "lf_vs_n.csv", "eplg_vs_n.csv"} <= {p.name for p in out.iterdir()}


def test_lf_scan_selected_lengths_and_quantiles(tmp_path):
    dev = device_file(tmp_path, n=6, error=0.01, t1=100e-6)
    cfg = CampaignConfig.load(_scan_config(tmp_path, dev, tmp_path / "o", n_max=6, n_values=[2, 4, 6]))
    result = run_campaign(cfg, tmp_path / "o")
    assert [r["N"] for r in result.payload["subchains"]] == [2, 4, 6]
    lf = read_panel_csv(tmp_path / "o" / "lf_vs_n.csv")
    assert len(lf) == 3 and len(read_panel_csv(tmp_path / "o" / "eplg_vs_n.csv")) == 3
    q = result.payload["error_quantiles"]
    assert q["isolated"] == sorted(q["isolated"]) and q["layered"] == sorted(q["layered"])
    assert all(r["LF_err"] >= 0 for r in result.payload["subchains"])


def test_runs_are_bit_identical(capsys, tmp_path):
    dev = device_file(tmp_path, n=4, error=0.02, t1=80e-6)
    for name in ("a", "b"):
        cfg = _scan_config(tmp_path, dev, tmp_path / name, n_max=4)
        assert run_cli(capsys, "run", "lf_scan", "--config", cfg, "--seed", "11")[0] == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["seed"] == 11 and "out" not in manifest["config"]


def test_shots_override(capsys, tmp_path):
    dev = device_file(tmp_path, n=3, error=0.02)
    cfg = _scan_config(tmp_path, dev, tmp_path / "s", n_max=3)
    assert run_cli(capsys, "run", "lf_scan", "--config", cfg, "--shots", "200")[0] == 0
    manifest = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert manifest["config"]["rb"]["shots"] == 200


def test_resolve_device_builtin_and_path(tmp_path):
    assert len(resolve_device("synthetic_ladder_20").qubits) == 20
    assert len(resolve_device(device_file(tmp_path, n=3)).qubits) == 3


def test_window_enumeration_agrees_with_scan(rng):
    for _ in range(20):
        n = int(rng.integers(3, 12))
        qs = tuple(range(n))
        cf = ChainFidelities(qs, {(i, i + 1): float(rng.uniform(0.9, 1)) for i in range(n - 1)},
                             {q: float(rng.uniform(0.97, 1)) for q in qs})
        for N in range(2, n + 1):
            start, lf = best_window_by_enumeration(cf, N)
            r = best_subchain_lf(cf, N)
            assert start == r.start and lf == pytest.approx(r.LF, rel=1e-12)


def test_manifest_hashes_match(tmp_path):
    dev = device_file(tmp_path, n=3, error=0.02)
    cfg = CampaignConfig.load(_scan_config(tmp_path, dev, tmp_path / "m", n_max=3))
    run_campaign(cfg, tmp_path / "m")
    manifest = json.loads((tmp_path / "m" / "manifest.json").read_text())
    for name, digest in manifest["files"].items():
        assert hashlib.sha256((tmp_path / "m" / name).read_bytes()).hexdigest() == digest
    assert set(manifest["versions"]) >= {"numpy", "scipy", "layerfidelity"}
