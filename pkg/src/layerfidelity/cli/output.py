"""Result, plot-data and manifest writers.

Plot CSVs have the columns ``series,x,y,yerr``: one row per point, the
series label first. The manifest records the resolved config, seed,
library versions and a SHA-256 of every output file. Nothing time- or
host-dependent is written (not even the output directory), so identical
configs give identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import platform
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from .. import __version__
from .campaigns import CampaignOutput, PlotRow
from .config import CampaignConfig

CSV_COLUMNS = ("series", "x", "y", "yerr")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def panel_csv(rows) -> str:
    """CSV text for one panel; an empty panel is just the header."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        x = r.x if isinstance(r.x, str) else repr(float(r.x))
        w.writerow([r.series, x, repr(float(r.y)), repr(float(r.yerr))])
    return buf.getvalue()


def read_panel_csv(path) -> list[PlotRow]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        try:
            x = float(r["x"])
        except ValueError:
            x = r["x"]
        out.append(PlotRow(r["series"], x, float(r["y"]), float(r["yerr"])))
    return out


def emit_plot_data(panels: dict, out_dir) -> list[Path]:
    """Write ``<panel>.csv`` for every panel into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in sorted(panels):
        p = out_dir / f"{name}.csv"
        p.write_text(panel_csv(panels[name]))
        paths.append(p)
    return paths


def versions() -> dict:
    return {"layerfidelity": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "jsonschema": metadata.version("jsonschema"),
            "python": platform.python_version()}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_outputs(cfg: CampaignConfig, result: CampaignOutput, out_dir) -> dict:
    """``results.json``, one CSV per panel and ``manifest.json``; returns the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = out_dir / "results.json"
    results.write_text(dumps({"campaign": cfg.campaign, "payload": result.payload, "errors": result.errors}))
    files = [results] + emit_plot_data(result.panels, out_dir)
    manifest = {
        "campaign": cfg.campaign,
        "config": {k: v for k, v in cfg.to_dict().items() if k != "out"},
        "seed": cfg.seed,
        "versions": versions(),
        "failed_series": len(result.errors),
        "files": {p.name: _sha256(p) for p in files},
    }
    (out_dir / "manifest.json").write_text(dumps(manifest))
    return manifest
