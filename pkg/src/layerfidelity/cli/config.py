"""Campaign configuration files and their validation."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

CAMPAIGNS = ("lf_scan", "figure4", "figure5", "figure6", "mirror_compare", "layer_count_sweep",
             "gamma_compare", "theory_check")


class ConfigError(ValueError):
    pass


_depths = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 4}
_num_list = {"type": "array", "items": {"type": "number"}}

PARAMS_SCHEMAS = {
    "lf_scan": {
        "n_max": {"type": "integer", "minimum": 2},
        "k": {"type": "integer", "minimum": 1},
        "prune_ratio": {"type": "number", "exclusiveMinimum": 0},
        "decoherence": {"type": "boolean"},
        "n_values": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "figure4": {
        "durations": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
        "mirror_depths": _depths,
        "panels": {"type": "array", "items": {"enum": ["top", "bottom"]}},
    },
    "figure5": {
        "xi_khz": _num_list,
        "mirror_depths": _depths,
        "panels": {"type": "array", "items": {"enum": ["top", "middle", "bottom"]}},
        "middle_xi_khz": _num_list,
        "bottom_xi_khz": _num_list,
    },
    "figure6": {
        "scenarios": {"type": "array", "items": {"enum": list("abcdefghi")}},
        "mirror_depths": _depths,
        "exact_samples": {"type": "integer", "minimum": 0},
    },
    "mirror_compare": {
        "mirror_depths": _depths,
        "exact_samples": {"type": "integer", "minimum": 0},
        "xi_khz": {"type": "number", "minimum": 0},
    },
    "layer_count_sweep": {
        "n_qubits": {"type": "integer", "minimum": 3, "maximum": 40},
        "n_layers": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
    "gamma_compare": {
        "n_qubits": {"type": "integer", "minimum": 2, "maximum": 40},
        "max_error": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
    },
    "theory_check": {
        "n_random_channels": {"type": "integer", "minimum": 0},
        "n_lemma_cases": {"type": "integer", "minimum": 0},
        "grid_points": {"type": "integer", "minimum": 2},
    },
}

# Defaults follow the simulation settings of the corresponding figures.
DEFAULTS = {
    "lf_scan": {"device": "synthetic_ladder_20", "noise": None,
                "rb": {"depths": [4, 10, 20, 40, 80, 150], "randomizations": 8, "shots": 0},
                "params": {"n_max": 20, "k": 1, "prune_ratio": 1.25, "decoherence": False}},
    "figure4": {"noise": "decoherence",
                "rb": {"depths": [1, 10, 20, 40, 80, 150, 250], "randomizations": 10, "shots": 0},
                "params": {"durations": [5, 8], "mirror_depths": [2, 4, 8, 16, 32, 48, 64],
                           "panels": ["top", "bottom"]}},
    "figure5": {"noise": "decoherence",
                "rb": {"depths": [1, 10, 20, 40, 80, 150, 250], "randomizations": 10, "shots": 0},
                "params": {"xi_khz": [0, 50, 100, 150, 200, 300], "middle_xi_khz": [0, 50, 100, 150],
                           "bottom_xi_khz": [0, 150], "mirror_depths": [2, 4, 6, 8, 12, 16, 24, 32],
                           "panels": ["top", "middle", "bottom"]}},
    "figure6": {"noise": "decoherence",
                "rb": {"depths": [1, 10, 20, 40, 80, 150, 250], "randomizations": 30, "shots": 0},
                "params": {"scenarios": list("abcdefghi"), "mirror_depths": [2, 4, 6, 8, 12, 16, 24, 32],
                           "exact_samples": 0}},
    "mirror_compare": {"noise": "decoherence",
                       "rb": {"depths": [1, 10, 20, 40, 80, 150, 250], "randomizations": 10, "shots": 0},
                       "params": {"mirror_depths": [2, 4, 8, 16, 32, 48, 64], "exact_samples": 0,
                                  "xi_khz": 0}},
    "layer_count_sweep": {"noise": "decoherence",
                          "rb": {"depths": [4, 10, 20, 40, 80, 150], "randomizations": 6, "shots": 0},
                          "params": {"n_qubits": 11, "n_layers": [2, 4, 6, 10]}},
    "gamma_compare": {"noise": None,
                      "rb": {"depths": [4, 10, 20, 40, 80, 150], "randomizations": 8, "shots": 0},
                      "params": {"n_qubits": 16, "max_error": 1e-2}},
    "theory_check": {"noise": None, "rb": None,
                     "params": {"n_random_channels": 10000, "n_lemma_cases": 100, "grid_points": 41}},
}

CAMPAIGN_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["campaign"],
    "properties": {
        "campaign": {"enum": list(CAMPAIGNS)},
        "device": {"type": ["string", "null"]},
        "noise": {"type": ["string", "null"]},
        "rb": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "properties": {
                "depths": _depths,
                "randomizations": {"type": "integer", "minimum": 1},
                "shots": {"type": "integer", "minimum": 0},
            },
        },
        "out": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "workers": {"type": "integer", "minimum": 1},
        "unit_time": {"type": "number", "exclusiveMinimum": 0},
        "params": {"type": "object"},
    },
}


@dataclass(frozen=True)
class CampaignConfig:
    campaign: str
    device: str | None = None
    noise: str | None = None
    rb: dict | None = None
    out: str = "out"
    seed: int = 0
    workers: int = 1
    unit_time: float = 50e-9
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        """Validate, then fill unspecified fields from the campaign defaults."""
        _validate(data, CAMPAIGN_SCHEMA, "config")
        kind = data["campaign"]
        params_schema = {"type": "object", "additionalProperties": False, "properties": PARAMS_SCHEMAS[kind]}
        _validate(data.get("params", {}), params_schema, "params")
        d = copy.deepcopy(DEFAULTS[kind])
        merged = {"campaign": kind, "device": d.get("device"), "noise": d.get("noise"), "rb": d.get("rb"),
                  "params": d.get("params", {})}
        for key in ("device", "noise", "out", "seed", "workers", "unit_time"):
            if key in data:
                merged[key] = data[key]
        if data.get("rb") is not None:
            merged["rb"] = {**(merged["rb"] or {}), **data["rb"]}
        merged["params"] = {**merged["params"], **data.get("params", {})}
        return cls(**merged)

    @classmethod
    def load(cls, path) -> "CampaignConfig":
        p = Path(path)
        try:
            data = json.loads(p.read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file {p} not found") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {p} is not valid JSON (line {exc.lineno}: {exc.msg})") from None
        return cls.from_dict(data)

    def replace(self, **changes) -> "CampaignConfig":
        d = self.to_dict()
        d.update(changes)
        return CampaignConfig(**d)

    def to_dict(self) -> dict:
        return {"campaign": self.campaign, "device": self.device, "noise": self.noise,
                "rb": copy.deepcopy(self.rb), "out": self.out, "seed": self.seed, "workers": self.workers,
                "unit_time": self.unit_time, "params": copy.deepcopy(self.params)}


def _validate(data, schema, what: str) -> None:
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{what} invalid at {path}: {exc.message}") from None
