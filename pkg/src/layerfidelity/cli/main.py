"""Command-line entry point.

Every failure exits nonzero and prints ``{"error": ..., "message": ...}``
on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..topology import DeviceError, find_candidate_chains, prune_long_gates
from ..topology.device import DEFAULT_PRUNE_RATIO
from .campaigns import CAMPAIGN_RUNNERS, resolve_device
from .config import CAMPAIGNS, CampaignConfig, ConfigError
from .output import dumps, write_outputs
from .theory import CHECKS, run_check

EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="layerfidelity", description="Layer fidelity benchmarking campaigns and tools.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a benchmark campaign")
    run.add_argument("campaign", choices=CAMPAIGNS)
    run.add_argument("--config", help="campaign JSON; omitted fields take the campaign defaults")
    run.add_argument("--out", help="output directory")
    run.add_argument("--seed", type=int, help="64-bit master seed")
    run.add_argument("--shots", type=int, help="sample this many shots per circuit instead of exact probabilities")
    run.add_argument("--workers", type=int, help="worker processes for simulation")

    ch = sub.add_parser("chains", help="candidate chains on a device")
    ch.add_argument("--device", required=True, help="device JSON file or built-in name")
    ch.add_argument("--nmax", type=int, required=True)
    ch.add_argument("--k", type=int, default=3)
    ch.add_argument("--prune-ratio", type=float, default=DEFAULT_PRUNE_RATIO)

    th = sub.add_parser("theory", help="numerical theory checks")
    th.add_argument("--check", required=True, choices=CHECKS)
    th.add_argument("--seed", type=int, default=0)

    va = sub.add_parser("validate", help="validate a device file")
    va.add_argument("--device", required=True)
    return p


def _config(args) -> CampaignConfig:
    if args.config:
        cfg = CampaignConfig.load(args.config)
        if cfg.campaign != args.campaign:
            raise ConfigError(f"config is for campaign {cfg.campaign!r}, not {args.campaign!r}")
    else:
        cfg = CampaignConfig.from_dict({"campaign": args.campaign})
    changes = {}
    if args.out is not None:
        changes["out"] = args.out
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.workers is not None:
        changes["workers"] = args.workers
    if args.shots is not None:
        changes["rb"] = {**(cfg.rb or {}), "shots": args.shots}
    # re-validate so command-line overrides obey the same schema as files
    return CampaignConfig.from_dict({**cfg.to_dict(), **changes}) if changes else cfg


def cmd_run(args) -> int:
    cfg = _config(args)
    result = CAMPAIGN_RUNNERS[cfg.campaign](cfg)
    manifest = write_outputs(cfg, result, cfg.out)
    print(dumps({"out": cfg.out, "files": sorted(manifest["files"]), "failed_series": result.errors}), end="")
    return 0


def cmd_chains(args) -> int:
    device = resolve_device(args.device)
    pruned = prune_long_gates(device, args.prune_ratio)
    cands = find_candidate_chains(pruned, args.nmax, args.k)
    print(dumps({"device": device.name, "n_max": args.nmax,
                 "pruned_edges": sorted(set(e.pair for e in device.edges) - set(e.pair for e in pruned.edges)),
                 "chains": [c.to_dict() for c in cands]}), end="")
    return 0


def cmd_theory(args) -> int:
    res = run_check(args.check, args.seed)
    print(dumps(res), end="")
    return 0 if res["passed"] else EXIT_FAILED_CHECK


def cmd_validate(args) -> int:
    device = resolve_device(args.device)
    print(dumps({"valid": True, "name": device.name, "n_qubits": len(device.qubits), "n_edges": len(device.edges),
                 "max_degree": device.max_degree, "connected": device.is_connected()}), end="")
    return 0


COMMANDS = {"run": cmd_run, "chains": cmd_chains, "theory": cmd_theory, "validate": cmd_validate}


def _fail(kind: str, exc: Exception, code: int) -> int:
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_USAGE)
    except DeviceError as exc:
        return _fail("device", exc, EXIT_USAGE)
    except (ValueError, KeyError, OSError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
