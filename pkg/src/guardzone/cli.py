"""Command line front end.

Subcommands pick the run mode (``analytic``, ``mc``, ``validate``,
``nash``, ``sweep``); the configuration comes from ``--config`` and/or
``--preset``, with ``--seed``, ``--out``, ``--format`` and ``--threads``
overriding individual settings.  Exit codes: 0 success, 2 configuration
error, 3 numerical failure during a non-sweep run.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .experiments import emit, run_experiment
from .params import ParameterError

_MODE_OF_COMMAND = {
    "analytic": "analytic",
    "mc": "montecarlo",
    "validate": "validate",
    "nash": "nash",
    "sweep": "sweep",
}

_COMMAND_HELP = {
    "analytic": "closed-form and quadrature metrics at one parameter point",
    "mc": "Monte Carlo estimates at one parameter point",
    "validate": "sweep with analytic and simulated values side by side",
    "nash": "best-response iteration to a grid Nash equilibrium",
    "sweep": "analytic metrics over a parameter grid",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guardzone",
        description="Coexistence metrics of a secrecy guard zone network "
                    "sharing spectrum with RF energy harvesters.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, mode_help in _COMMAND_HELP.items():
        cmd = sub.add_parser(name, help=mode_help)
        cmd.add_argument("--config", type=Path,
                         help="JSON configuration file")
        cmd.add_argument("--preset", type=str,
                         help="named preset providing defaults")
        cmd.add_argument("--out", type=Path, help="output path (default stdout)")
        cmd.add_argument("--format", choices=("csv", "jsonl"),
                         help="output format (default csv)")
        cmd.add_argument("--seed", type=int,
                         help="override the simulation seed")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker processes for simulations (results do "
                              "not depend on this)")
    return parser


def _effective_document(args) -> dict:
    doc: dict = {}
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("the top level must be a JSON object")
    if args.preset is not None:
        doc["preset"] = args.preset
    mode = _MODE_OF_COMMAND[args.command]
    stated = doc.get("mode")
    if stated is not None and stated != mode:
        raise ConfigError(
            f"config says mode {stated!r} but the {args.command} command "
            f"requires {mode!r}")
    doc["mode"] = mode
    if args.seed is not None:
        mc = doc.get("mc")
        doc["mc"] = dict(mc) if isinstance(mc, dict) else {}
        doc["mc"]["seed"] = args.seed
    if args.out is not None:
        doc["out"] = str(args.out)
    if args.format is not None:
        doc["format"] = args.format
    return doc


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc = _effective_document(args)
        cfg = load_config(json.dumps(doc))
    except (ConfigError, ParameterError) as exc:
        print(f"guardzone: {exc}", file=sys.stderr)
        return 2
    try:
        table = run_experiment(cfg, threads=max(1, args.threads))
        payload = emit(table, cfg.format)
    except Exception as exc:        # noqa: BLE001 - report and signal failure
        print(f"guardzone: {exc}", file=sys.stderr)
        return 3
    if cfg.out:
        Path(cfg.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
