#!/usr/bin/env python3
"""Regenerate the data series behind the shipped figure presets.

Each shipped preset (fig1 .. fig8) maps to one output table; this script
runs them all (or a selection) and writes one CSV per figure.  The
simulation-backed tables (fig1, fig2, fig3, fig6) take the longest; pass
--figures to regenerate a subset, e.g.::

    python scripts/reproduce_figures.py --outdir data --figures fig4 fig8
"""

import argparse
import json
import sys
import time
from pathlib import Path

from guardzone.config import PRESETS, load_config
from guardzone.experiments import emit, run_experiment

FIGURES = [name for name in PRESETS if name.startswith("fig")]


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, default=Path("figures-data"),
                        help="directory for the CSV tables (created if needed)")
    parser.add_argument("--figures", nargs="+", choices=FIGURES,
                        default=FIGURES, metavar="FIG",
                        help=f"subset to regenerate (default: all of {', '.join(FIGURES)})")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes for the simulation presets "
                             "(outputs do not depend on this)")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in args.figures:
        cfg = load_config(json.dumps({"preset": name}))
        start = time.perf_counter()
        table = run_experiment(cfg, threads=max(1, args.threads))
        payload = emit(table, "csv")
        target = args.outdir / f"{name}.csv"
        target.write_bytes(payload)
        print(f"{name}: {len(table.rows)} rows -> {target} "
              f"({time.perf_counter() - start:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
