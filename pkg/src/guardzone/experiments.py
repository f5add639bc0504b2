"""Experiment execution: sweep tables, validation runs, and serialization.

``run_experiment`` turns a validated :class:`~.config.ExperimentConfig`
into a :class:`Table`; ``emit`` serializes a table to CSV (RFC 4180,
floats at 12 significant digits) or JSON lines.  Sweep rows fail softly:
a numerical or parameter problem lands in the row's ``error`` column and
the sweep continues.  Single-point modes propagate the exception instead.

Output is deterministic for a given configuration; simulation columns do
not depend on the worker count (integer success counts are summed).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass

from . import analytic, montecarlo
from .config import ExperimentConfig, resolve_param_value
from .game import StrategyGrid, best_response_lambda, best_response_rg, solve_nash
from .params import SystemParams, validate

__all__ = ["Table", "run_experiment", "emit"]


@dataclass
class Table:
    columns: list
    rows: list


def _apply_assignments(params: SystemParams, assignments) -> SystemParams:
    """Override parameters with swept values (dB aliases resolved after the
    linear fields so a swept p_t feeds the SNR conversions)."""
    linear = {k: v for k, v in assignments if not k.endswith("_db")}
    updated = params.replace(**linear) if linear else params
    for key, value in assignments:
        if key.endswith("_db"):
            name, resolved = resolve_param_value(
                {"p_t": updated.p_t}, key, value)
            updated = updated.replace(**{name: resolved})
    return validate(updated)


def _grid_for(cfg: ExperimentConfig, params: SystemParams) -> StrategyGrid:
    return StrategyGrid.default(params.lambda_s_max, rg_max=cfg.game.rg_max,
                                n=cfg.game.grid_points)


def _analytic_value(name: str, params: SystemParams, cfg: ExperimentConfig,
                    memo: dict) -> float:
    quad = cfg.quad
    if name == "p_active":
        return analytic.p_active(params.lambda_s, params.r_g)
    if name == "p_con":
        return analytic.p_con(params, quad).value
    if name == "p_sec":
        return analytic.p_sec(params, quad)
    if name == "p_energy":
        return analytic.p_energy(params, quad)
    if name == "p_con_noise_limited":
        return analytic.p_con_noise_limited(params)
    if name == "p_sec_noise_limited":
        return analytic.p_sec_noise_limited(params)
    if name == "p_con_int_limited":
        return analytic.p_con_int_limited(params)
    if name == "p_sec_int_limited":
        return analytic.p_sec_int_limited(params, quad)
    if name == "p_energy_lower_bound":
        return analytic.p_energy_lower_bound(params, quad)
    if name == "threshold_a1":
        return analytic.threshold_a1(params)
    if name == "p_con_upper_bound":
        return analytic.p_con_upper_bound(params)
    if name == "best_response_rg":
        key = ("br_rg", params.replace(r_g=0.0))
        if key not in memo:
            memo[key] = best_response_rg(params.lambda_s, params,
                                         _grid_for(cfg, params), quad)
        return memo[key]
    if name == "best_response_lambda":
        key = ("br_lam", params.replace(lambda_s=params.lambda_s_max))
        if key not in memo:
            memo[key] = best_response_lambda(params.r_g, params,
                                             _grid_for(cfg, params), quad)
        return memo[key]
    raise ValueError(f"unknown metric {name!r}")


_MC_ESTIMATORS = {
    "p_con": montecarlo.estimate_p_con,
    "p_sec": montecarlo.estimate_p_sec,
    "p_energy": montecarlo.estimate_p_energy,
}


def _check_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise ValueError(f"non-finite result for {name}")
    return float(value)


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> Table:
    if cfg.mode == "nash":
        return _run_nash(cfg)

    axis_names = [axis.param for axis in cfg.sweep]
    columns = list(axis_names)
    for metric in cfg.metrics:
        if cfg.mode in ("analytic", "sweep"):
            columns.append(metric)
        elif cfg.mode == "montecarlo":
            columns += [f"mc_{metric}", f"mc_{metric}_half_width"]
        else:   # validate
            columns += [metric, f"mc_{metric}", f"mc_{metric}_half_width",
                        f"abs_diff_{metric}"]
    columns.append("error")

    memo: dict = {}
    rows = []
    combos = itertools.product(*[axis.values for axis in cfg.sweep]) \
        if cfg.sweep else [()]
    for combo in combos:
        cells = list(combo)
        try:
            params = _apply_assignments(cfg.params, list(zip(axis_names, combo)))
            for metric in cfg.metrics:
                if cfg.mode in ("analytic", "sweep"):
                    cells.append(_check_finite(
                        metric, _analytic_value(metric, params, cfg, memo)))
                    continue
                if cfg.mode == "validate":
                    reference = _check_finite(
                        metric, _analytic_value(metric, params, cfg, memo))
                    cells.append(reference)
                estimate = _MC_ESTIMATORS[metric](
                    params, cfg.mc.n, cfg.mc.seed, workers=threads,
                    half_extent=cfg.mc.half_extent)
                cells += [_check_finite(f"mc_{metric}", estimate.value),
                          _check_finite(f"mc_{metric}_half_width",
                                        estimate.half_width_95)]
                if cfg.mode == "validate":
                    cells.append(abs(reference - estimate.value))
            cells.append("")
        except Exception as exc:        # noqa: BLE001 - row-local failure
            if not cfg.sweep:
                raise
            message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            cells = list(combo) + [None] * (len(columns) - len(combo) - 1)
            cells.append(message)
        rows.append(cells)
    return Table(columns, rows)


def _run_nash(cfg: ExperimentConfig) -> Table:
    grid = _grid_for(cfg, cfg.params)
    trace = solve_nash(cfg.params, grid, cfg.quad,
                       max_iter=cfg.game.max_iter, update=cfg.game.update)
    columns = ["iteration", "r_g", "lambda_s", "u1", "u2", "converged"]
    rows = [[it, rg, lam, u1, u2, trace.converged]
            for it, rg, lam, u1, u2 in trace.iterations]
    return Table(columns, rows)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("NaN and infinities are not representable in the "
                             "CSV output; map them to the error column")
        return f"{value:.12g}"
    return str(value)


def emit(table: Table, fmt: str = "csv") -> bytes:
    """Serialize a table; CSV quoting per RFC 4180, floats at 12 digits."""
    if not table.rows:
        raise ValueError("refusing to emit an empty table")
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n",
                            quoting=csv.QUOTE_MINIMAL)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buffer.getvalue().encode()
    if fmt == "jsonl":
        lines = []
        for row in table.rows:
            record = dict(zip(table.columns, row))
            lines.append(json.dumps(record, allow_nan=False))
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown output format {fmt!r}")
