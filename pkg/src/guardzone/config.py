"""Experiment configuration: JSON documents, named presets, validation.

A configuration document is a JSON object with the top-level keys

``params``   system parameters; thresholds and noise levels may be given
             in dB through the aliases ``beta_p_db``, ``beta_s_db``,
             ``gamma_p_db`` and ``gamma_s_db`` (transmit SNRs, converted
             to noise powers via sigma2 = p_t / 10^(dB/10))
``mode``     one of analytic, montecarlo, validate, sweep, nash
``sweep``    list of axes {"param": name, "values": [...]}; the cartesian
             product is traversed with the first axis outermost
``mc``       {"n": int, "seed": int, "half_extent": optional float};
             required (with seed) whenever the mode runs simulations
``quad``     quadrature overrides (rel_tol, abs_tol, max_subdivisions,
             tail_policy)
``preset``   name of a preset merged underneath the document
``metrics``  metric names to tabulate (defaults depend on the mode)
``game``     {"rg_max", "grid_points", "max_iter", "update"} for the
             nash mode and the best-response sweep metrics
``out``      output path (stdout when absent)
``format``   "csv" (default) or "jsonl"

Validation is exhaustive: every problem found is reported in a single
:class:`ConfigError`, unknown keys anywhere are rejected.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analytic import QuadratureSpec
from .params import SystemParams, db_to_linear, violations

__all__ = [
    "ConfigError",
    "SweepAxis",
    "McSettings",
    "GameSettings",
    "ExperimentConfig",
    "load_config",
    "PRESETS",
]

MODES = ("analytic", "montecarlo", "validate", "sweep", "nash")

ANALYTIC_METRICS = (
    "p_active", "p_con", "p_sec", "p_energy",
    "p_con_noise_limited", "p_sec_noise_limited",
    "p_con_int_limited", "p_sec_int_limited",
    "p_energy_lower_bound", "threshold_a1", "p_con_upper_bound",
    "best_response_rg", "best_response_lambda",
)
MC_METRICS = ("p_con", "p_sec", "p_energy")

_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(SystemParams))
_DB_ALIASES = ("beta_p_db", "beta_s_db", "gamma_p_db", "gamma_s_db")
_ALIAS_TARGET = {"beta_p_db": "beta_p", "beta_s_db": "beta_s",
                 "gamma_p_db": "sigma2_p", "gamma_s_db": "sigma2_s"}

_TOP_KEYS = ("params", "mode", "sweep", "mc", "quad", "preset",
             "metrics", "game", "out", "format")


class ConfigError(ValueError):
    """Raised with the full list of configuration problems."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  - " +
                         "\n  - ".join(self.problems))


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple


@dataclass(frozen=True)
class McSettings:
    n: int
    seed: int
    half_extent: Optional[float] = None


@dataclass(frozen=True)
class GameSettings:
    rg_max: float = 2.0
    grid_points: int = 64
    max_iter: int = 50
    update: str = "simultaneous"


@dataclass(frozen=True)
class ExperimentConfig:
    params: SystemParams
    mode: str
    sweep: tuple = ()
    mc: Optional[McSettings] = None
    quad: QuadratureSpec = QuadratureSpec()
    metrics: tuple = ()
    game: GameSettings = GameSettings()
    out: Optional[str] = None
    format: str = "csv"


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def resolve_param_value(params_so_far: dict, key: str, value: float,
                        problems: Optional[list] = None):
    """Map a (possibly dB-aliased) assignment onto a SystemParams field.

    Returns (field_name, linear_value).  The transmit-SNR aliases need
    ``p_t``, looked up from ``params_so_far``.
    """
    if key in ("beta_p_db", "beta_s_db"):
        return _ALIAS_TARGET[key], db_to_linear(value)
    if key in ("gamma_p_db", "gamma_s_db"):
        p_t = params_so_far.get("p_t")
        if p_t is None or not _is_number(p_t) or p_t <= 0:
            if problems is not None:
                problems.append(f"params.{key} requires a positive p_t")
                return None
            raise ValueError(f"{key} requires a positive p_t")
        return _ALIAS_TARGET[key], p_t / db_to_linear(value)
    return key, value


def _resolve_params(raw, problems) -> Optional[SystemParams]:
    if not isinstance(raw, dict):
        problems.append("params must be an object")
        return None
    resolved: dict = {}
    for key, value in raw.items():
        if key not in _PARAM_FIELDS and key not in _DB_ALIASES:
            problems.append(f"params.{key} is not a known parameter")
            continue
        if not _is_number(value):
            problems.append(f"params.{key} must be a number")
            continue
        if key in _DB_ALIASES and _ALIAS_TARGET[key] in raw:
            problems.append(
                f"params.{key} conflicts with params.{_ALIAS_TARGET[key]}")
            continue
        if key in _PARAM_FIELDS:
            resolved[key] = float(value)
    # dB aliases second so gamma conversions can see p_t
    for key, value in raw.items():
        if key in _DB_ALIASES and _is_number(value) and _ALIAS_TARGET[key] not in raw:
            mapped = resolve_param_value(resolved, key, float(value), problems)
            if mapped is not None:
                resolved[mapped[0]] = mapped[1]
    required = [f for f in _PARAM_FIELDS if f != "slot_t"]
    missing = [f for f in required if f not in resolved]
    if missing:
        problems.append("params is missing " + ", ".join(missing))
        return None
    try:
        params = SystemParams(**resolved)
    except TypeError as exc:
        problems.append(str(exc))
        return None
    problems.extend(f"params.{v}" for v in violations(params))
    return params


def _resolve_sweep(raw, mode, problems):
    if raw is None:
        return ()
    if mode not in ("sweep", "validate"):
        problems.append(f"sweep is not allowed in {mode} mode")
        return ()
    if not isinstance(raw, list):
        problems.append("sweep must be a list of axes")
        return ()
    axes = []
    for k, axis in enumerate(raw):
        if not isinstance(axis, dict) or set(axis) != {"param", "values"}:
            problems.append(f"sweep[{k}] must be an object with keys param, values")
            continue
        name = axis["param"]
        if name not in _PARAM_FIELDS and name not in _DB_ALIASES:
            problems.append(f"sweep[{k}].param {name!r} is not a parameter")
            continue
        values = axis["values"]
        if (not isinstance(values, list) or not values
                or not all(_is_number(v) and np.isfinite(v) for v in values)):
            problems.append(f"sweep[{k}].values must be a nonempty list of finite numbers")
            continue
        axes.append(SweepAxis(name, tuple(float(v) for v in values)))
    return tuple(axes)


def _resolve_mc(raw, mode, problems) -> Optional[McSettings]:
    needs_mc = mode in ("montecarlo", "validate")
    if raw is None:
        if needs_mc:
            problems.append(f"mc settings (n, seed) are required in {mode} mode")
        return None
    if not isinstance(raw, dict):
        problems.append("mc must be an object")
        return None
    unknown = set(raw) - {"n", "seed", "half_extent"}
    for key in sorted(unknown):
        problems.append(f"mc.{key} is not a known setting")
    n = raw.get("n")
    seed = raw.get("seed")
    ok = True
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        problems.append("mc.n must be a positive integer")
        ok = False
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        problems.append("mc.seed must be a nonnegative integer "
                        "(required whenever simulations run)")
        ok = False
    half = raw.get("half_extent")
    if half is not None and (not _is_number(half) or half <= 0):
        problems.append("mc.half_extent must be a positive number")
        ok = False
    if not ok:
        return None
    return McSettings(n=n, seed=seed,
                      half_extent=None if half is None else float(half))


def _resolve_quad(raw, problems) -> QuadratureSpec:
    if raw is None:
        return QuadratureSpec()
    if not isinstance(raw, dict):
        problems.append("quad must be an object")
        return QuadratureSpec()
    known = {f.name for f in dataclasses.fields(QuadratureSpec)}
    unknown = set(raw) - known
    for key in sorted(unknown):
        problems.append(f"quad.{key} is not a known setting")
    try:
        return QuadratureSpec(**{k: v for k, v in raw.items() if k in known})
    except (TypeError, ValueError) as exc:
        problems.append(f"quad: {exc}")
        return QuadratureSpec()


def _resolve_game(raw, problems) -> GameSettings:
    if raw is None:
        return GameSettings()
    if not isinstance(raw, dict):
        problems.append("game must be an object")
        return GameSettings()
    known = {f.name for f in dataclasses.fields(GameSettings)}
    unknown = set(raw) - known
    for key in sorted(unknown):
        problems.append(f"game.{key} is not a known setting")
    merged = {k: v for k, v in raw.items() if k in known}
    settings = GameSettings(**merged)
    if settings.update not in ("simultaneous", "sequential"):
        problems.append("game.update must be simultaneous or sequential")
    if not isinstance(settings.grid_points, int) or settings.grid_points < 2:
        problems.append("game.grid_points must be an integer >= 2")
    if not _is_number(settings.rg_max) or settings.rg_max <= 0:
        problems.append("game.rg_max must be positive")
    if not isinstance(settings.max_iter, int) or settings.max_iter < 1:
        problems.append("game.max_iter must be a positive integer")
    return settings


def _resolve_metrics(raw, mode, problems):
    if mode == "nash":
        if raw is not None:
            problems.append("metrics are not applicable in nash mode")
        return ()
    if raw is None:
        return MC_METRICS if mode in ("montecarlo", "validate") else \
            ("p_con", "p_sec", "p_energy")
    if (not isinstance(raw, list) or not raw
            or not all(isinstance(m, str) for m in raw)):
        problems.append("metrics must be a nonempty list of names")
        return ()
    allowed = MC_METRICS if mode in ("montecarlo", "validate") else ANALYTIC_METRICS
    out = []
    for m in raw:
        if m not in allowed:
            problems.append(f"metric {m!r} is not available in {mode} mode")
        else:
            out.append(m)
    return tuple(out)


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if key == "params" and isinstance(value, dict) and isinstance(merged.get(key), dict):
            inner = dict(merged[key])
            # a dB alias and its linear target displace each other on merge
            for alias, target in _ALIAS_TARGET.items():
                if alias in value:
                    inner.pop(target, None)
                if target in value:
                    inner.pop(alias, None)
            inner.update(value)
            merged[key] = inner
        elif key in ("mc", "quad", "game") and isinstance(value, dict) and isinstance(merged.get(key), dict):
            inner = dict(merged[key])
            inner.update(value)
            merged[key] = inner
        else:
            merged[key] = value
    return merged


def load_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("the top level must be a JSON object")

    problems: list = []
    unknown = set(doc) - set(_TOP_KEYS)
    for key in sorted(unknown):
        problems.append(f"unknown top-level key {key!r}")

    preset = doc.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}")
        doc = _merge(PRESETS[preset], {k: v for k, v in doc.items() if k != "preset"})

    mode = doc.get("mode")
    if mode not in MODES:
        problems.append(f"mode must be one of {', '.join(MODES)} (got {mode!r})")
        mode = "analytic"           # placeholder so later checks still run

    params = _resolve_params(doc.get("params"), problems) \
        if "params" in doc else None
    if "params" not in doc:
        problems.append("params are required")
    sweep = _resolve_sweep(doc.get("sweep"), mode, problems)
    mc = _resolve_mc(doc.get("mc"), mode, problems)
    quad = _resolve_quad(doc.get("quad"), problems)
    game_settings = _resolve_game(doc.get("game"), problems)
    metrics = _resolve_metrics(doc.get("metrics"), mode, problems)

    fmt = doc.get("format", "csv")
    if fmt not in ("csv", "jsonl"):
        problems.append(f"format must be csv or jsonl (got {fmt!r})")
    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        problems.append("out must be a path string")

    if problems or params is None:
        raise ConfigError(problems or ["params are required"])
    return ExperimentConfig(params=params, mode=mode, sweep=sweep, mc=mc,
                            quad=quad, metrics=metrics, game=game_settings,
                            out=out, format=fmt)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _linspace(a: float, b: float, n: int) -> list:
    return [float(v) for v in np.linspace(a, b, n)]


# Baseline numerical study: unit transmitter density, 3 dB primary
# threshold at a 0.1 link, 0 dB eavesdropping threshold, 7 dB / 4.8 dB
# transmit SNRs, eta = 0.75, e_min = 1e-4, regulatory cap 2.
_BASELINE_PARAMS = {
    "lambda_p": 1.0, "lambda_s": 0.6, "r_g": 0.3, "r_1": 0.1,
    "alpha": 4.0, "beta_p_db": 3.0, "beta_s_db": 0.0,
    "gamma_p_db": 7.0, "gamma_s_db": 4.8,
    "p_t": 1.0, "eta": 0.75, "e_min": 1e-4,
    "epsilon": 0.8, "lambda_s_max": 2.0,
}

PRESETS: dict = {
    "paper-sec5": {
        "params": dict(_BASELINE_PARAMS),
    },
    # connection probability against the guard radius, three densities
    "fig1": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "validate",
        "metrics": ["p_con"],
        "sweep": [
            {"param": "lambda_s", "values": [0.3, 0.6, 1.0]},
            {"param": "r_g", "values": _linspace(0.0, 1.4, 8)},
        ],
        "mc": {"n": 100000, "seed": 20260814},
    },
    # secrecy probability against the guard radius, three eavesdropper SNRs
    "fig2": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "validate",
        "metrics": ["p_sec"],
        "sweep": [
            {"param": "gamma_s_db", "values": [1.8, 4.8, 7.8]},
            {"param": "r_g", "values": _linspace(0.1, 1.5, 8)},
        ],
        "mc": {"n": 10000, "seed": 20260814},
    },
    # secrecy probability against the guard radius, three receiver densities
    "fig3": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "validate",
        "metrics": ["p_sec"],
        "sweep": [
            {"param": "lambda_s", "values": [0.3, 0.6, 1.0]},
            {"param": "r_g", "values": _linspace(0.1, 1.5, 8)},
        ],
        "mc": {"n": 10000, "seed": 20260814},
    },
    # secrecy probability and its noise/interference-limited regimes
    "fig4": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "sweep",
        "metrics": ["p_sec", "p_sec_noise_limited", "p_sec_int_limited"],
        "sweep": [
            {"param": "gamma_s_db", "values": [1.8, 4.8, 7.8]},
            {"param": "r_g", "values": _linspace(0.0, 1.5, 32)},
        ],
    },
    "fig5": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "sweep",
        "metrics": ["p_sec", "p_sec_noise_limited", "p_sec_int_limited"],
        "sweep": [
            {"param": "lambda_s", "values": [0.3, 0.6, 1.0]},
            {"param": "r_g", "values": _linspace(0.0, 1.5, 32)},
        ],
    },
    # powered-receiver density against the deployment density
    "fig6": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "validate",
        "metrics": ["p_energy"],
        "sweep": [
            {"param": "r_g", "values": [0.4, 0.6, 0.8, 1.0]},
            {"param": "lambda_s", "values": _linspace(0.125, 2.0, 16)},
        ],
        "mc": {"n": 10000, "seed": 20260814},
    },
    # best-response curves of both players
    "fig7": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "sweep",
        "metrics": ["best_response_rg", "best_response_lambda"],
        "sweep": [
            {"param": "lambda_s", "values": _linspace(0.125, 2.0, 16)},
            {"param": "r_g", "values": _linspace(0.0, 2.0, 16)},
        ],
    },
    # best-response iteration to the equilibrium of the baseline study
    "fig8": {
        "params": dict(_BASELINE_PARAMS),
        "mode": "nash",
    },
}
