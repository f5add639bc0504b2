"""Spatial Monte Carlo estimators for the three coexistence metrics.

Geometry
--------
Realizations live on a square torus of half extent ``L``; by default
``L = max(10, r_1 + 10 r_g, R_int)`` where ``R_int`` bounds the truncated
interference mass of the connection metric at 1e-4.  The wrap removes the
edge bias of a finite sampling window, and the defaults keep the residual
truncation error well below the tolerances used in the validation runs.

Randomness
----------
Realization ``i`` under root ``seed`` draws from the dedicated stream
``SeedSequence(seed, spawn_key=(code, i))`` with code 1 (connection),
2 (secrecy) or 3 (energy).  Aggregation sums integer success counts, so
results are bit-identical for any worker count.  Per realization, the
stream is consumed in this exact order:

connection (code 1)
    transmitter count, transmitter x's, transmitter y's, receiver count,
    receiver x's, receiver y's.  If the typical transmitter is silenced
    the realization ends; otherwise the typical-link gain, then one gain
    per *active* interferer in index order.

secrecy (code 2)
    transmitter count, transmitter x's, transmitter y's, receiver count,
    then per receiver uniform (x, y) pairs rejected until outside the
    guard ball.  Then per receiver in index order: its gain from the
    typical transmitter and, only when receiver noise alone cannot rule
    out decoding, one gain per active transmitter in index order.  The
    realization ends at the first decoding receiver.

energy (code 3)
    transmitter count, transmitter x's, transmitter y's, other-receiver
    count, their x's, their y's, then one harvesting gain drawn only when
    an active transmitter exists.

:func:`realize_scene` materializes the same stream, so a scene with
``index=i`` reproduces realization ``i`` of the matching estimator bit
for bit; gains never reached by the lazy draw rules above are NaN in the
scene arrays.
"""

from __future__ import annotations

import math
import multiprocessing
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .params import SystemParams, validate
from .pointprocess import Point, PointPattern, Window, substream

__all__ = [
    "Estimate",
    "SceneRealization",
    "MonteCarloWarning",
    "realize_scene",
    "connection_indicator",
    "secrecy_indicator",
    "energy_indicator",
    "estimate_p_con",
    "estimate_p_sec",
    "estimate_p_energy",
]

_CODE_CON = 1
_CODE_SEC = 2
_CODE_EN = 3

_Z95 = 1.959963984540054

_CONDITIONS = ("none", "typical_pt_active", "typical_er")


class MonteCarloWarning(RuntimeWarning):
    """Estimator-side diagnostics, e.g. windows with no active transmitter."""


@dataclass(frozen=True)
class Estimate:
    """A simulation estimate with a 95% normal-approximation half width.

    ``value`` is the raw success frequency (scaled by ``lambda_s`` for the
    energy metric, whose target is a density).  When either success or
    failure counts drop below 30 the half width switches to the Wilson
    interval, which stays honest next to the boundaries.
    """

    value: float
    half_width_95: float
    n: int


@dataclass
class SceneRealization:
    """One materialized realization for inspection and reference tests.

    ``pts`` carries the primary transmitters with their guard-zone
    activity mask; ``ers`` the energy receivers.  Fading entries are NaN
    whenever the matching estimator would never have drawn them (the
    draws are lazy and order-documented; see the module docstring).
    """

    condition: str
    pts: PointPattern
    ers: PointPattern
    typical_anchor: Point
    typical_active: bool = True
    h1: float = math.nan
    h: np.ndarray = field(default_factory=lambda: np.empty(0))
    g1: np.ndarray = field(default_factory=lambda: np.empty(0))
    g: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    w: float = math.nan
    receiver: Optional[Point] = None


def _noise_over_pt(sigma2: float, p_t: float) -> float:
    if sigma2 == 0.0:
        return 0.0
    if p_t == 0.0:
        return math.inf
    return sigma2 / p_t


def _interference_radius(params: SystemParams) -> float:
    """Radius beyond which the expected truncated interference mass of the
    connection metric stays under 1e-4 (exponential fading, mean 1)."""
    if params.lambda_p <= 0.0 or params.beta_p <= 0.0 or params.r_1 <= 0.0:
        return 0.0
    s = params.beta_p * params.r_1 ** params.alpha
    return (2.0 * math.pi * params.lambda_p * s
            / ((params.alpha - 2.0) * 1e-4)) ** (1.0 / (params.alpha - 2.0))


def _window_for(params: SystemParams, half_extent: Optional[float] = None) -> Window:
    if half_extent is None:
        half_extent = max(10.0, params.r_1 + 10.0 * params.r_g,
                          _interference_radius(params))
    half_extent = float(half_extent)
    floor = 5.0 * max(params.r_g, params.r_1)
    if half_extent < floor:
        raise ValueError(
            f"window too small: half extent {half_extent:g} is below "
            f"5*max(r_g, r_1) = {floor:g}")
    return Window(half_extent, wrap=True)


def _binomial_estimate(successes: int, n: int) -> tuple[float, float]:
    p = successes / n
    if min(successes, n - successes) >= 30:
        hw = _Z95 * math.sqrt(p * (1.0 - p) / n)
    else:
        # Wilson interval half width around the raw frequency
        z2 = _Z95 * _Z95
        denom = 1.0 + z2 / n
        hw = (_Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))) / denom
    return p, hw


# ---------------------------------------------------------------------------
# scene construction (python mirror of the kernels)
# ---------------------------------------------------------------------------

def _torus_d2_py(x1, y1, x2, y2, side):
    # statement-for-statement mirror of the kernel metric
    dx = abs(x1 - x2)
    alt = side - dx
    if alt < dx:
        dx = alt
    dy = abs(y1 - y2)
    alt = side - dy
    if alt < dy:
        dy = alt
    return dx * dx + dy * dy


def _any_within_py(x, y, r2, xs, ys, side):
    if xs.size == 0:
        return False
    dx = np.abs(xs - x)
    np.minimum(dx, side - dx, out=dx)
    dy = np.abs(ys - y)
    np.minimum(dy, side - dy, out=dy)
    return bool((dx * dx + dy * dy < r2).any())


def realize_scene(params: SystemParams, seed, condition: str = "none",
                  index: int = 0) -> SceneRealization:
    """Materialize realization ``index`` of the estimator stream ``condition``.

    condition "none" is the connection setup (typical transmitter at the
    center, receiver at distance r_1), "typical_pt_active" the secrecy
    setup (receivers excluded from the guard ball), "typical_er" the
    harvesting setup (the typical receiver at the center carves too).
    """
    validate(params)
    if condition not in _CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; expected one of {_CONDITIONS}")
    window = _window_for(params)
    half = window.half_extent
    side = 2.0 * half
    area = side * side
    code = {"none": _CODE_CON, "typical_pt_active": _CODE_SEC,
            "typical_er": _CODE_EN}[condition]
    rng = substream(seed, code, index)

    n_pt = int(rng.poisson(params.lambda_p * area))
    pt_x = rng.random(n_pt) * side - half
    pt_y = rng.random(n_pt) * side - half

    rg2 = params.r_g * params.r_g
    if condition == "typical_pt_active":
        n_er = int(rng.poisson(params.lambda_s * (area - np.pi * rg2)))
        er_x = np.empty(n_er)
        er_y = np.empty(n_er)
        for j in range(n_er):
            while True:
                x = rng.random() * side - half
                y = rng.random() * side - half
                if x * x + y * y >= rg2:
                    er_x[j] = x
                    er_y[j] = y
                    break
    else:
        n_er = int(rng.poisson(params.lambda_s * area))
        er_x = rng.random(n_er) * side - half
        er_y = rng.random(n_er) * side - half

    if condition == "typical_er":
        hole_x = np.append(er_x, 0.0)
        hole_y = np.append(er_y, 0.0)
    else:
        hole_x, hole_y = er_x, er_y
    carve = params.r_g > 0.0 and hole_x.size > 0
    active = np.ones(n_pt, dtype=bool)
    if carve:
        for i in range(n_pt):
            if _any_within_py(pt_x[i], pt_y[i], rg2, hole_x, hole_y, side):
                active[i] = False

    scene = SceneRealization(
        condition=condition,
        pts=PointPattern(window, np.column_stack([pt_x, pt_y]) if n_pt else np.empty((0, 2)),
                         active_mask=active),
        ers=PointPattern(window, np.column_stack([er_x, er_y]) if n_er else np.empty((0, 2))),
        typical_anchor=Point(0.0, 0.0),
    )

    if condition == "none":
        scene.receiver = Point(params.r_1, 0.0)
        scene.typical_active = not (carve and _any_within_py(0.0, 0.0, rg2,
                                                             er_x, er_y, side))
        scene.h = np.full(n_pt, np.nan)
        if scene.typical_active:
            scene.h1 = float(rng.exponential(1.0))
            for i in range(n_pt):
                if active[i]:
                    scene.h[i] = rng.exponential(1.0)
    elif condition == "typical_pt_active":
        noise = _noise_over_pt(params.sigma2_s, params.p_t)
        scene.g1 = np.full(n_er, np.nan)
        scene.g = np.full((n_pt, n_er), np.nan)
        for j in range(n_er):
            g1 = float(rng.exponential(1.0))
            scene.g1[j] = g1
            d2 = er_x[j] * er_x[j] + er_y[j] * er_y[j]
            signal = g1 * d2 ** (-0.5 * params.alpha)
            if signal < params.beta_s * noise:
                continue
            interference = 0.0
            for i in range(n_pt):
                if active[i]:
                    g = rng.exponential(1.0)
                    scene.g[i, j] = g
                    di2 = _torus_d2_py(er_x[j], er_y[j], pt_x[i], pt_y[i], side)
                    interference += g * di2 ** (-0.5 * params.alpha)
            if signal >= params.beta_s * (interference + noise):
                break               # estimator stops at the first decoder
    else:
        if active.any():
            scene.w = float(rng.exponential(1.0))
    return scene


# ---------------------------------------------------------------------------
# indicators recomputed from a scene (reference implementations)
# ---------------------------------------------------------------------------

def _active_mask_of(pattern: PointPattern) -> np.ndarray:
    if pattern.active_mask is None:
        return np.ones(pattern.n, dtype=bool)
    return pattern.active_mask


def connection_indicator(scene: SceneRealization, params: SystemParams) -> bool:
    """Typical-link success recomputed from stored geometry and gains."""
    if not scene.typical_active:
        return False
    side = scene.pts.window.side
    noise = _noise_over_pt(params.sigma2_p, params.p_t)
    signal = scene.h1 * (params.r_1 * params.r_1) ** (-0.5 * params.alpha)
    interference = 0.0
    xy = scene.pts.xy
    mask = _active_mask_of(scene.pts)
    for i in range(xy.shape[0]):
        if mask[i]:
            d2 = _torus_d2_py(xy[i, 0], xy[i, 1], params.r_1, 0.0, side)
            interference += scene.h[i] * d2 ** (-0.5 * params.alpha)
    return bool(signal >= params.beta_p * (interference + noise))


def secrecy_indicator(scene: SceneRealization, params: SystemParams) -> bool:
    """True when no receiver in the scene can decode the typical transmitter."""
    side = scene.pts.window.side
    noise = _noise_over_pt(params.sigma2_s, params.p_t)
    pxy = scene.pts.xy
    mask = _active_mask_of(scene.pts)
    exy = scene.ers.xy
    for j in range(exy.shape[0]):
        d2 = exy[j, 0] * exy[j, 0] + exy[j, 1] * exy[j, 1]
        signal = scene.g1[j] * d2 ** (-0.5 * params.alpha)
        if signal < params.beta_s * noise:
            continue
        interference = 0.0
        for i in range(pxy.shape[0]):
            if mask[i]:
                di2 = _torus_d2_py(exy[j, 0], exy[j, 1], pxy[i, 0], pxy[i, 1], side)
                interference += scene.g[i, j] * di2 ** (-0.5 * params.alpha)
        if signal >= params.beta_s * (interference + noise):
            return False
    return True


def energy_indicator(scene: SceneRealization, params: SystemParams) -> bool:
    """True when the typical receiver harvests at least e_min in one slot."""
    side = scene.pts.window.side
    xy = scene.pts.xy
    mask = _active_mask_of(scene.pts)
    best_d2 = -1.0
    for i in range(xy.shape[0]):
        if mask[i]:
            d2 = _torus_d2_py(xy[i, 0], xy[i, 1], 0.0, 0.0, side)
            if best_d2 < 0.0 or d2 < best_d2:
                best_d2 = d2
    if best_d2 < 0.0:
        return False
    rate = params.e_min / (params.p_t * params.eta * params.slot_t)
    return bool(scene.w >= rate * best_d2 ** (0.5 * params.alpha))


# ---------------------------------------------------------------------------
# counting loops (top level so worker processes can import them)
# ---------------------------------------------------------------------------

def _count_con(params, seed, half, start, stop):
    noise = _noise_over_pt(params.sigma2_p, params.p_t)
    total = 0
    for i in range(start, stop):
        rng = substream(seed, _CODE_CON, i)
        total += _kernels.pcon_realization(
            rng, params.lambda_p, params.lambda_s, params.r_g, params.r_1,
            params.alpha, params.beta_p, noise, half)
    return int(total), 0


def _count_sec(params, seed, half, start, stop):
    noise = _noise_over_pt(params.sigma2_s, params.p_t)
    total = 0
    for i in range(start, stop):
        rng = substream(seed, _CODE_SEC, i)
        total += _kernels.psec_realization(
            rng, params.lambda_p, params.lambda_s, params.r_g,
            params.alpha, params.beta_s, noise, half)
    return int(total), 0


def _count_energy(params, seed, half, start, stop):
    rate = params.e_min / (params.p_t * params.eta * params.slot_t)
    total = 0
    missing = 0
    for i in range(start, stop):
        rng = substream(seed, _CODE_EN, i)
        success, seen = _kernels.penergy_realization(
            rng, params.lambda_p, params.lambda_s, params.r_g,
            params.alpha, rate, half)
        total += success
        missing += 1 - seen
    return int(total), int(missing)


def _spawn_counts(counter, params, n, seed, half, workers):
    if workers <= 1 or n < 2:
        return counter(params, seed, half, 0, n)
    # compile in the parent so forked workers inherit the jitted kernels
    counter(params, seed, half, 0, 1)
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        return counter(params, seed, half, 0, n)
    workers = min(workers, n)
    bounds = np.linspace(0, n, workers + 1).astype(int)
    jobs = [(params, seed, half, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        parts = list(pool.map(_run_job, [(counter.__name__, job) for job in jobs]))
    return (sum(p[0] for p in parts), sum(p[1] for p in parts))


def _run_job(payload):
    name, job = payload
    return globals()[name](*job)


def _prepare(params: SystemParams, n: int, half_extent) -> float:
    validate(params)
    if n < 1:
        raise ValueError("n must be at least 1")
    return _window_for(params, half_extent).half_extent


def estimate_p_con(params: SystemParams, n: int, seed, *, workers: int = 1,
                   half_extent: Optional[float] = None) -> Estimate:
    """Estimate the connection probability of the typical primary link."""
    half = _prepare(params, n, half_extent)
    successes, _ = _spawn_counts(_count_con, params, n, seed, half, workers)
    value, hw = _binomial_estimate(successes, n)
    return Estimate(value, hw, n)


def estimate_p_sec(params: SystemParams, n: int, seed, *, workers: int = 1,
                   half_extent: Optional[float] = None) -> Estimate:
    """Estimate the secrecy probability of the typical active transmitter."""
    half = _prepare(params, n, half_extent)
    successes, _ = _spawn_counts(_count_sec, params, n, seed, half, workers)
    value, hw = _binomial_estimate(successes, n)
    return Estimate(value, hw, n)


def estimate_p_energy(params: SystemParams, n: int, seed, *, workers: int = 1,
                      half_extent: Optional[float] = None) -> Estimate:
    """Estimate the density of receivers meeting the harvesting target.

    The indicator frequency is scaled by ``lambda_s``.  Realizations with
    no active transmitter anywhere in the window count as failures; when
    they exceed 1% of the sample a warning flags the estimate as
    window-limited.
    """
    half = _prepare(params, n, half_extent)
    successes, missing = _spawn_counts(_count_energy, params, n, seed, half,
                                       workers)
    if missing > 0.01 * n:
        warnings.warn(
            f"{missing} of {n} realizations contained no active transmitter; "
            "the estimate is limited by the sampling window",
            MonteCarloWarning, stacklevel=2)
    p, hw = _binomial_estimate(successes, n)
    return Estimate(params.lambda_s * p, params.lambda_s * hw, n)
