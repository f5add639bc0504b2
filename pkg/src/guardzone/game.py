"""Guard radius versus deployment density as a two-player game.

The primary operator picks the guard radius r_g to maximize the
connection probability subject to the secrecy constraint
P_sec >= epsilon; the secondary operator picks the deployment density
lambda_s (up to the regulatory cap) to maximize the density of powered
receivers.  Strategies live on finite grids and the solver iterates best
responses until both repeat exactly.

Utilities are deterministic analytic quantities, so every best response
is an exact grid argmax; ties break toward the smaller strategy (the
grids are increasing, first occurrence wins).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analytic import (DEFAULT_QUAD, InfeasibleWarning, QuadratureSpec,
                       p_con, p_energy, p_sec)
from .params import SystemParams, validate

__all__ = [
    "StrategyGrid",
    "GameTrace",
    "GridBoundaryWarning",
    "utility_primary",
    "utility_secondary",
    "best_response_rg",
    "best_response_lambda",
    "solve_nash",
]


class GridBoundaryWarning(RuntimeWarning):
    """A best response landed on the upper grid edge; enlarge the grid."""


@dataclass
class StrategyGrid:
    """Finite strategy sets: guard radii (may include 0) and densities (> 0)."""

    rg_values: np.ndarray
    lambda_values: np.ndarray

    def __post_init__(self):
        self.rg_values = np.asarray(self.rg_values, dtype=float)
        self.lambda_values = np.asarray(self.lambda_values, dtype=float)
        for name, values in (("rg_values", self.rg_values),
                             ("lambda_values", self.lambda_values)):
            if values.ndim != 1 or values.size == 0:
                raise ValueError(f"{name} must be a nonempty 1-d array")
            if not np.all(np.isfinite(values)):
                raise ValueError(f"{name} must be finite")
            if values.size > 1 and not np.all(np.diff(values) > 0):
                raise ValueError(f"{name} must be strictly increasing")
        if self.rg_values[0] < 0:
            raise ValueError("guard radii must be nonnegative")
        if self.lambda_values[0] <= 0:
            raise ValueError("densities must be positive")

    @classmethod
    def default(cls, lambda_s_max: float, rg_max: float = 2.0,
                n: int = 64) -> "StrategyGrid":
        """The 64-point grids used throughout: r_g in [0, rg_max] and
        lambda_s in (0, lambda_s_max]."""
        return cls(np.linspace(0.0, rg_max, n),
                   np.linspace(lambda_s_max / n, lambda_s_max, n))


@dataclass
class GameTrace:
    """Best-response iteration record.

    ``iterations`` holds (iteration, r_g, lambda_s, u1, u2) tuples starting
    from the initial profile at iteration 0.  When ``converged`` the last
    two entries carry identical strategies and ``ne_point`` is that
    profile; a detected two-cycle sets ``cycle_detected`` instead.
    """

    iterations: list = field(default_factory=list)
    converged: bool = False
    ne_point: Optional[tuple] = None
    cycle_detected: bool = False


class _UtilityCache:
    """Memoized metric evaluations keyed by (r_g, lambda_s).

    Valid only while every other parameter is held fixed, which is the
    case within one solve / best-response sweep.
    """

    def __init__(self, params: SystemParams, quad: QuadratureSpec):
        self.params = params
        self.quad = quad
        self._psec: dict = {}
        self._pcon: dict = {}
        self._pen: dict = {}

    def _at(self, r_g: float, lambda_s: float) -> SystemParams:
        return self.params.replace(r_g=float(r_g), lambda_s=float(lambda_s))

    def psec(self, r_g: float, lambda_s: float) -> float:
        key = (r_g, lambda_s)
        if key not in self._psec:
            self._psec[key] = p_sec(self._at(r_g, lambda_s), self.quad)
        return self._psec[key]

    def pcon(self, r_g: float, lambda_s: float) -> float:
        key = (r_g, lambda_s)
        if key not in self._pcon:
            self._pcon[key] = p_con(self._at(r_g, lambda_s), self.quad).value
        return self._pcon[key]

    def penergy(self, r_g: float, lambda_s: float) -> float:
        key = (r_g, lambda_s)
        if key not in self._pen:
            self._pen[key] = p_energy(self._at(r_g, lambda_s), self.quad)
        return self._pen[key]


def utility_primary(r_g: float, lambda_s: float, params: SystemParams,
                    quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Connection probability when the secrecy constraint holds, else 0."""
    at = params.replace(r_g=float(r_g), lambda_s=float(lambda_s))
    if p_sec(at, quad) >= params.epsilon:
        return p_con(at, quad).value
    return 0.0


def utility_secondary(r_g: float, lambda_s: float, params: SystemParams,
                      quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Density of receivers meeting the harvesting target."""
    return p_energy(params.replace(r_g=float(r_g), lambda_s=float(lambda_s)),
                    quad)


def best_response_rg(lambda_s: float, params: SystemParams,
                     grid: StrategyGrid,
                     quad: QuadratureSpec = DEFAULT_QUAD, *,
                     _cache: Optional[_UtilityCache] = None) -> float:
    """Primary best response: the feasible radius with the highest
    connection probability.

    When no grid radius satisfies the secrecy constraint the radius with
    the highest secrecy probability is returned and a warning is raised;
    landing on the upper grid edge raises :class:`GridBoundaryWarning`.
    """
    cache = _cache if _cache is not None else _UtilityCache(params, quad)
    secrecy = np.array([cache.psec(r, lambda_s) for r in grid.rg_values])
    feasible = secrecy >= params.epsilon
    if feasible.any():
        utilities = np.where(
            feasible,
            [cache.pcon(r, lambda_s) if ok else 0.0
             for r, ok in zip(grid.rg_values, feasible)],
            -np.inf)
        idx = int(np.argmax(utilities))
    else:
        warnings.warn(
            f"no grid radius meets the secrecy target at lambda_s={lambda_s:g}; "
            "returning the radius with the highest secrecy probability",
            InfeasibleWarning, stacklevel=2)
        idx = int(np.argmax(secrecy))
    if idx == grid.rg_values.size - 1 and grid.rg_values.size > 1:
        warnings.warn("best-response radius landed on the grid boundary",
                      GridBoundaryWarning, stacklevel=2)
    return float(grid.rg_values[idx])


def best_response_lambda(r_g: float, params: SystemParams,
                         grid: StrategyGrid,
                         quad: QuadratureSpec = DEFAULT_QUAD, *,
                         _cache: Optional[_UtilityCache] = None) -> float:
    """Secondary best response: the density maximizing the powered-receiver
    density at the given guard radius."""
    if grid.lambda_values[-1] > params.lambda_s_max * (1.0 + 1e-12):
        raise ValueError("density grid exceeds lambda_s_max")
    cache = _cache if _cache is not None else _UtilityCache(params, quad)
    values = np.array([cache.penergy(r_g, lam) for lam in grid.lambda_values])
    return float(grid.lambda_values[int(np.argmax(values))])


def solve_nash(params: SystemParams, grid: Optional[StrategyGrid] = None,
               quad: QuadratureSpec = DEFAULT_QUAD, max_iter: int = 50,
               update: str = "simultaneous") -> GameTrace:
    """Iterate best responses from (r_g=0, lambda_s_max) until a fixed point.

    ``update="simultaneous"`` has both players respond to the previous
    profile; ``"sequential"`` lets the secondary react to the primary's
    fresh radius within the same iteration.  The trace records every
    profile with its utilities; a revisit of any earlier non-adjacent
    profile closes an orbit without a fixed point and is flagged as a
    cycle (coarse grids can orbit under simultaneous updates).
    """
    validate(params)
    if grid is None:
        grid = StrategyGrid.default(params.lambda_s_max)
    if update not in ("simultaneous", "sequential"):
        raise ValueError(f"unknown update rule {update!r}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    cache = _UtilityCache(params, quad)

    def u1(r, lam):
        return cache.pcon(r, lam) if cache.psec(r, lam) >= params.epsilon else 0.0

    def u2(r, lam):
        return cache.penergy(r, lam)

    rg, lam = 0.0, float(params.lambda_s_max)
    trace = GameTrace(iterations=[(0, rg, lam, u1(rg, lam), u2(rg, lam))])
    seen = {(rg, lam): 0}
    br_rg_memo: dict = {}
    br_lam_memo: dict = {}
    for it in range(1, max_iter + 1):
        if lam not in br_rg_memo:
            br_rg_memo[lam] = best_response_rg(lam, params, grid, quad,
                                               _cache=cache)
        rg_next = br_rg_memo[lam]
        rg_base = rg_next if update == "sequential" else rg
        if rg_base not in br_lam_memo:
            br_lam_memo[rg_base] = best_response_lambda(rg_base, params, grid,
                                                        quad, _cache=cache)
        lam_next = br_lam_memo[rg_base]
        trace.iterations.append((it, rg_next, lam_next,
                                 u1(rg_next, lam_next), u2(rg_next, lam_next)))
        if rg_next == rg and lam_next == lam:
            trace.converged = True
            trace.ne_point = (rg, lam)
            break
        if (rg_next, lam_next) in seen:
            # the dynamics revisited an earlier profile without settling,
            # so they orbit forever; report the cycle instead of burning
            # the remaining iteration budget
            trace.cycle_detected = True
            break
        seen[(rg_next, lam_next)] = it
        rg, lam = rg_next, lam_next
    return trace
