"""Scenario parameters shared by every metric, simulation, and solver.

The model has two coexisting networks on the plane.  The *primary* network
is a Poisson field of transmitter-receiver pairs (density ``lambda_p``);
each transmitter protects its link with a guard zone of radius ``r_g`` and
stays silent whenever an energy receiver sits inside that zone.  The
*secondary* network is a Poisson field of RF energy receivers (density
``lambda_s``, capped at ``lambda_s_max``) that harvest from the nearest
active transmitter but can also attempt to decode, which is why the
primary side treats them as potential eavesdroppers.

Everything here is normalized and unitless: ``lambda_p = 1`` anchors the
spatial scale, powers are linear ratios, and dB values are converted at
the configuration boundary (see :func:`db_to_linear`) so the formula layer
never sees decibels.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """A parameter set violates one or more model constraints.

    Carries the complete list of violations so callers can report every
    problem at once instead of discovering them one by one.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def db_to_linear(x_db: float) -> float:
    """Convert a decibel quantity to a linear ratio, ``10**(x_db / 10)``."""
    if not math.isfinite(x_db):
        raise ValueError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Inverse of :func:`db_to_linear`; requires a positive finite ratio."""
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"linear value must be positive and finite, got {x!r}")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SystemParams:
    """Static description of one coexistence scenario.

    Thresholds (``beta_p``, ``beta_s``) and powers are linear-scale.
    Instances are immutable; derive variants with :meth:`replace`.
    """

    lambda_p: float        # density of primary transmitters [nodes per unit area]
    lambda_s: float        # density of energy receivers [nodes per unit area]
    r_g: float             # guard-zone radius kept free of energy receivers
    r_1: float             # distance from a transmitter to its own receiver
    alpha: float           # path-loss exponent, must exceed 2
    beta_p: float          # SINR threshold for successful primary reception
    beta_s: float          # SINR threshold above which an energy receiver could decode
    sigma2_p: float        # noise power at the primary receiver
    sigma2_s: float        # noise power at an energy receiver
    p_t: float             # primary transmit power
    eta: float             # RF-to-DC conversion efficiency, in (0, 1]
    e_min: float           # minimum energy a receiver must harvest per slot
    epsilon: float         # required secrecy probability level, in (0, 1]
    lambda_s_max: float    # regulatory cap on the energy-receiver density
    slot_t: float = 1.0    # slot duration; harvested energy scales linearly with it

    @property
    def gamma_p(self) -> float:
        """Transmit SNR of the primary link, ``p_t / sigma2_p``."""
        return self.p_t / self.sigma2_p if self.sigma2_p > 0 else math.inf

    @property
    def gamma_s(self) -> float:
        """Transmit SNR seen by an energy receiver, ``p_t / sigma2_s``."""
        return self.p_t / self.sigma2_s if self.sigma2_s > 0 else math.inf

    def replace(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced."""
        return dataclasses.replace(self, **changes)


# Fields that must be finite and non-negative.  alpha, eta, epsilon carry
# stricter range constraints and are handled separately below.
_NONNEGATIVE_FIELDS = (
    "lambda_p", "lambda_s", "r_g", "r_1", "beta_p", "beta_s",
    "sigma2_p", "sigma2_s", "p_t", "e_min", "lambda_s_max", "slot_t",
)


def violations(params: SystemParams) -> list[str]:
    """Return every constraint violated by ``params`` (empty when valid)."""
    found: list[str] = []
    for name in _NONNEGATIVE_FIELDS:
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            found.append(f"{name} must be a finite number, got {value!r}")
        elif value < 0:
            found.append(f"{name} must be >= 0, got {value!r}")
    if not (isinstance(params.alpha, (int, float)) and math.isfinite(params.alpha)
            and params.alpha > 2):
        found.append(f"alpha must exceed 2, got {params.alpha!r}")
    if not (isinstance(params.eta, (int, float)) and 0 < params.eta <= 1):
        found.append(f"eta must be in (0,1], got {params.eta!r}")
    if not (isinstance(params.epsilon, (int, float)) and 0 < params.epsilon <= 1):
        found.append(f"epsilon must be in (0,1], got {params.epsilon!r}")
    if (isinstance(params.lambda_s, (int, float))
            and isinstance(params.lambda_s_max, (int, float))
            and math.isfinite(params.lambda_s) and math.isfinite(params.lambda_s_max)
            and params.lambda_s > params.lambda_s_max):
        found.append(
            f"lambda_s must not exceed lambda_s_max "
            f"({params.lambda_s!r} > {params.lambda_s_max!r})"
        )
    return found


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged if every constraint holds.

    Raises :class:`ParameterError` carrying the complete violation list
    otherwise; there is no partial acceptance.
    """
    found = violations(params)
    if found:
        raise ParameterError(found)
    return params
