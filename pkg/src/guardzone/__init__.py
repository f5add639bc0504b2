"""Coexistence analysis of a secrecy-guard-zone network and RF energy harvesters.

Primary transmitters stay silent whenever an energy receiver sits inside
their guard radius, which trades the primary link's connection
probability against the secrecy of its transmissions and the harvesting
opportunities of the secondary network.  The package computes the three
coupled metrics in closed/quadrature form, cross-validates them against
spatial simulation, and solves the guard-radius versus deployment-density
game by best-response iteration.
"""

from .analytic import (DEFAULT_QUAD, DivergenceWarning, InfeasibleWarning,
                       MetricBreakdown, QuadratureError, QuadratureSpec,
                       interference_exponent, lambda_star_lower_bound,
                       laplace_interference, p_active, p_con,
                       p_con_int_limited, p_con_noise_limited,
                       p_con_upper_bound, p_energy, p_energy_lower_bound,
                       p_sec, p_sec_int_limited, p_sec_noise_limited,
                       rg_star_noise_limited, threshold_a1,
                       unconstrained_optimal_rg, upper_incomplete_gamma)
from .config import (ConfigError, ExperimentConfig, GameSettings, McSettings,
                     PRESETS, SweepAxis, load_config)
from .experiments import Table, emit, run_experiment
from .game import (GameTrace, GridBoundaryWarning, StrategyGrid,
                   best_response_lambda, best_response_rg, solve_nash,
                   utility_primary, utility_secondary)
from .montecarlo import (Estimate, MonteCarloWarning, SceneRealization,
                         connection_indicator, energy_indicator,
                         estimate_p_con, estimate_p_energy, estimate_p_sec,
                         realize_scene, secrecy_indicator)
from .params import (ParameterError, SystemParams, db_to_linear,
                     linear_to_db, validate, violations)
from .pointprocess import (Point, PointPattern, Window, carve_php,
                           contact_distance_pdf, nearest_distance, sample_ppp,
                           substream)

__version__ = "0.1.0"

__all__ = [
    "SystemParams", "ParameterError", "db_to_linear", "linear_to_db",
    "validate", "violations",
    "Point", "PointPattern", "Window", "sample_ppp", "carve_php",
    "nearest_distance", "contact_distance_pdf", "substream",
    "QuadratureSpec", "QuadratureError", "MetricBreakdown", "DEFAULT_QUAD",
    "DivergenceWarning", "InfeasibleWarning",
    "upper_incomplete_gamma", "laplace_interference", "interference_exponent",
    "p_active", "p_con", "threshold_a1", "unconstrained_optimal_rg",
    "p_con_upper_bound", "p_sec", "p_con_noise_limited",
    "p_sec_noise_limited", "rg_star_noise_limited", "p_con_int_limited",
    "p_sec_int_limited", "p_energy", "p_energy_lower_bound",
    "lambda_star_lower_bound",
    "Estimate", "SceneRealization", "MonteCarloWarning", "realize_scene",
    "connection_indicator", "secrecy_indicator", "energy_indicator",
    "estimate_p_con", "estimate_p_sec", "estimate_p_energy",
    "StrategyGrid", "GameTrace", "GridBoundaryWarning", "utility_primary",
    "utility_secondary", "best_response_rg", "best_response_lambda",
    "solve_nash",
    "ConfigError", "ExperimentConfig", "McSettings", "SweepAxis",
    "GameSettings", "PRESETS", "load_config",
    "Table", "run_experiment", "emit",
]
