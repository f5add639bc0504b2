import json

import pytest

from guardzone.config import (
    PRESETS,
    ConfigError,
    load_config,
)


def load(document: dict):
    return load_config(json.dumps(document))


def problems_of(document: dict):
    with pytest.raises(ConfigError) as err:
        load(document)
    return err.value.problems


MINIMAL_PARAMS = {
    "lambda_p": 1.0, "lambda_s": 0.6, "r_g": 0.3, "r_1": 0.1,
    "alpha": 4.0, "beta_p": 2.0, "beta_s": 1.0,
    "sigma2_p": 0.2, "sigma2_s": 0.33, "p_t": 1.0,
    "eta": 0.75, "e_min": 1e-4, "epsilon": 0.8, "lambda_s_max": 2.0,
}


class TestBaselinePreset:
    def test_exact_parameter_values(self):
        cfg = load({"preset": "paper-sec5", "mode": "analytic"})
        p = cfg.params
        assert p.lambda_p == 1.0
        assert p.lambda_s == 0.6
        assert p.r_g == 0.3
        assert p.r_1 == 0.1
        assert p.alpha == 4.0
        assert p.beta_p == 10.0 ** 0.3
        assert p.beta_s == 1.0
        assert p.sigma2_p == pytest.approx(10.0 ** -0.7, rel=1e-15)
        assert p.sigma2_s == pytest.approx(10.0 ** -0.48, rel=1e-15)
        assert p.p_t == 1.0
        assert p.eta == 0.75
        assert p.e_min == 1e-4
        assert p.epsilon == 0.8
        assert p.lambda_s_max == 2.0
        assert p.slot_t == 1.0

    def test_snr_round_trip(self):
        cfg = load({"preset": "paper-sec5", "mode": "analytic"})
        assert cfg.params.gamma_p == pytest.approx(10.0 ** 0.7, rel=1e-15)
        assert cfg.params.gamma_s == pytest.approx(10.0 ** 0.48, rel=1e-15)

    def test_user_values_override_preset(self):
        cfg = load({"preset": "paper-sec5", "mode": "analytic",
                    "params": {"lambda_s": 1.0}})
        assert cfg.params.lambda_s == 1.0
        assert cfg.params.r_g == 0.3

    def test_linear_override_displaces_preset_alias(self):
        # the preset states beta_p in dB; a linear value must replace it
        # outright instead of colliding with it
        cfg = load({"preset": "paper-sec5", "mode": "analytic",
                    "params": {"beta_p": 5.0}})
        assert cfg.params.beta_p == 5.0

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="available"):
            load({"preset": "fig99", "mode": "analytic"})

    def test_every_shipped_preset_loads(self):
        for name in PRESETS:
            doc = {"preset": name}
            if name == "paper-sec5":
                doc["mode"] = "analytic"
            cfg = load(doc)
            assert cfg.params.lambda_p == 1.0


class TestAliases:
    def test_gamma_aliases_scale_with_power(self):
        doc = {"mode": "analytic",
               "params": {**MINIMAL_PARAMS, "p_t": 2.0}}
        del doc["params"]["sigma2_p"]
        doc["params"]["gamma_p_db"] = 10.0
        cfg = load(doc)
        assert cfg.params.sigma2_p == pytest.approx(0.2, rel=1e-15)

    def test_alias_conflict_is_an_error(self):
        doc = {"mode": "analytic",
               "params": {**MINIMAL_PARAMS, "beta_p_db": 3.0}}
        assert any("conflicts" in p for p in problems_of(doc))

    def test_gamma_alias_requires_power(self):
        params = dict(MINIMAL_PARAMS)
        del params["p_t"], params["sigma2_s"]
        params["gamma_s_db"] = 4.8
        doc = {"mode": "analytic", "params": params}
        assert any("requires a positive p_t" in p for p in problems_of(doc))


class TestDocumentValidation:
    def test_not_json(self):
        with pytest.raises(ConfigError, match="JSON"):
            load_config("{mode: analytic")

    def test_top_level_must_be_object(self):
        with pytest.raises(ConfigError):
            load_config("[1, 2]")

    def test_unknown_top_level_key(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS, "outputs": "x.csv"}
        assert any("unknown top-level key" in p for p in problems_of(doc))

    def test_unknown_mode(self):
        doc = {"mode": "simulate", "params": MINIMAL_PARAMS}
        assert any("mode must be one of" in p for p in problems_of(doc))

    def test_params_required(self):
        assert any("params" in p for p in problems_of({"mode": "analytic"}))

    def test_unknown_parameter(self):
        doc = {"mode": "analytic",
               "params": {**MINIMAL_PARAMS, "lambda_q": 1.0}}
        assert any("lambda_q" in p for p in problems_of(doc))

    def test_missing_parameters_are_listed(self):
        params = dict(MINIMAL_PARAMS)
        del params["eta"], params["e_min"]
        doc = {"mode": "analytic", "params": params}
        probs = problems_of(doc)
        assert any("missing" in p and "eta" in p and "e_min" in p
                   for p in probs)

    def test_non_numeric_parameter(self):
        doc = {"mode": "analytic",
               "params": {**MINIMAL_PARAMS, "r_g": "big"}}
        assert any("must be a number" in p for p in problems_of(doc))

    def test_constraint_violations_surface(self):
        doc = {"mode": "analytic",
               "params": {**MINIMAL_PARAMS, "alpha": 2.0}}
        assert any("alpha" in p for p in problems_of(doc))

    def test_all_problems_reported_at_once(self):
        doc = {"mode": "simulate",
               "params": {**MINIMAL_PARAMS, "alpha": 2.0, "stray": 1},
               "format": "xml"}
        probs = problems_of(doc)
        assert len(probs) >= 3

    def test_invalid_format(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS, "format": "tsv"}
        assert any("format" in p for p in problems_of(doc))

    def test_out_must_be_string(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS, "out": 7}
        assert any("out" in p for p in problems_of(doc))


class TestSweepSection:
    def test_sweep_only_in_sweeping_modes(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS,
               "sweep": [{"param": "r_g", "values": [0.1, 0.2]}]}
        assert any("not allowed in analytic mode" in p for p in problems_of(doc))

    def test_axis_shape_enforced(self):
        doc = {"mode": "sweep", "params": MINIMAL_PARAMS,
               "sweep": [{"param": "r_g"}]}
        assert any("keys param, values" in p for p in problems_of(doc))

    def test_axis_parameter_must_exist(self):
        doc = {"mode": "sweep", "params": MINIMAL_PARAMS,
               "sweep": [{"param": "bogus", "values": [1.0]}]}
        assert any("not a parameter" in p for p in problems_of(doc))

    def test_axis_values_must_be_finite_numbers(self):
        doc = {"mode": "sweep", "params": MINIMAL_PARAMS,
               "sweep": [{"param": "r_g", "values": []}]}
        assert any("nonempty list" in p for p in problems_of(doc))

    def test_db_axes_are_allowed(self):
        doc = {"mode": "sweep", "params": MINIMAL_PARAMS,
               "sweep": [{"param": "gamma_s_db", "values": [1.8, 4.8]}]}
        cfg = load(doc)
        assert cfg.sweep[0].param == "gamma_s_db"
        assert cfg.sweep[0].values == (1.8, 4.8)


class TestMcSection:
    def test_required_for_simulation(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS}
        assert any("mc settings" in p for p in problems_of(doc))

    def test_seed_is_mandatory(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": 100}}
        assert any("mc.seed" in p for p in problems_of(doc))

    def test_n_must_be_positive_integer(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": 0.5, "seed": 1}}
        assert any("mc.n" in p for p in problems_of(doc))

    def test_booleans_are_not_integers(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": True, "seed": 1}}
        assert any("mc.n" in p for p in problems_of(doc))

    def test_unknown_setting(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": 10, "seed": 1, "threads": 4}}
        assert any("mc.threads" in p for p in problems_of(doc))

    def test_half_extent_positive(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": 10, "seed": 1, "half_extent": -2.0}}
        assert any("half_extent" in p for p in problems_of(doc))


class TestQuadGameMetricSections:
    def test_quad_passthrough(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS,
               "quad": {"rel_tol": 1e-8, "tail_policy": "truncation"}}
        cfg = load(doc)
        assert cfg.quad.rel_tol == 1e-8
        assert cfg.quad.tail_policy == "truncation"

    def test_quad_rejects_unknown_and_invalid(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS,
               "quad": {"rel_tol": -1.0, "nodes": 100}}
        probs = problems_of(doc)
        assert any("quad.nodes" in p for p in probs)
        assert any("rel_tol" in p for p in probs)

    def test_game_settings(self):
        doc = {"mode": "nash", "params": MINIMAL_PARAMS,
               "game": {"grid_points": 16, "update": "sequential"}}
        cfg = load(doc)
        assert cfg.game.grid_points == 16
        assert cfg.game.update == "sequential"
        assert cfg.game.rg_max == 2.0

    def test_game_update_rule_checked(self):
        doc = {"mode": "nash", "params": MINIMAL_PARAMS,
               "game": {"update": "gauss"}}
        assert any("game.update" in p for p in problems_of(doc))

    def test_metrics_default_by_mode(self):
        sim = load({"mode": "montecarlo", "params": MINIMAL_PARAMS,
                    "mc": {"n": 10, "seed": 1}})
        assert sim.metrics == ("p_con", "p_sec", "p_energy")
        ana = load({"mode": "analytic", "params": MINIMAL_PARAMS})
        assert ana.metrics == ("p_con", "p_sec", "p_energy")

    def test_simulation_metrics_restricted(self):
        doc = {"mode": "montecarlo", "params": MINIMAL_PARAMS,
               "mc": {"n": 10, "seed": 1},
               "metrics": ["threshold_a1"]}
        assert any("not available in montecarlo mode" in p
                   for p in problems_of(doc))

    def test_analytic_metrics_accept_derived_quantities(self):
        doc = {"mode": "analytic", "params": MINIMAL_PARAMS,
               "metrics": ["threshold_a1", "p_con_upper_bound"]}
        cfg = load(doc)
        assert cfg.metrics == ("threshold_a1", "p_con_upper_bound")

    def test_nash_mode_takes_no_metrics(self):
        doc = {"mode": "nash", "params": MINIMAL_PARAMS,
               "metrics": ["p_con"]}
        assert any("nash" in p for p in problems_of(doc))
