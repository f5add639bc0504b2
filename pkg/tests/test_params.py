import dataclasses
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from guardzone.params import (
    ParameterError,
    SystemParams,
    db_to_linear,
    linear_to_db,
    validate,
    violations,
)


def make_params(**overrides) -> SystemParams:
    base = dict(
        lambda_p=1.0, lambda_s=0.6, r_g=0.3, r_1=0.1, alpha=4.0,
        beta_p=2.0, beta_s=1.0, sigma2_p=0.2, sigma2_s=0.33, p_t=1.0,
        eta=0.75, e_min=1e-4, epsilon=0.8, lambda_s_max=2.0,
    )
    base.update(overrides)
    return SystemParams(**base)


class TestDbConversion:
    def test_known_values(self):
        assert db_to_linear(0.0) == 1.0
        assert db_to_linear(3.0) == 10.0 ** 0.3
        assert db_to_linear(-10.0) == pytest.approx(0.1, rel=1e-15)
        assert linear_to_db(100.0) == pytest.approx(20.0, abs=1e-12)

    @given(st.floats(min_value=-80.0, max_value=80.0))
    def test_round_trip(self, x_db):
        assert linear_to_db(db_to_linear(x_db)) == pytest.approx(x_db, abs=1e-10)

    def test_rejects_nonfinite_db(self):
        with pytest.raises(ValueError):
            db_to_linear(math.inf)

    def test_rejects_nonpositive_linear(self):
        with pytest.raises(ValueError):
            linear_to_db(0.0)
        with pytest.raises(ValueError):
            linear_to_db(-1.0)


class TestSystemParams:
    def test_frozen(self):
        p = make_params()
        with pytest.raises(dataclasses.FrozenInstanceError):
            p.r_g = 1.0

    def test_replace_returns_new_instance(self):
        p = make_params()
        q = p.replace(r_g=0.5)
        assert q.r_g == 0.5
        assert p.r_g == 0.3
        assert q.lambda_s == p.lambda_s

    def test_snr_properties(self):
        p = make_params(p_t=2.0, sigma2_p=0.5, sigma2_s=0.25)
        assert p.gamma_p == 4.0
        assert p.gamma_s == 8.0
        assert make_params(sigma2_p=0.0).gamma_p == math.inf

    def test_slot_t_defaults_to_one(self):
        assert make_params().slot_t == 1.0

    def test_hashable_for_memo_keys(self):
        assert hash(make_params()) == hash(make_params())


class TestValidation:
    def test_valid_has_no_violations(self, baseline_params):
        assert violations(baseline_params) == []
        assert validate(baseline_params) is baseline_params

    def test_negative_density(self):
        found = violations(make_params(lambda_p=-1.0))
        assert len(found) == 1
        assert "lambda_p" in found[0]

    def test_alpha_must_exceed_two(self):
        assert violations(make_params(alpha=2.0))
        assert violations(make_params(alpha=1.5))
        assert not violations(make_params(alpha=2.0 + 1e-9))

    def test_eta_epsilon_ranges(self):
        assert violations(make_params(eta=0.0))
        assert violations(make_params(eta=1.2))
        assert not violations(make_params(eta=1.0))
        assert violations(make_params(epsilon=0.0))
        assert not violations(make_params(epsilon=1.0))

    def test_density_cap(self):
        found = violations(make_params(lambda_s=3.0, lambda_s_max=2.0))
        assert any("lambda_s_max" in msg for msg in found)

    def test_nonfinite_rejected(self):
        assert violations(make_params(r_g=math.nan))
        assert violations(make_params(p_t=math.inf))

    def test_validate_collects_all_problems(self):
        p = make_params(lambda_p=-1.0, alpha=2.0, eta=0.0)
        with pytest.raises(ParameterError) as err:
            validate(p)
        assert len(err.value.violations) == 3
        # the exception message carries every problem, joined
        for field in ("lambda_p", "alpha", "eta"):
            assert field in str(err.value)

    @given(
        lambda_s=st.floats(min_value=0.0, max_value=2.0),
        r_g=st.floats(min_value=0.0, max_value=3.0),
        alpha=st.floats(min_value=2.1, max_value=6.0),
        eta=st.floats(min_value=1e-6, max_value=1.0),
    )
    def test_in_range_parameters_always_pass(self, lambda_s, r_g, alpha, eta):
        p = make_params(lambda_s=lambda_s, r_g=r_g, alpha=alpha, eta=eta)
        assert violations(p) == []
