"""Shared fixtures and hypothesis settings for the suite."""

import json

import pytest
from hypothesis import HealthCheck, settings

from guardzone.config import load_config

# Property tests call quadrature-backed metrics; wall-clock deadlines only
# produce flaky failures on loaded machines.
settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def baseline_params():
    """The shipped baseline operating point (paper-sec5 preset)."""
    doc = json.dumps({"preset": "paper-sec5", "mode": "analytic"})
    return load_config(doc).params
