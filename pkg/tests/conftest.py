import os

import pytest
from hypothesis import HealthCheck, settings

# numerical properties are slow per example; keep the profile modest
settings.register_profile(
    "klgamma", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "klgamma"))


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def relerr():
    return rel
