from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from siegellab.elliptic import delta_qexp, e6_delta_qexp
from siegellab.theta import chi10

settings.register_profile("ci", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def chi10_8():
    return chi10(8)


@pytest.fixture(scope="session")
def chi10_16():
    return chi10(16)


@pytest.fixture(scope="session")
def chi10_20():
    return chi10(20)


@pytest.fixture(scope="session")
def tau729():
    return delta_qexp(729)


@pytest.fixture(scope="session")
def e6delta729():
    return e6_delta_qexp(729)
