import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from detsieve.field import GF2_4, GF2_8, GF2_64, P31

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


@pytest.fixture(params=[GF2_4, GF2_8, GF2_64, P31], ids=lambda f: f.label)
def any_field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from support import ACCEPTANCE
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
