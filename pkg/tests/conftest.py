import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from diffeq_relay.signals import SamplingConfig

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def cfg_2k():
    """2 kHz on a 60 Hz system, 200 samples."""
    return SamplingConfig(f0=60.0, fs=2000.0, n_samples=200)


@pytest.fixture
def cfg_12():
    return SamplingConfig.per_cycle(12, f0=60.0, n_samples=48)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
