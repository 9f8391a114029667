"""Shared fixtures and hypothesis profiles"""
import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

# Add src directory to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from core.trace_model import DistributedSignal, Signal  # noqa: E402
from helpers.cache import get_cache  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.register_profile(
    "acceptance", max_examples=1000, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def two_pulses_signal() -> DistributedSignal:
    """x1 rises at 2 and falls at 5, x2 rises at 3 and falls at 6; d = 8, ε = 2"""
    return DistributedSignal(
        (Signal("x1", 0, ((2, 1), (5, 0))), Signal("x2", 0, ((3, 1), (6, 0)))),
        duration=8, epsilon=2,
    )


@pytest.fixture
def two_pulses() -> DistributedSignal:
    return two_pulses_signal()


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture(autouse=True)
def fresh_cache():
    get_cache().clear()
    yield
