import shutil
import tempfile
from dataclasses import asdict

import pytest
from hypothesis import HealthCheck, settings

from config import config
from hfset import EMPTY, hf
from realizability import CodeUniverse

settings.register_profile('desk', max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('desk')


@pytest.fixture
def temp_dir():
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path, ignore_errors=True)


@pytest.fixture
def override_config():
    """Apply config overrides for one test; the global config is restored afterwards."""
    saved = asdict(config)
    yield config.apply
    config.apply(saved)


@pytest.fixture
def universe():
    return CodeUniverse(rank=2, seeds=(0, 1))


@pytest.fixture
def small_sets():
    """∅, {∅}, {{∅}} and {∅, {∅}}"""
    return [EMPTY, hf(EMPTY), hf(hf(EMPTY)), hf(EMPTY, hf(EMPTY))]
