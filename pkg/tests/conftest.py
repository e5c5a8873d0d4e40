from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from congames.es_core import set_max_configs

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _reset_ceiling():
    yield
    set_max_configs(None)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
