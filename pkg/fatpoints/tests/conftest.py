import pytest

from fatpoints.engines.interpolation_engine import InterpolationEngine
from fatpoints.services.settings import Settings


@pytest.fixture
def settings():
    return Settings()


@pytest.fixture
def engine(settings):
    return InterpolationEngine(settings)
