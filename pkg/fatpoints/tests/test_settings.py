import pytest
from pydantic import ValidationError

from fatpoints.services.errors import CoincidentPointsError, FatPointsError, PreconditionError, UsageError
from fatpoints.services.settings import DEFAULT_PRIME, Settings


def test_defaults():
    settings = Settings()
    assert settings.prime == DEFAULT_PRIME
    assert settings.seed == 0
    assert settings.trials == 3
    assert settings.cap == 5000
    assert settings.cache_path is None
    assert settings.log_level == "WARNING"


def test_from_env(monkeypatch):
    monkeypatch.setenv("FATPOINTS_PRIME", "101")
    monkeypatch.setenv("FATPOINTS_TRIALS", "5")
    monkeypatch.setenv("FATPOINTS_LOG_LEVEL", "info")
    monkeypatch.setenv("FATPOINTS_CACHE", "")
    settings = Settings.from_env()
    assert settings.prime == 101
    assert settings.trials == 5
    assert settings.log_level == "INFO"
    assert settings.cache_path is None


def test_rejects_composite_modulus():
    with pytest.raises(ValidationError):
        Settings(prime=1000000)


def test_rejects_unknown_level():
    with pytest.raises(ValidationError):
        Settings(log_level="LOUD")


def test_override_ignores_missing_flags():
    settings = Settings(seed=4).override(seed=None, trials=1, prime=None)
    assert settings.seed == 4
    assert settings.trials == 1
    assert settings.prime == DEFAULT_PRIME


def test_error_hierarchy():
    assert issubclass(CoincidentPointsError, PreconditionError)
    assert issubclass(PreconditionError, ValueError)
    assert issubclass(UsageError, FatPointsError)
