"""
Runtime settings, read from the environment (and a local .env file).
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator
from sympy import isprime

load_dotenv()

DEFAULT_PRIME = 1000003


class Settings(BaseModel):
    prime: int = Field(default=DEFAULT_PRIME, ge=2, le=(1 << 62))
    seed: int = Field(default=0, ge=0)
    trials: int = Field(default=3, ge=1)
    cap: int = Field(default=5000, ge=1)
    workers: int = Field(default=1, ge=1)
    cache_path: Optional[str] = None
    log_level: str = "WARNING"
    max_resamples: int = Field(default=8, ge=1)

    @field_validator("prime")
    @classmethod
    def _prime_is_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"modulus {value} is not prime")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from FATPOINTS_* variables; unset ones keep defaults"""
        env = {
            'prime': os.getenv('FATPOINTS_PRIME'),
            'seed': os.getenv('FATPOINTS_SEED'),
            'trials': os.getenv('FATPOINTS_TRIALS'),
            'cap': os.getenv('FATPOINTS_CAP'),
            'workers': os.getenv('FATPOINTS_WORKERS'),
            'cache_path': os.getenv('FATPOINTS_CACHE'),
            'log_level': os.getenv('FATPOINTS_LOG_LEVEL'),
            'max_resamples': os.getenv('FATPOINTS_MAX_RESAMPLES'),
        }
        return cls(**{key: value for key, value in env.items() if value not in (None, "")})

    def override(self, **changes) -> "Settings":
        """Apply CLI overrides; None means 'not given'"""
        given = {key: value for key, value in changes.items() if value is not None}
        return self.model_validate({**self.model_dump(), **given})
