"""
Runtime configuration for the hypergraph operad engine.

Settings are read from the environment (prefix ``HYPEROPERAD_``) and from an
optional ``.env`` file; command line flags override them.
"""

import hashlib
import logging
from pathlib import Path
from typing import Tuple

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from . import __version__


logger = logging.getLogger(__name__)

load_dotenv()


def source_digest(root: Path = Path(__file__).parent) -> str:
    """SHA-256 over the package sources, in file name order."""
    digest = hashlib.sha256()
    for path in sorted(root.glob("*.py")):
        digest.update(path.name.encode("utf-8"))
        digest.update(path.read_bytes())
    return digest.hexdigest()


# cache entries written by other sources are never read back
CODE_VERSION = f"{__version__}+{source_digest()[:12]}"

# Two fixed 31-bit primes; (p - 1)**2 fits in a signed 64-bit integer.
DEFAULT_PRIMES: Tuple[int, int] = (2147483647, 2147483629)


class EngineSettings(BaseSettings):
    """Engine configuration."""

    model_config = SettingsConfigDict(
        env_prefix="HYPEROPERAD_",
        env_file=".env",
        extra="ignore",
        frozen=True,
    )

    cache: Path = Field(default=Path(".cache"), description="Cache root directory")
    use_cache: bool = Field(default=True, description="Persist bases and matrices")
    workers: int = Field(default=1, ge=1, description="Worker processes for column assembly")
    primes: Tuple[int, int] = Field(default=DEFAULT_PRIMES, description="Primes for modular rank")
    rank_crosscheck_limit: int = Field(
        default=60, ge=0, description="Largest side for the dense rational rank cross-check"
    )
    max_blacks: int = Field(default=8, ge=1, description="Ceiling for brute-force canonicalization")
    code_version: str = Field(default=CODE_VERSION, description="Tag mixed into cache keys")
    log_level: str = Field(default="INFO", description="Default log level")

    @field_validator("primes")
    @classmethod
    def validate_primes(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        if v[0] == v[1]:
            raise ValueError("certification needs two distinct primes")
        for p in v:
            if p < 3 or p >= 2**31:
                raise ValueError(f"prime {p} outside the 31-bit range")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {v}")
        return level


def get_settings(**overrides) -> EngineSettings:
    """
    Build settings from the environment with explicit overrides.

    Args:
        **overrides: Field values that win over environment values

    Returns:
        Engine settings
    """
    clean = {k: v for k, v in overrides.items() if v is not None}
    settings = EngineSettings(**clean)
    logger.debug("Engine settings: %s", settings.model_dump())
    return settings
