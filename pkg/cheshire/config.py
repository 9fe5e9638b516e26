import logging
import pathlib
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger("cheshire.config")

PACKAGE_DIR = pathlib.Path(__file__).parent


def load_env() -> pathlib.Path | None:
    """Load .env from the package directory or the repo root, whichever exists first."""
    for candidate in (PACKAGE_DIR / ".env", PACKAGE_DIR.parent / ".env"):
        if candidate.exists():
            load_dotenv(dotenv_path=candidate)
            return candidate
    return None


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CHESHIRE_", extra="ignore")

    log_level: str = "INFO"
    # Parallel width for flux profiles and momentum sweeps.
    n_jobs: int = 1
    parallel_backend: str = "threading"
    output_dir: pathlib.Path = pathlib.Path(".")

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {value}")
        return value

    @field_validator("parallel_backend")
    @classmethod
    def known_backend(cls, value: str) -> str:
        if value not in ("threading", "loky", "sequential"):
            raise ValueError("parallel_backend must be 'threading', 'loky' or 'sequential'")
        return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    settings = Settings()
    logger.debug(f"Settings: n_jobs={settings.n_jobs}, backend={settings.parallel_backend}")
    return settings
