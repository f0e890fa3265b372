from __future__ import annotations

import logging
import sys
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from pythonjsonlogger import jsonlogger


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="COHB_", extra="ignore")

    log_level: str = Field(default="WARNING")
    log_format: str = Field(default="plain")  # json|plain
    n_jobs: int = Field(
        default=1,
        description="Worker processes for audit trials; -1 uses every core.",
    )

    @field_validator("log_format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in ("json", "plain"):
            raise ValueError("log_format must be 'json' or 'plain'")
        return value

    @field_validator("n_jobs")
    @classmethod
    def _nonzero_jobs(cls, value: int) -> int:
        if value == 0:
            raise ValueError("n_jobs must be a positive count or negative (joblib convention)")
        return value

    @classmethod
    def from_env(
        cls,
        log_level: Optional[str] = None,
        log_format: Optional[str] = None,
        n_jobs: Optional[int] = None,
    ) -> "Settings":
        """Environment values, overridden by any explicitly passed (CLI) value."""
        overrides = {
            key: value
            for key, value in (("log_level", log_level), ("log_format", log_format), ("n_jobs", n_jobs))
            if value is not None
        }
        return cls(**overrides)


def setup_logging(settings: Settings) -> None:
    root = logging.getLogger()
    for h in list(root.handlers):
        root.removeHandler(h)
    level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    root.setLevel(level)
    handler: logging.Handler
    # Reports own stdout
    handler = logging.StreamHandler(sys.stderr)
    if settings.log_format == "json":
        formatter = jsonlogger.JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
    else:
        formatter = logging.Formatter("%(asctime)s %(levelname)s %(name)s %(message)s")
    handler.setFormatter(formatter)
    root.addHandler(handler)
