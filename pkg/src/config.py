"""Run settings: defaults, MEDIATOR_* environment, JSON config file, flags.

Precedence is flag > config file > environment > default. A `.env` next to
the config file (or in the working directory) is loaded first.
"""

import json
import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import ValidationError
from pydantic_settings import BaseSettings

from errors import ConfigError

logger = logging.getLogger(__name__)

_SECTIONS = ("search", "tolerances")


class Settings(BaseSettings):
    seed: int = 7
    samples: int = 10000
    grid: int = 4
    dim: int = 2
    steps: int = 2
    workers: int = 1
    chunk_size: int = 500
    structural_tolerance: float = 1e-10
    optimisation_tolerance: float = 1e-6
    exact_tolerance: float = 1e-12
    chsh_restarts: int = 4
    log_level: str = "WARNING"

    model_config = {"env_prefix": "MEDIATOR_", "env_file": ".env", "extra": "forbid"}


def parse_config_and_env(config_path: Optional[str]) -> dict:
    """Load the .env beside the config file and flatten the file's sections."""
    if config_path is None:
        return {}
    load_dotenv(dotenv_path=os.path.join(os.path.dirname(config_path), ".env"))
    try:
        with open(config_path, "r") as f:
            config = json.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config {config_path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{config_path} line {e.lineno}: {e.msg}")
    if not isinstance(config, dict):
        raise ConfigError(f"{config_path} must hold a JSON object")
    values = {}
    for key, section in config.items():
        if key in _SECTIONS and isinstance(section, dict):
            values.update(section)
        else:
            values[key] = section
    return values


def load_settings(config_path: Optional[str] = None, **overrides) -> Settings:
    values = parse_config_and_env(config_path)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        settings = Settings(**values)
    except ValidationError as e:
        raise ConfigError(str(e).splitlines()[0] + ": " + _first_problem(e))
    logger.debug("Settings: %s", settings.model_dump())
    return settings


def _first_problem(e: ValidationError) -> str:
    error = e.errors()[0]
    where = ".".join(str(p) for p in error["loc"])
    return f"{where}: {error['msg']}"
