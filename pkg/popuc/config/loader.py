"""Config file I/O: load from JSON, merge env vars, save back to disk."""

from __future__ import annotations

import json
from pathlib import Path

from loguru import logger
from pydantic_settings import SettingsConfigDict

from popuc.config.schema import PopucConfig

_DEFAULT_CONFIG_DIR = Path.home() / ".popuc"
_DEFAULT_CONFIG_FILE = _DEFAULT_CONFIG_DIR / "config.json"


def get_config_path() -> Path:
    return _DEFAULT_CONFIG_FILE


def load_config(path: Path | None = None) -> PopucConfig:
    """Load config from JSON file, falling back to defaults if file is missing.

    Environment variables with POPUC_ prefix override file values.
    """
    config_path = (path or _DEFAULT_CONFIG_FILE).expanduser().resolve()

    if not config_path.exists():
        return PopucConfig()

    class _FileConfig(PopucConfig):
        model_config = SettingsConfigDict(json_file=config_path)

    logger.debug("Loading config from {}", config_path)
    return PopucConfig.model_validate(_FileConfig().model_dump())


def save_config(config: PopucConfig, path: Path | None = None) -> Path:
    """Serialize config to JSON and write it atomically (temp file, then rename)."""
    config_path = (path or _DEFAULT_CONFIG_FILE).expanduser().resolve()
    config_path.parent.mkdir(parents=True, exist_ok=True)

    data = config.model_dump(mode="json")
    tmp_path = config_path.with_suffix(".tmp")
    tmp_path.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")
    tmp_path.rename(config_path)
    return config_path
