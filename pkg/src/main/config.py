# src/main/config.py
"""
Configuration loader for catsim.

Responsibilities:
- Load environment variables (a local .env file is honoured).
- Apply defaults from config/default_settings.json.
- Validate the merged settings against src/data/schemas/settings_schema.json.
- Provide a unified config dictionary to the app.

Environment:
    CATSIM_THREADS      -> worker threads for sweeps and Wigner grids
    CATSIM_OUTPUT_DIR   -> default directory for emitted tables
    CATSIM_LOG_LEVEL    -> logging level name

Files:
    config/default_settings.json
    config/app_settings.json      (user-modifiable)
"""

import json
import os

import jsonschema
from dotenv import load_dotenv

from src.core.errors import ConfigError
from src.main.constants import (
    APP_SETTINGS_FILE,
    DEFAULT_SETTINGS_FILE,
    ENV_LOG_LEVEL,
    ENV_OUTPUT_DIR,
    ENV_THREADS,
    SETTINGS_SCHEMA_FILE,
)


def _load_json_file(path, fallback=None):
    """Safely load JSON file."""
    if not path.exists():
        return fallback or {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except Exception:
        return fallback or {}


def _env_overrides():
    overrides = {}

    threads = os.getenv(ENV_THREADS)
    if threads:
        try:
            overrides["threads"] = int(threads)
        except ValueError as exc:
            raise ConfigError(f"{ENV_THREADS} must be an integer, got {threads!r}") from exc

    out_dir = os.getenv(ENV_OUTPUT_DIR)
    if out_dir:
        overrides["output_dir"] = out_dir

    level = os.getenv(ENV_LOG_LEVEL)
    if level:
        overrides["log_level"] = level.upper()

    return overrides


def load_config():
    """
    Load settings from:
    1. Default settings JSON
    2. App settings JSON
    3. Environment variables (after reading .env)

    Environment values override JSON values.
    """
    load_dotenv()
    config = {}

    # --- Layer 1: Load defaults ---
    defaults = _load_json_file(DEFAULT_SETTINGS_FILE, {})
    config.update(defaults)

    # --- Layer 2: Load user app settings ---
    app_settings = _load_json_file(APP_SETTINGS_FILE, {})
    config.update(app_settings)

    # --- Layer 3: Load environment variables ---
    config.update(_env_overrides())

    schema = _load_json_file(SETTINGS_SCHEMA_FILE, {})
    if schema:
        try:
            jsonschema.validate(config, schema)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"Invalid settings: {exc.message}") from exc

    return config
