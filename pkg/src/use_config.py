"""Read-only access to config.json, falling back to built-in defaults"""

import os
import json
import logging

from src.resource_path import resource_path
from src.constants import PROGRAM_VERSION, CONFIG_PATH, GRAMMAR_ENV_VAR

logger = logging.getLogger(__name__)

DF_CONFIG = {
    "program_version": PROGRAM_VERSION,
    "grammar_path": "data/creole.grammar",
    "fixtures_dir": "data/fixtures",
    "golden_path": "data/fixtures/golden.tsv",
    "log_level": "INFO"
}

def load_config():
    """Load config.json, or the defaults if it's missing or unreadable."""
    try:
        with open(resource_path(CONFIG_PATH), "r", encoding="utf-8") as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        logger.warning("Could not read %s (%s), using default config", CONFIG_PATH, e)
        return dict(DF_CONFIG)

def get_config_value(key):
    """Get a value from config.json. Raises KeyError if key doesn't exist."""
    config = load_config()
    if key not in config:
        if key in DF_CONFIG:
            return DF_CONFIG[key]
        raise KeyError(f"Config key '{key}' not found in config.json for getting.")

    return config[key]

def default_grammar_path(override=None):
    """Grammar file to load: explicit override, then $KREYOL_GRAMMAR, then config."""
    if override:
        return override
    env_path = os.environ.get(GRAMMAR_ENV_VAR)
    if env_path:
        return env_path

    return resource_path(get_config_value("grammar_path"))
