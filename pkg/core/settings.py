"""
Django settings for HypED: landmark s-distance oracles for hypergraphs.

Reads configuration from environment variables (with sensible defaults for
local runs). Set them in a `.env` file or in the process environment.

Oracle parameters live in ``HYPED`` below; an optional ``hyped.toml`` in the
project root overrides them (see hyped/config.py), and command-line flags
override both.
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file in project root
from dotenv import load_dotenv

load_dotenv(BASE_DIR / ".env")


# ==============================================================================
# ENVIRONMENT HELPERS
# ==============================================================================


def _env(key, default=""):
    """Return an environment variable or *default*."""
    return os.environ.get(key, default)


def _env_bool(key, default=False):
    """Return an environment variable as a boolean."""
    return _env(key, str(default)).lower() in ("true", "1", "yes")


def _env_list(key, default="", sep=","):
    """Return an environment variable as a list of strings."""
    raw = _env(key, default)
    return [item.strip() for item in raw.split(sep) if item.strip()]


def _env_int(key, default=0):
    """Return an environment variable as an integer."""
    try:
        return int(_env(key, str(default)))
    except (ValueError, TypeError):
        return default


def _env_float(key, default=0.0):
    """Return an environment variable as a float."""
    try:
        return float(_env(key, str(default)))
    except (ValueError, TypeError):
        return default


# ==============================================================================
# CORE
# ==============================================================================

DEBUG = _env_bool("DEBUG", False)

# Nothing is signed or served; Django still requires a key.
SECRET_KEY = _env("SECRET_KEY") or "hyped-local-key-not-secret"

ALLOWED_HOSTS = _env_list("ALLOWED_HOSTS", "")

INSTALLED_APPS = [
    "hyped",
]

# The oracle never touches a database.
DATABASES = {}

USE_TZ = True
TIME_ZONE = _env("TIME_ZONE", "UTC")

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# ==============================================================================
# ORACLE DEFAULTS
# ==============================================================================

HYPED = {
    "S_MAX": _env_int("HYPED_S_MAX", 10),
    "D_MIN": _env_int("HYPED_D_MIN", 4),
    "BUDGET_L": _env_float("HYPED_BUDGET_L", 30.0),
    "ALPHA": _env_float("HYPED_ALPHA", 0.5),
    "BETA": _env_float("HYPED_BETA", 0.25),
    "ASSIGN": _env("HYPED_ASSIGN", "sampling"),
    "SELECT": _env("HYPED_SELECT", "degree"),
    "SEED": _env_int("HYPED_SEED", 0),
    "PAIR_FRACTION": _env_float("HYPED_PAIR_FRACTION", 0.40),
    "TIE_PENALTY": _env_float("HYPED_TIE_PENALTY", 0.5),
    "CONSENSUS_MAX_PASSES": _env_int("HYPED_CONSENSUS_MAX_PASSES", 20),
    "LINE_GRAPH_EDGE_BUDGET": _env_int("HYPED_LINE_GRAPH_EDGE_BUDGET", 10**8),
    "THREADS": _env_int("HYPED_THREADS", os.cpu_count() or 1),
}

# Alternative location of hyped.toml (empty: project root)
HYPED_CONFIG_FILE = _env("HYPED_CONFIG_FILE", "")


# ==============================================================================
# LOGGING
# ==============================================================================

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[{asctime}] {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": _env("DJANGO_LOG_LEVEL", "INFO"),
        },
        "hyped": {
            "handlers": ["console"],
            "level": _env("HYPED_LOG_LEVEL", "INFO"),
        },
    },
}
