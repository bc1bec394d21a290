"""
Oracle parameter defaults.

Values are resolved from (most specific wins):

    1. ``[oracle]`` table of ``hyped.toml`` in the project root
    2. ``settings.HYPED`` (environment driven, see ``core/settings.py``)
    3. Built-in fallback

Usage::

    from hyped.config import get_oracle_defaults

    defaults = get_oracle_defaults()
    s_max = defaults["s_max"]
"""

import logging
import os
import tomllib
from pathlib import Path

from django.conf import settings as django_settings

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Built-in fallbacks (used when neither settings nor the config file say more)
# ---------------------------------------------------------------------------
_FALLBACK_DEFAULTS = {
    "s_max": 10,
    "d_min": 4,
    "budget_l": 30.0,
    "alpha": 0.5,
    "beta": 0.25,
    "assign": "sampling",
    "select": "degree",
    "seed": 0,
    "pair_fraction": 0.40,
    "tie_penalty": 0.5,
    "consensus_max_passes": 20,
    "line_graph_edge_budget": 10**8,
    "threads": os.cpu_count() or 1,
}

# ---------------------------------------------------------------------------
# Config loading & caching
# ---------------------------------------------------------------------------
_config_cache: dict | None = None
_config_mtime: float = 0.0


def _config_path() -> Path:
    explicit = getattr(django_settings, "HYPED_CONFIG_FILE", "")
    if explicit:
        return Path(explicit)
    return Path(django_settings.BASE_DIR) / "hyped.toml"


def load_config(*, force_reload: bool = False) -> dict:
    """Load and cache ``hyped.toml``.

    The file's mtime is checked on every call so edits take effect without
    restarting a long benchmark session. Pass *force_reload=True* to bypass
    the cache unconditionally (useful in tests).
    """
    global _config_cache, _config_mtime

    path = _config_path()

    if not path.exists():
        logger.debug("Oracle config file not found at %s; using settings.", path)
        _config_cache = {}
        _config_mtime = 0.0
        return _config_cache

    try:
        current_mtime = path.stat().st_mtime
    except OSError:
        current_mtime = 0.0

    if _config_cache is not None and not force_reload and current_mtime == _config_mtime:
        return _config_cache

    try:
        with open(path, "rb") as fh:
            _config_cache = tomllib.load(fh)
        _config_mtime = current_mtime
        logger.info("Loaded oracle config from %s", path)
    except Exception:
        logger.exception("Failed to parse %s; using settings and fallbacks.", path)
        _config_cache = {}
        _config_mtime = 0.0

    return _config_cache


def clear_config_cache() -> None:
    """Reset the cached config. Mainly useful in tests."""
    global _config_cache, _config_mtime
    _config_cache = None
    _config_mtime = 0.0


def get_oracle_defaults() -> dict:
    """Return every oracle parameter with the resolution order applied."""
    from_settings = {
        key.lower(): value
        for key, value in getattr(django_settings, "HYPED", {}).items()
    }
    section = load_config().get("oracle", {})
    resolved = {}
    for key, fallback in _FALLBACK_DEFAULTS.items():
        resolved[key] = section.get(key, from_settings.get(key, fallback))
    return resolved
