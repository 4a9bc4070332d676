"""Configuration loading using lib_layered_config.

Purpose
-------
Provide a centralized configuration loader that reads settings from:
1. Package defaults (defaultconfig.toml)
2. User config (~/.config/solspec/config.toml on Linux)
3. Project config (.solspec.toml, .solspec.yaml or .solspec.json)
4. Environment variables (SOLSPEC___<SECTION>__<KEY>=<VALUE>)

``SOLSPEC_MAX_ELEMENTS`` additionally overrides ``limits.max_ball_elements``.

Contents
--------
* :func:`get_config` - Load merged configuration (cached)
* :func:`get_section` - Get a specific config section
* :func:`get_limits` - Resource caps as a :class:`~solspec.limits.Limits`
* :func:`get_numerics` - Tolerances, iteration caps and seeds
* :func:`get_log_level`, :func:`get_max_workers`, :func:`get_json_indent`,
  :func:`get_schema_version`

System Role
-----------
Acts as the configuration adapter layer; library modules never read it and
receive explicit arguments instead.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

from lib_layered_config import Config, read_config

from solspec.__init__conf__ import (
    LAYEREDCONF_APP,
    LAYEREDCONF_SLUG,
    LAYEREDCONF_VENDOR,
)
from solspec.errors import ConfigError
from solspec.limits import Limits

# Path to the default configuration file bundled with the package
_DEFAULT_CONFIG_FILE = Path(__file__).parent / "defaultconfig.toml"

#: Environment variable overriding the ball cap.
MAX_ELEMENTS_ENV = "SOLSPEC_MAX_ELEMENTS"

# Cached config instance
_cached_config: Config | None = None


def get_config(
    start_dir: str | None = None,
    reload: bool = False,
) -> Config:
    """Load the merged configuration from all layers.

    Parameters
    ----------
    start_dir:
        Directory to start searching for project config files.
        Defaults to current working directory.
    reload:
        If True, bypass cache and reload configuration.

    Returns
    -------
    Config
        Immutable configuration with provenance metadata.
    """
    global _cached_config

    if _cached_config is not None and not reload:
        return _cached_config

    _cached_config = read_config(
        vendor=LAYEREDCONF_VENDOR,
        app=LAYEREDCONF_APP,
        slug=LAYEREDCONF_SLUG,
        prefer=["toml", "yaml", "json"],
        start_dir=start_dir or str(Path.cwd()),
        default_file=_DEFAULT_CONFIG_FILE,
    )

    return _cached_config


def get_section(section: str, start_dir: str | None = None) -> dict[str, Any]:
    """Get a specific configuration section.

    Parameters
    ----------
    section:
        Dotted path to the section (e.g., "limits", "numerics").

    Returns
    -------
    dict
        Configuration values for the section, or empty dict if not found.

    Examples
    --------
    >>> isinstance(get_section("numerics"), dict)
    True
    """
    config = get_config(start_dir=start_dir)

    parts = section.split(".")
    current: Any = dict(config)

    for part in parts:
        if isinstance(current, dict) and part in current:
            current = current[part]
        else:
            return {}

    return current if isinstance(current, dict) else {}


def clear_cache() -> None:
    """Clear the cached configuration, forcing a reload on next access."""
    global _cached_config
    _cached_config = None


def get_log_level(start_dir: str | None = None) -> int:
    """Get the configured log level (defaults to WARNING)."""
    level = get_section("general", start_dir).get("log_level", "WARNING")
    if isinstance(level, int):
        return level
    level_map = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }
    return level_map.get(str(level).upper(), logging.WARNING)


def get_max_workers(start_dir: str | None = None) -> int:
    """Get the maximum number of parallel workers (default: 4)."""
    return int(get_section("general", start_dir).get("max_workers", 4))


def get_limits(start_dir: str | None = None) -> Limits:
    """Resource caps from ``[limits]`` with the ``SOLSPEC_MAX_ELEMENTS`` override.

    Raises
    ------
    ConfigError
        A cap is not a positive integer.
    """
    section = get_section("limits", start_dir)
    defaults = Limits()
    raw_ball = os.environ.get(MAX_ELEMENTS_ENV, section.get("max_ball_elements", defaults.max_ball_elements))
    try:
        return Limits(
            max_ball_elements=int(raw_ball),
            max_matrix_dim=int(section.get("max_matrix_dim", defaults.max_matrix_dim)),
            max_neumann_terms=int(section.get("max_neumann_terms", defaults.max_neumann_terms)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid resource limit: {exc}") from exc


def get_numerics(start_dir: str | None = None) -> dict[str, Any]:
    """Tolerances, iteration caps and seeds from ``[numerics]``."""
    return get_section("numerics", start_dir)


def get_run_defaults(start_dir: str | None = None) -> dict[str, Any]:
    """Default run parameters from ``[run]``."""
    return get_section("run", start_dir)


def get_json_indent(start_dir: str | None = None) -> int:
    """JSON indentation for reports (default: 2)."""
    return int(get_section("output", start_dir).get("json_indent", 2))


def get_schema_version(start_dir: str | None = None) -> str:
    """Report schema version (default: "1.0")."""
    return str(get_section("output", start_dir).get("schema_version", "1.0"))
