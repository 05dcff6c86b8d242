import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

# Python < 3.11 does not have tomllib, but tomli provides same functionality
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from povote.const import (
    CONFIG_HOME_PATH,
    DEFAULT_CONTINUITY_VOTERS,
    DEFAULT_DOMAIN,
    DEFAULT_K_MAX,
    DEFAULT_MAX_M,
    DEFAULT_MAX_VOTERS,
    DEFAULT_VERIFY_WINDOW,
    MAX_M_ENV,
)

logger = logging.getLogger(__name__)


class ConfigurationError(ValueError):
    """Raised when a configuration value has the wrong type or an impossible value"""


def example_standard_config() -> str:
    """This function returns a serialized version of the example configuration file.

    Returns
    -------
    str
        String of a toml-serialized configuration file.
    """
    standard_config = f"""[povote]
# Largest universe for which partial orders are enumerated.
# The environment variable {MAX_M_ENV} takes precedence over this value.
max_m = {DEFAULT_MAX_M}

[axioms]
# Largest electorate quantified over by the axiom checkers
max_voters = {DEFAULT_MAX_VOTERS}
# Electorate size per side when Continuity is simulated for rules without a scoring function
continuity_voters = {DEFAULT_CONTINUITY_VOTERS}
# One of "all", "linear" or "approval"
domain = "{DEFAULT_DOMAIN}"
k_max = {DEFAULT_K_MAX}
verify_window = {DEFAULT_VERIFY_WINDOW}
progress = false
"""
    return standard_config


def load_povote_configuration(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """Loads a configuration file for povote

    First, it checks if config_path is given. If not, it will look for ~/.povote/config.toml,
    if that file also doesn't exist it will load the example configuration.

    Parameters
    ----------
    config_path : Path, optional
        Path to configuration file to load, by default None

    Returns
    -------
    Dict
        Dictionary with loaded configuration properties

    Raises
    ------
    FileNotFoundError
        If config_path is specified yet does not exist
    """
    if config_path:
        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file does not exist at {config_path}")
    elif (config_path := CONFIG_HOME_PATH).exists():
        pass
    else:
        logger.warning("No configuration file found or specified! Using example configuration")
        return tomllib.loads(example_standard_config())

    logger.info("Using configuration file %s", config_path)

    with open(config_path, "rb") as f:
        config = tomllib.load(f)

    return config


def enumeration_bound(config: Optional[Dict[str, Any]] = None) -> int:
    """Determines the largest universe size for which partial orders may be enumerated

    The environment variable takes precedence over the configuration, which takes precedence
    over the built-in default.

    Parameters
    ----------
    config : Dict, optional
        povote configuration dictionary

    Returns
    -------
    int
        The enumeration bound

    Raises
    ------
    ConfigurationError
        If the environment variable or configuration value is not a positive integer
    """
    if (from_env := os.environ.get(MAX_M_ENV)) is not None:
        source, value = MAX_M_ENV, from_env
    elif config and "max_m" in config.get("povote", {}):
        source, value = "configuration key povote.max_m", config["povote"]["max_m"]
    else:
        return DEFAULT_MAX_M

    try:
        bound = int(value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{source} must be an integer, got {value!r}") from e
    if bound < 1:
        raise ConfigurationError(f"{source} must be at least 1, got {bound}")

    logger.debug("Enumeration bound %d taken from %s", bound, source)
    return bound


def axiom_settings(config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Returns the [axioms] table of the configuration with defaults filled in

    Parameters
    ----------
    config : Dict, optional
        povote configuration dictionary

    Returns
    -------
    Dict
        Settings with the keys max_voters, continuity_voters, domain, k_max, verify_window and progress
    """
    settings = {
        "max_voters": DEFAULT_MAX_VOTERS,
        "continuity_voters": DEFAULT_CONTINUITY_VOTERS,
        "domain": DEFAULT_DOMAIN,
        "k_max": DEFAULT_K_MAX,
        "verify_window": DEFAULT_VERIFY_WINDOW,
        "progress": False,
    }
    if config:
        unknown = set(config.get("axioms", {})) - set(settings)
        if unknown:
            logger.warning("Ignoring unknown keys in [axioms]: %s", ", ".join(sorted(unknown)))
        settings.update({k: v for k, v in config.get("axioms", {}).items() if k in settings})
    return settings
