"""This file contains constants used by povote"""

from pathlib import Path

CONFIG_HOME_PATH = Path.home() / ".povote" / "config.toml"

MAX_M_ENV = "POVOTE_MAX_M"

# Default settings
DEFAULT_MAX_M = 5
DEFAULT_MAX_VOTERS = 2
DEFAULT_CONTINUITY_VOTERS = 1
DEFAULT_K_MAX = 25
DEFAULT_VERIFY_WINDOW = 5
DEFAULT_DOMAIN = "all"

# Universe size used when verifying positionality of newly registered scoring functions
POSITIONALITY_CHECK_M = 3

# Exit codes of the command line interface
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
