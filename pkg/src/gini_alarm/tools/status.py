"""Status check tool."""

import os
from importlib import metadata

from .. import __version__
from ..config import get_settings

_STACK = ("numpy", "scipy", "pandas", "pydantic", "pyyaml", "mcp")


def check_status() -> dict:
    """Report the package version, numerical stack and effective settings.

    Returns information about:
    - Installed versions of the numerical and server dependencies
    - Engine settings after GINI_ALARM_* overrides
    - Whether file logging is enabled
    """
    versions = {}
    for name in _STACK:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None

    return {
        "version": __version__,
        "dependencies": versions,
        "dependencies_ok": all(v is not None for v in versions.values()),
        "settings": get_settings().model_dump(),
        "log_file": os.environ.get("GINI_ALARM_LOG_FILE"),
    }
