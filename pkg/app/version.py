"""Version lookup, with pyproject.toml as the single source of truth."""

import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 backport
    import tomli as tomllib
from importlib import metadata
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent
DISTRIBUTION_NAME = "TUAV_CBF_Safety"


def get_version() -> str:
    """
    Read the project version.

    Source checkouts read ``pyproject.toml`` directly; installed wheels have no
    manifest next to the package, so the distribution metadata is used instead.

    Returns:
        Version string (e.g., "0.3.0")
    """
    pyproject_path = PROJECT_ROOT / "pyproject.toml"
    if pyproject_path.exists():
        with open(pyproject_path, "rb") as f:
            return tomllib.load(f)["project"]["version"]

    try:
        return metadata.version(DISTRIBUTION_NAME)
    except metadata.PackageNotFoundError:
        return "0.0.0"


__version__ = get_version()
