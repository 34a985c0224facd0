"""Access to the bundled default system configuration."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def default_config_path() -> Path:
    """Filesystem path of the packaged default config JSON."""
    return Path(resources.files("jamsplit").joinpath("data/default_config.json"))


def default_config() -> dict:
    with open(default_config_path()) as fh:
        return json.load(fh)
