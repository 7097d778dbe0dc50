"""Access to packaged data files and the ANAFORO_DATA override root."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

ENV_DATA_ROOT = "ANAFORO_DATA"


def data_path(name: str) -> Path:
    """Resolve a data file: $ANAFORO_DATA/<name> when set, else the packaged
    copy under anaforo/data/."""
    root = os.environ.get(ENV_DATA_ROOT)
    if root:
        candidate = Path(root) / name
        if candidate.exists():
            return candidate
    return Path(str(resources.files("anaforo").joinpath("data", name)))


def data_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")
