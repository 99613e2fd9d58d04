"""Bundled scenario files."""

from importlib import resources
from pathlib import Path


def open_close_path() -> Path:
    """Path to the bundled open-close mouth scenario (closed, open plateau
    over frames ~54-66, closed again)."""
    return Path(resources.files(__package__) / "open_close.json")
