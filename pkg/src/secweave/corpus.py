"""Access to the bundled example corpus (models, policies, purposes)."""

from __future__ import annotations

from importlib import resources


def _root():
    return resources.files(__package__).joinpath("corpus")


def names() -> list[str]:
    """Corpus file names, sorted."""
    return sorted(
        entry.name for entry in _root().iterdir()
        if entry.is_file() and not entry.name.startswith("README"))


def load_text(name: str) -> str:
    return _root().joinpath(name).read_text(encoding="utf-8")
