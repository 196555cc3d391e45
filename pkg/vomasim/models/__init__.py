"""Bundled case-study models; importing this package registers them."""

from pathlib import Path

from ..data_structure.constants import specs_dir
from .researchers import ResearchersParams, step_researchers
from .wolfsheep import WolfSheepParams, step_wolfsheep


def spec_path(name: str) -> Path:
    """Path of a shipped spec or parameter file, e.g. ``spec_path('researchers.vomas')``."""
    return specs_dir / name
