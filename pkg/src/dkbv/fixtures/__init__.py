"""The maritime case study shipped with the package."""
from __future__ import annotations

from importlib import resources
from typing import Optional

FIXTURES = ("ship-full", "ship-tables-only", "ship-literal-phi")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files(__package__).joinpath(f"{name}.dkb").read_text(encoding="utf-8")


def load_fixture(name: str, today: Optional[int] = None):
    from ..dkbfile import parse_dkb
    return parse_dkb(fixture_text(name), today)
