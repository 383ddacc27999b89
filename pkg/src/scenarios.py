"""Embedded scenario definitions shipped under scenarios/."""
from pathlib import Path
from typing import Dict, List

from .data.load import load_definition
from .data.types import SystemDefinition

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

# Reproducible examples by id.
EXAMPLES: Dict[str, str] = {
    "3.1": "example_3_1",
    "3.3.1": "example_3_3_1",
    "4.3.1": "example_4_3_1",
}


def scenario_names() -> List[str]:
    return sorted(p.stem for p in SCENARIO_DIR.glob("*.json"))


def scenario_path(name: str) -> Path:
    """Path of a named scenario; example ids such as "4.3.1" are accepted too.

    Raises:
        KeyError: If no scenario has that name.
    """
    name = EXAMPLES.get(name, name)
    path = SCENARIO_DIR / f"{name}.json"
    if not path.exists():
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(scenario_names())}")
    return path


def load_scenario(name: str) -> SystemDefinition:
    return load_definition(scenario_path(name))
