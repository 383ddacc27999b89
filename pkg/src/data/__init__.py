from .load import DefinitionError, dump_definition, load_definition, load_definition_from_dict, write_definition
from .types import (
    FiniteGame,
    NetworkTopology,
    ObjectiveFunction,
    PotentialValidity,
    SimulationTrace,
    StateBasedGame,
    SystemDefinition,
)

__all__ = [
    "DefinitionError",
    "dump_definition",
    "load_definition",
    "load_definition_from_dict",
    "write_definition",
    "FiniteGame",
    "NetworkTopology",
    "ObjectiveFunction",
    "PotentialValidity",
    "SimulationTrace",
    "StateBasedGame",
    "SystemDefinition",
]
