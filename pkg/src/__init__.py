from .data import DefinitionError, SystemDefinition, load_definition, load_definition_from_dict
from .repro import run_repro
from .run_analysis import (
    MissingPrerequisiteError,
    run_analysis,
    run_chain,
    run_design,
    run_simulate,
    run_verify,
)

__all__ = [
    "DefinitionError",
    "MissingPrerequisiteError",
    "SystemDefinition",
    "load_definition",
    "load_definition_from_dict",
    "run_analysis",
    "run_chain",
    "run_design",
    "run_repro",
    "run_simulate",
    "run_verify",
]
