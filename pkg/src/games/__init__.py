from .model import (
    consensus_objective,
    edge_potential_objective,
    is_nash,
    network_game,
    objective_eval,
    payoff_eval,
    pure_nash_equilibria,
)
from .potential import (
    PotentialCertificate,
    SinglePlayerGameError,
    UtilityDesign,
    check_designability,
    design_utilities,
    designability_report,
    is_potential,
    normalize_potential,
    verify_potential_def,
)

__all__ = [
    "consensus_objective",
    "edge_potential_objective",
    "is_nash",
    "network_game",
    "objective_eval",
    "payoff_eval",
    "pure_nash_equilibria",
    "PotentialCertificate",
    "SinglePlayerGameError",
    "UtilityDesign",
    "check_designability",
    "design_utilities",
    "designability_report",
    "is_potential",
    "normalize_potential",
    "verify_potential_def",
]
