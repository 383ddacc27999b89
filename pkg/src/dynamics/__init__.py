from .chain import AbsorptionAnalysis, JointChain, absorption_analysis, joint_chain
from .fixed import SURConfig, best_response_set, mbra_step, simulate, transition_matrix_L
from .replicas import RunSummary, replica_seeds, summarize_runs
from .state_based import (
    RecurrentStateEquilibrium,
    build_MF,
    build_MP,
    consensus_utilities,
    design_state_utilities,
    recurrent_state_equilibria,
    simulate_state_based,
    state_based_game,
    state_potential_validity,
    verify_state_based_potential,
)

__all__ = [
    "AbsorptionAnalysis",
    "JointChain",
    "absorption_analysis",
    "joint_chain",
    "SURConfig",
    "best_response_set",
    "mbra_step",
    "simulate",
    "transition_matrix_L",
    "RunSummary",
    "replica_seeds",
    "summarize_runs",
    "RecurrentStateEquilibrium",
    "build_MF",
    "build_MP",
    "consensus_utilities",
    "design_state_utilities",
    "recurrent_state_equilibria",
    "simulate_state_based",
    "state_based_game",
    "state_potential_validity",
    "verify_state_based_potential",
]
