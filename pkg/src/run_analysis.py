"""Run verification, design, simulation and chain analysis on a system definition (API entry point).

No file I/O or printing happens here: every run_* function takes a SystemDefinition and
an AnalysisConfig and returns an ordered report dict (plus traces or a designed
definition where relevant). script/main.py renders and writes the results.
"""
import logging
from dataclasses import replace
from fractions import Fraction
from functools import partial
from typing import Any, Dict, List, Optional, Tuple

from .algebra.stp import index_profile
from .config import DEFAULT_CONFIG, AnalysisConfig
from .data import load_definition_from_dict
from .data.load import DefinitionError
from .data.types import (
    FiniteGame,
    LocalUtility,
    ObjectiveFunction,
    SimulationTrace,
    StateBasedGame,
    SystemDefinition,
)
from .dynamics.chain import absorption_analysis, joint_chain, l_matrix_fixed_points
from .dynamics.fixed import SURConfig, resolve_seed, simulate, transition_matrix_L
from .dynamics.replicas import replica_seeds, run_replicas, summarize_runs
from .dynamics.state_based import (
    design_state_utilities,
    first_violation,
    recurrent_state_equilibria,
    simulate_state_based,
    state_based_game,
    state_designability_report,
    state_potential_validity,
)
from .games.model import consensus_objective, edge_potential_objective, network_game, pure_nash_equilibria
from .games.potential import (
    design_utilities,
    designability_report,
    is_neighborhood_determinant,
    is_potential,
    lift_local_utility,
    normalize_potential,
    verify_potential_def,
)
from .report import format_pair, format_profile

logger = logging.getLogger(__name__)

Report = Dict[str, Any]


class MissingPrerequisiteError(RuntimeError):
    """The definition is valid but lacks what the command needs (utilities, objective, initial state)."""


def resolve_config(definition: SystemDefinition, base: AnalysisConfig = DEFAULT_CONFIG, **overrides) -> AnalysisConfig:
    """Definition-file values over `base`, then non-None `overrides` (CLI flags) over both."""
    from_file = dict(
        epsilon=definition.epsilon,
        sep=definition.sep,
        cadence=definition.cadence,
        information=definition.information,
        seed=definition.seed,
    )
    return base.merged(**from_file).merged(**overrides)


def _edge_potential(definition: SystemDefinition) -> Tuple[Fraction, ...]:
    _, payload = definition.objective
    if payload:
        return payload
    certificate = is_potential(definition.fng.as_game())
    if certificate is None:
        raise DefinitionError("fng", "the FNG is not a potential game, so it has no edge potential")
    return certificate.potential


def build_objective(definition: SystemDefinition) -> Optional[ObjectiveFunction]:
    if definition.objective is None:
        return None
    kind, payload = definition.objective
    k = definition.cardinalities
    if kind == "consensus":
        return consensus_objective(definition.state_topologies(), k)
    if kind == "vector":
        if definition.is_state_based:
            return ObjectiveFunction(k, tuple(v for block in payload for v in block), states=len(payload))
        return ObjectiveFunction(k, payload[0])
    potential = _edge_potential(definition)
    if not definition.is_state_based:
        return edge_potential_objective(definition.topology(), potential, k)
    blocks = [edge_potential_objective(t, potential, k).vector for t in definition.state_topologies()]
    return ObjectiveFunction(k, tuple(v for block in blocks for v in block), states=len(blocks))


def lifted_utilities(definition: SystemDefinition) -> Optional[Tuple[Tuple[Tuple[Fraction, ...], ...], ...]]:
    """Per state (one block in fixed mode), per player full-length utility vectors."""
    if not definition.utilities:
        return None
    k = definition.cardinalities
    labels = [s.label for s in definition.states] or [None]
    table = {(u.state, u.player): lift_local_utility(u.vector, u.neighborhood, k) for u in definition.utilities}
    return tuple(tuple(table[(label, i)] for i in range(1, definition.players + 1)) for label in labels)


def build_game(definition: SystemDefinition) -> FiniteGame:
    """Fixed-mode game from explicit utilities, else the network game of the FNG on the edges.

    An asymmetric FNG is oriented along the stored edges (lower node index plays the row role).
    """
    lifted = lifted_utilities(definition)
    if lifted is not None:
        return FiniteGame(definition.cardinalities, lifted[0])
    if definition.fng is not None:
        orientation = None if definition.fng.is_symmetric else set(definition.edges)
        return network_game(definition.topology(), definition.fng, orientation)
    raise MissingPrerequisiteError("fixed mode needs utilities or an fng to define the game")


def build_state_game(definition: SystemDefinition, config: AnalysisConfig, utilities=None) -> StateBasedGame:
    objective = build_objective(definition)
    if objective is None:
        raise MissingPrerequisiteError("state based mode needs an objective to build the state process")
    return state_based_game(
        definition.cardinalities,
        [s.label for s in definition.states],
        definition.state_topologies(),
        objective,
        sep=config.sep,
        epsilon=config.epsilon,
        utilities=utilities if utilities is not None else lifted_utilities(definition),
    )


def _require_utilities(sbg: StateBasedGame, command: str) -> StateBasedGame:
    if sbg.utilities is None:
        raise MissingPrerequisiteError(f"{command} needs utilities; run design first or add them to the definition")
    return sbg


def run_verify(definition: SystemDefinition, config: AnalysisConfig = DEFAULT_CONFIG) -> Report:
    """Potential-game verdict with the normalized potential, or the state based verdicts."""
    report: Report = {"system": definition.name, "mode": definition.mode}
    if definition.is_state_based:
        sbg = _require_utilities(build_state_game(definition, config), "verify")
        validity = state_potential_validity(sbg)
        report["sep"] = config.sep
        report["utility_differences_match"] = not any(f.startswith("utility_difference") for f in validity.flags)
        report["state_process_monotone"] = not any(f.startswith("state_decrease") for f in validity.flags)
        report["state_based_potential"] = validity.is_valid
        report["violations"] = len(validity.flags)
        if validity.flags:
            report["first_violation"] = validity.flags[0]
        report["verdict"] = validity.is_valid
        return report

    g = build_game(definition)
    certificate = is_potential(g)
    report["potential"] = certificate is not None
    if certificate is not None:
        report["potential_vector"] = certificate.potential
        report["normalized_potential"] = normalize_potential(certificate.potential)
        report["normalization_shift"] = -certificate.potential[0]
    objective = build_objective(definition)
    if objective is not None:
        report["objective_is_potential"] = verify_potential_def(g, objective.vector)
    report["neighborhood_determinant"] = is_neighborhood_determinant(g, definition.topology().neighborhoods())
    report["nash_equilibria"] = [format_profile(a) for a in pure_nash_equilibria(g)]
    report["verdict"] = certificate is not None
    return report


def run_design(definition: SystemDefinition, config: AnalysisConfig = DEFAULT_CONFIG) -> Tuple[Report, Optional[SystemDefinition]]:
    """Designability verdicts and, when designable, a definition carrying the designed utilities."""
    objective = build_objective(definition)
    if objective is None:
        raise MissingPrerequisiteError("design needs an objective")
    k = definition.cardinalities
    report: Report = {"system": definition.name, "mode": definition.mode}

    if definition.is_state_based:
        hoods = [t.neighborhoods() for t in definition.state_topologies()]
        verdicts = state_designability_report(objective, hoods, k)
        labels = [s.label for s in definition.states]
        for label, per_player in zip(labels, verdicts):
            report[f"designable[{label}]"] = all(per_player)
        report["designable"] = all(all(p) for p in verdicts)
        violation = first_violation(verdicts)
        if violation is not None:
            report["first_violation"] = f"state={labels[violation[0] - 1]} player={violation[1]}"
            report["verdict"] = False
            return report, None
        designs = design_state_utilities(objective, hoods, k)
        utilities = tuple(
            LocalUtility(player=i, neighborhood=d.neighborhoods[i - 1], vector=d.utilities[i - 1], state=label)
            for label, d in zip(labels, designs)
            for i in range(1, definition.players + 1)
        )
        designed = replace(definition, utilities=utilities)
        sbg = build_state_game(designed, config)
        report["designed_utilities_verified"] = state_potential_validity(sbg).is_valid
    else:
        hoods = definition.topology().neighborhoods()
        verdicts = designability_report(objective, hoods, k)
        for i, ok in enumerate(verdicts, start=1):
            report[f"designable[player {i}]"] = ok
        report["designable"] = all(verdicts)
        if not all(verdicts):
            report["first_violation"] = f"player={verdicts.index(False) + 1}"
            report["verdict"] = False
            return report, None
        design = design_utilities(objective, hoods, k)
        utilities = tuple(
            LocalUtility(player=i, neighborhood=design.neighborhoods[i - 1], vector=design.utilities[i - 1])
            for i in range(1, definition.players + 1)
        )
        designed = replace(definition, utilities=utilities)
        report["designed_utilities_verified"] = verify_potential_def(design.lifted_game(k), objective.vector)

    for u in designed.utilities:
        where = f"{u.state}][{u.player}" if u.state is not None else f"{u.player}"
        report[f"utility[{where}]"] = f"U={format_profile(u.neighborhood)} {list(map(str, u.vector))}"
    report["verdict"] = True
    logger.info("designed %d local utilities for %s", len(utilities), definition.name)
    return report, designed


def _replica_fixed(seed: int, g, sur: SURConfig, a0, max_steps, objective, topology) -> SimulationTrace:
    return simulate(g, replace(sur, seed=seed), a0, max_steps, objective, topology)


def _replica_state(seed: int, sbg, x0, a0, max_steps) -> SimulationTrace:
    return simulate_state_based(sbg, x0, a0, max_steps, seed=seed)


def run_simulate(
    definition: SystemDefinition,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> Tuple[Report, List[List[SimulationTrace]]]:
    """Simulate every initial condition `config.runs` times; traces are grouped per initial condition."""
    if not definition.initial:
        raise MissingPrerequisiteError("simulate needs at least one initial condition")
    seed = resolve_seed(config.seed)
    report: Report = {"system": definition.name, "mode": definition.mode, "seed": seed, "steps": config.max_steps}
    if definition.is_state_based:
        sbg = _require_utilities(build_state_game(definition, config), "simulate")
        report["sep"] = config.sep
        report["epsilon"] = config.epsilon
        runners = [
            partial(_replica_state, sbg=sbg, x0=definition.state_index(c.state), a0=c.profile, max_steps=config.max_steps)
            for c in definition.initial
        ]
    else:
        g = build_game(definition)
        sur = SURConfig(information=config.information, cadence=config.cadence, seed=seed)
        report["cadence"] = config.cadence
        report["information"] = config.information
        runners = [
            partial(_replica_fixed, g=g, sur=sur, a0=c.profile, max_steps=config.max_steps,
                    objective=build_objective(definition), topology=definition.topology())
            for c in definition.initial
        ]

    seeds = replica_seeds(seed, config.runs * len(runners))
    grouped: List[List[SimulationTrace]] = []
    for c, (condition, run) in enumerate(zip(definition.initial, runners), start=1):
        traces = run_replicas(run, seeds[(c - 1) * config.runs:c * config.runs], config.workers)
        grouped.append(traces)
        start = format_profile(condition.profile)
        report[f"initial[{c}]"] = f"{condition.state} {start}" if condition.state else start
        if config.runs == 1:
            trace = traces[0]
            report[f"converged_at[{c}]"] = trace.converged_at
            report[f"final[{c}]"] = format_pair(trace.final.state, trace.final.profile, definition)
            if trace.first_revisit is not None and trace.converged_at is None:
                report[f"first_revisit[{c}]"] = trace.first_revisit
        else:
            summary = summarize_runs(traces, config.max_steps)
            report[f"converged[{c}]"] = f"{summary.converged}/{summary.runs}"
            report[f"converged_fraction[{c}]"] = round(summary.fraction, 6)
            report[f"converged_ci95[{c}]"] = [round(summary.ci_low, 6), round(summary.ci_high, 6)]
            if summary.mean_converged_at is not None:
                report[f"mean_converged_at[{c}]"] = round(summary.mean_converged_at, 3)
    return report, grouped


def run_chain(definition: SystemDefinition, config: AnalysisConfig = DEFAULT_CONFIG) -> Report:
    """Recurrent state equilibria and exact joint-chain analysis; L-matrix fixed points in fixed mode."""
    report: Report = {"system": definition.name, "mode": definition.mode}
    if not definition.is_state_based:
        g = build_game(definition)
        cadence = "random" if config.cadence == "roundrobin" else config.cadence
        sur = SURConfig(information=config.information, cadence=cadence, seed=0)
        l_matrix = transition_matrix_L(g, sur, definition.topology())
        report["cadence"] = cadence
        report["l_fixed_points"] = [format_profile(index_profile(j, g.k)) for j in l_matrix_fixed_points(l_matrix)]
        analysis = absorption_analysis(l_matrix)
        report["closed_classes"] = [[format_profile(index_profile(j + 1, g.k)) for j in members] for members in analysis.closed_classes]
        for t, index in enumerate(analysis.transient):
            report[f"hitting_time[{format_profile(index_profile(index + 1, g.k))}]"] = analysis.hitting_times[t]
        return report

    sbg = _require_utilities(build_state_game(definition, config), "chain")
    report["sep"] = config.sep
    report["epsilon"] = config.epsilon
    equilibria = recurrent_state_equilibria(sbg)
    report["recurrent_state_equilibria"] = len(equilibria)
    for e, eq in enumerate(equilibria, start=1):
        report[f"rse[{e}]"] = f"a*={format_profile(eq.action)} states={sorted(sbg.states[x - 1] for x in eq.state_set)}"
    chain = joint_chain(sbg)
    analysis = absorption_analysis(chain.transition)
    report["closed_classes"] = [
        [format_pair(*chain.pair(i), definition) for i in members] for members in analysis.closed_classes
    ]
    for c, pi in enumerate(analysis.stationary, start=1):
        report[f"stationary[{c}]"] = pi
    for index in range(chain.transition.shape[0]):
        pair = format_pair(*chain.pair(index), definition)
        report[f"absorption[{pair}]"] = [analysis.absorption_probability(index, c) for c in range(len(analysis.closed_classes))]
    for t, index in enumerate(analysis.transient):
        report[f"hitting_time[{format_pair(*chain.pair(index), definition)}]"] = analysis.hitting_times[t]
    return report


COMMANDS = ("verify", "design", "simulate", "chain")


def run_analysis(data: Dict[str, Any], command: str = "verify", **overrides) -> Report:
    """Load a definition from an in-memory dict and run one command; returns the report dict.

    Raises:
        DefinitionError: If the definition violates the schema.
        MissingPrerequisiteError: If the command lacks inputs the definition does not provide.
    """
    definition = load_definition_from_dict(data)
    config = resolve_config(definition, **overrides)
    if command == "verify":
        return run_verify(definition, config)
    if command == "design":
        return run_design(definition, config)[0]
    if command == "simulate":
        return run_simulate(definition, config)[0]
    if command == "chain":
        return run_chain(definition, config)
    raise ValueError(f"command must be one of {COMMANDS}, got {command!r}")
