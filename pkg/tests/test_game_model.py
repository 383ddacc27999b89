from fractions import Fraction

import pytest

from src.data.types import FNG, FiniteGame, NetworkTopology, ObjectiveFunction
from src.games.model import (
    aggregate_utility,
    consensus_objective,
    deviate,
    edge_potential_objective,
    is_nash,
    network_game,
    objective_eval,
    payoff_eval,
    profiles_agreeing_on,
    pure_nash_equilibria,
)
from src.repro import CONSENSUS_BLOCKS, OBJECTIVE_3_3_1
from src.run_analysis import build_game

PD = FNG(2, 2, tuple(map(Fraction, (3, 0, 5, 1))), tuple(map(Fraction, (3, 5, 0, 1))))
CYCLE = NetworkTopology.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


def test_payoff_eval_reads_structure_vector(example_3_1):
    g = build_game(example_3_1)
    assert payoff_eval(g, 1, (1, 1, 1)) == 2
    assert payoff_eval(g, 3, (2, 1, 2)) == 0
    with pytest.raises(ValueError):
        payoff_eval(g, 4, (1, 1, 1))


def test_deviate_replaces_one_strategy():
    assert deviate((1, 2, 1), 2, 1) == (1, 1, 1)


def test_topology_neighborhoods_include_the_node():
    assert CYCLE.neighborhood(1) == frozenset({1, 2, 4})
    assert CYCLE.neighborhood(4) == frozenset({1, 3, 4})
    with pytest.raises(ValueError):
        NetworkTopology.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        NetworkTopology.from_edges(3, [(1, 4)])


def test_network_game_sums_pair_payoffs():
    g = network_game(CYCLE, PD)
    # player 1 defects against two cooperators
    assert payoff_eval(g, 1, (2, 1, 1, 1)) == 10
    assert payoff_eval(g, 3, (2, 1, 1, 1)) == 6
    assert payoff_eval(g, 4, (2, 1, 1, 1)) == 3


def test_asymmetric_fng_needs_orientation():
    battle = FNG(2, 2, tuple(map(Fraction, (2, 0, 0, 1))), tuple(map(Fraction, (1, 0, 0, 2))))
    line = NetworkTopology.from_edges(2, [(1, 2)])
    with pytest.raises(ValueError):
        aggregate_utility(line, battle, 1, (1, 1))
    g = network_game(line, battle, orientation={(1, 2)})
    assert payoff_eval(g, 1, (1, 1)) == 2
    assert payoff_eval(g, 2, (1, 1)) == 1
    assert payoff_eval(g, 2, (2, 2)) == 2


def test_edge_potential_objective_matches_cycle_example():
    objective = edge_potential_objective(CYCLE, (-2, 0, 0, 1), (2, 2, 2, 2))
    assert objective.vector == tuple(Fraction(v) for v in OBJECTIVE_3_3_1)


def test_consensus_objective_blocks(example_4_3_1):
    objective = consensus_objective(example_4_3_1.state_topologies(), example_4_3_1.cardinalities)
    assert objective.states == 3
    for x, block in enumerate(CONSENSUS_BLOCKS, start=1):
        assert objective.block(x) == tuple(Fraction(v) for v in block)


def test_consensus_objective_needs_binary_agents():
    with pytest.raises(ValueError):
        consensus_objective([CYCLE], (2, 3, 2, 2))


def test_objective_eval(example_3_1, example_4_3_1):
    fixed = ObjectiveFunction((2, 2, 2), tuple(map(Fraction, (3, 2, 2, 1, 2, 1, 1, 0))))
    assert objective_eval(fixed, None, (1, 1, 1)) == 3
    consensus = consensus_objective(example_4_3_1.state_topologies(), example_4_3_1.cardinalities)
    assert objective_eval(consensus, 2, (1, 1, 1, 1)) == 12
    with pytest.raises(ValueError):
        objective_eval(consensus, None, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        objective_eval(fixed, 1, (1, 1, 1))


def test_pure_nash_equilibria(example_3_1):
    assert (1, 1, 1) in pure_nash_equilibria(build_game(example_3_1))
    assert pure_nash_equilibria(PD.as_game()) == [(2, 2)]
    pennies = FiniteGame((2, 2), (tuple(map(Fraction, (1, -1, -1, 1))), tuple(map(Fraction, (-1, 1, 1, -1)))))
    assert pure_nash_equilibria(pennies) == []
    assert not is_nash(PD.as_game(), (1, 1))


def test_profiles_agreeing_on():
    profiles = profiles_agreeing_on((1, 2, 1), [2], (2, 2, 2))
    assert len(profiles) == 4
    assert all(a[1] == 2 for a in profiles)


def test_finite_game_validates_lengths():
    with pytest.raises(ValueError):
        FiniteGame((2, 2), ((1, 2, 3, 4),))
    with pytest.raises(ValueError):
        FiniteGame((2, 2), ((1, 2, 3), (1, 2, 3, 4)))
