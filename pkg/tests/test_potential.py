from collections import deque
from fractions import Fraction
from typing import Optional, Tuple

import pytest

from conftest import random_game, random_potential_game
from src.algebra.ratmat import DimensionError, in_row_space
from src.algebra.stp import all_profiles, profile_index
from src.data.types import FNG, FiniteGame, NetworkTopology, ObjectiveFunction
from src.games.model import deviate, edge_potential_objective, network_game, payoff_eval
from src.games.potential import (
    SinglePlayerGameError,
    build_potential_equation,
    check_designability,
    constant_difference,
    design_utilities,
    designability_basis,
    designability_report,
    is_neighborhood_determinant,
    is_potential,
    lift_local_utility,
    normalize_potential,
    potential_residual,
    verify_potential_def,
)
from src.repro import OBJECTIVE_3_3_1, PD_POTENTIAL, POTENTIAL_3_1, XI_3_1
from src.run_analysis import build_game, build_objective

PD = FNG(2, 2, tuple(map(Fraction, (3, 0, 5, 1))), tuple(map(Fraction, (3, 5, 0, 1))))
PENNIES = FiniteGame((2, 2), (tuple(map(Fraction, (1, -1, -1, 1))), tuple(map(Fraction, (-1, 1, 1, -1)))))


def brute_force_potential(g: FiniteGame) -> Optional[Tuple[Fraction, ...]]:
    """Walk the unilateral-deviation graph from (1, ..., 1) and check every edge."""
    start = tuple(1 for _ in g.k)
    values = {start: Fraction(0)}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for i in range(1, g.n + 1):
            for s in range(1, g.k[i - 1] + 1):
                b = deviate(a, i, s)
                step = payoff_eval(g, i, b) - payoff_eval(g, i, a)
                if b not in values:
                    values[b] = values[a] + step
                    queue.append(b)
                elif values[b] - values[a] != step:
                    return None
    return tuple(values[a] for a in all_profiles(g.k))


def assert_residuals_ignore_own_strategy(design, k) -> None:
    for i, rest in enumerate(design.lifted_residuals(k), start=1):
        for a in all_profiles(k):
            here = rest[profile_index(a, k) - 1]
            assert all(rest[profile_index(deviate(a, i, s), k) - 1] == here for s in range(1, k[i - 1] + 1))


def test_example_3_1_equation_and_solution(example_3_1):
    g = build_game(example_3_1)
    a, b = build_potential_equation(g)
    assert a.shape == (16, 12)
    assert all(r == 0 for r in potential_residual(a, XI_3_1, b))


def test_example_3_1_potential_is_objective_up_to_constant(example_3_1):
    g = build_game(example_3_1)
    certificate = is_potential(g)
    assert certificate is not None
    assert normalize_potential(certificate.potential) == normalize_potential(POTENTIAL_3_1)
    objective = build_objective(example_3_1)
    assert constant_difference(objective.vector, certificate.potential) is not None
    assert verify_potential_def(g, objective.vector)


def test_prisoners_dilemma_is_potential():
    certificate = is_potential(PD.as_game())
    assert certificate is not None
    assert normalize_potential(certificate.potential) == normalize_potential(PD_POTENTIAL)
    assert verify_potential_def(PD.as_game(), PD_POTENTIAL)
    assert verify_potential_def(PD.as_game(), [p + 7 for p in PD_POTENTIAL])


def test_matching_pennies_is_not_potential():
    assert is_potential(PENNIES) is None
    assert not verify_potential_def(PENNIES, (0, 0, 0, 0))


def test_single_player_game():
    g = FiniteGame((3,), ((Fraction(1), Fraction(5), Fraction(2)),))
    assert is_potential(g).potential == g.utilities[0]
    with pytest.raises(SinglePlayerGameError):
        build_potential_equation(g)


def test_verify_potential_def_checks_length():
    with pytest.raises(DimensionError):
        verify_potential_def(PD.as_game(), (1, 2, 3))


def test_potential_equation_agrees_with_brute_force(rng):
    for t in range(200):
        n = int(rng.choice([2, 3]))
        k = tuple(int(v) for v in rng.choice([2, 3], n))
        g = random_potential_game(rng, k) if t % 2 else random_game(rng, n, k)
        certificate = is_potential(g)
        oracle = brute_force_potential(g)
        assert (certificate is not None) == (oracle is not None)
        if certificate is not None:
            assert constant_difference(certificate.potential, oracle) is not None
            assert verify_potential_def(g, certificate.potential)


def test_potentials_differ_by_a_constant(rng):
    for _ in range(100):
        k = tuple(int(v) for v in rng.choice([2, 3], 2))
        g = random_potential_game(rng, k)
        certificate = is_potential(g)
        c = int(rng.integers(-9, 10))
        shifted = [p + c for p in certificate.potential]
        assert verify_potential_def(g, shifted)
        assert constant_difference(shifted, certificate.potential) == c
        assert normalize_potential(shifted) == normalize_potential(certificate.potential)


def test_constant_difference():
    assert constant_difference((3, 4), (1, 2)) == 2
    assert constant_difference((3, 4), (1, 1)) is None


def test_example_3_3_1_is_designable(example_3_3_1):
    objective = build_objective(example_3_3_1)
    hoods = example_3_3_1.topology().neighborhoods()
    k = example_3_3_1.cardinalities
    assert objective.vector == tuple(Fraction(v) for v in OBJECTIVE_3_3_1)
    assert designability_report(objective, hoods, k) == (True, True, True, True)
    assert in_row_space(objective.vector, designability_basis(hoods, k))
    design = design_utilities(objective, hoods, k)
    assert design is not None
    assert len(design.utilities) == 4
    lifted = design.lifted_game(k)
    assert verify_potential_def(lifted, objective.vector)
    assert is_neighborhood_determinant(lifted, hoods)
    assert design.reconstructs(objective.vector, k)
    assert_residuals_ignore_own_strategy(design, k)


def test_network_game_on_cycle_has_edge_potential(example_3_3_1):
    g = network_game(example_3_3_1.topology(), PD)
    assert verify_potential_def(g, build_objective(example_3_3_1).vector)


def test_line_counterexample_fails_at_player_one():
    line = NetworkTopology.from_edges(3, [(1, 2), (2, 3)])
    objective = ObjectiveFunction((2, 2, 2), tuple(map(Fraction, (1, 0, 1, 0, 0, 1, 0, 1))))
    report = designability_report(objective, line.neighborhoods(), (2, 2, 2))
    assert report == (False, True, False)
    assert not check_designability(objective, line.neighborhoods(), (2, 2, 2))
    assert design_utilities(objective, line.neighborhoods(), (2, 2, 2)) is None


def test_full_neighborhoods_make_every_objective_designable(rng):
    k = (2, 3)
    full = [{1, 2}, {1, 2}]
    for _ in range(20):
        objective = ObjectiveFunction(k, tuple(Fraction(int(v)) for v in rng.integers(-5, 6, 6)))
        design = design_utilities(objective, full, k)
        assert design is not None
        assert verify_potential_def(design.lifted_game(k), objective.vector)


def test_design_succeeds_exactly_when_designable(rng):
    k = (2, 2, 2)
    outcomes = set()
    for t in range(40):
        edges = [(1, 2)] + [e for e in [(1, 3), (2, 3)] if rng.random() < 0.5]
        topology = NetworkTopology.from_edges(3, edges)
        hoods = topology.neighborhoods()
        if t % 2:
            objective = edge_potential_objective(topology, [int(v) for v in rng.integers(-5, 6, 4)], k)
        else:
            objective = ObjectiveFunction(k, tuple(Fraction(int(v)) for v in rng.integers(-5, 6, 8)))
        designable = check_designability(objective, hoods, k)
        design = design_utilities(objective, hoods, k)
        assert (design is not None) == designable
        outcomes.add(designable)
        if design is not None:
            assert design.reconstructs(objective.vector, k)
            assert_residuals_ignore_own_strategy(design, k)
            lifted = design.lifted_game(k)
            assert verify_potential_def(lifted, objective.vector)
            assert is_neighborhood_determinant(lifted, hoods)
    assert outcomes == {True, False}


def test_neighborhood_must_contain_player():
    objective = ObjectiveFunction((2, 2), tuple(map(Fraction, (1, 2, 3, 4))))
    with pytest.raises(ValueError):
        designability_report(objective, [{2}, {2}], (2, 2))


def test_lift_local_utility():
    lifted = lift_local_utility((1, 2), {2}, (2, 2))
    assert lifted == (1, 2, 1, 2)
    with pytest.raises(DimensionError):
        lift_local_utility((1, 2, 3), {2}, (2, 2))


def test_is_neighborhood_determinant_detects_outside_dependence(example_3_3_1):
    g = network_game(example_3_3_1.topology(), PD)
    assert is_neighborhood_determinant(g, example_3_3_1.topology().neighborhoods())
    assert not is_neighborhood_determinant(g, [{1}, {2}, {3}, {4}])
