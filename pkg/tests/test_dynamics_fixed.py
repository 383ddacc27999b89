from fractions import Fraction

import numpy as np
import pytest

from conftest import random_game, random_potential_game
from src.algebra.stp import all_profiles, profile_index
from src.data.types import FiniteGame
from src.dynamics.chain import l_matrix_fixed_points
from src.dynamics.fixed import (
    SURConfig,
    best_response_set,
    is_fixed_point,
    mbra_step,
    simulate,
    step_uniforms,
    transition_matrix_L,
    uniform_choice,
)
from src.games.model import is_nash, objective_eval, pure_nash_equilibria
from src.games.potential import design_utilities, is_potential
from src.run_analysis import build_game, build_objective
from src.scenarios import load_scenario

COORDINATION = FiniteGame((2, 2), (tuple(map(Fraction, (1, 0, 0, 1))),) * 2)
PD = FiniteGame((2, 2), (tuple(map(Fraction, (3, 0, 5, 1))), tuple(map(Fraction, (3, 5, 0, 1)))))


def test_best_response_of_third_player(example_3_1):
    g = build_game(example_3_1)
    for a in all_profiles(g.k):
        assert best_response_set(g, 3, a) == (1,)


def test_local_information_needs_topology(example_3_1):
    with pytest.raises(ValueError):
        best_response_set(build_game(example_3_1), 1, (1, 1, 1), information="local")


@pytest.mark.parametrize("name", ["example_3_1", "example_3_3_1"])
def test_designed_utilities_make_local_and_global_mbra_agree(name):
    definition = load_scenario(name)
    topology = definition.topology()
    k = definition.cardinalities
    design = design_utilities(build_objective(definition), topology.neighborhoods(), k)
    assert design is not None
    g = design.lifted_game(k)
    for a in all_profiles(k):
        for i in range(1, g.n + 1):
            assert best_response_set(g, i, a, "local", topology) == best_response_set(g, i, a, "global")


def test_fixed_points_are_nash_equilibria(rng):
    config = SURConfig(cadence="simultaneous", seed=0)
    for _ in range(100):
        n = int(rng.choice([2, 3]))
        k = tuple(int(v) for v in rng.choice([2, 3], n))
        g = random_game(rng, n, k)
        for a in all_profiles(k):
            assert is_fixed_point(g, a, config) == is_nash(g, a)


def test_sequential_mbra_never_lowers_the_potential(rng):
    config = SURConfig(cadence="roundrobin", seed=0)
    for trial in range(100):
        k = tuple(int(v) for v in rng.choice([2, 3], int(rng.choice([2, 3]))))
        g = random_potential_game(rng, k)
        potential = is_potential(g).potential
        a = tuple(int(rng.integers(1, ki + 1)) for ki in k)
        for t in range(12):
            b = mbra_step(g, a, config, step_uniforms(trial, t, g.n + 1), t)
            before = potential[profile_index(a, k) - 1]
            after = potential[profile_index(b, k) - 1]
            assert after >= before
            if b != a:
                assert after > before
            a = b


def test_round_robin_reaches_the_maximizer(example_3_1):
    g = build_game(example_3_1)
    objective = build_objective(example_3_1)
    trace = simulate(g, SURConfig(seed=31), (2, 2, 2), 50, objective)
    assert trace.final.profile == (1, 1, 1)
    assert trace.converged_at == len(trace.steps) - 1
    assert [s.t for s in trace.steps] == list(range(len(trace.steps)))
    for step in trace.steps:
        assert step.objective == objective_eval(objective, None, step.profile)
    values = [s.objective for s in trace.steps]
    assert values == sorted(values)


def test_simulation_is_deterministic_per_seed(rng):
    g = random_potential_game(rng, (3, 3, 2))
    config = SURConfig(cadence="random", seed=1234)
    first = simulate(g, config, (1, 1, 1), 30)
    second = simulate(g, config, (1, 1, 1), 30)
    assert [s.profile for s in first.steps] == [s.profile for s in second.steps]


def test_simulation_starting_at_equilibrium_stops_immediately():
    trace = simulate(PD, SURConfig(seed=0), (2, 2), 10)
    assert trace.converged_at == 0
    assert len(trace.steps) == 1


def test_simultaneous_mbra_can_cycle():
    trace = simulate(COORDINATION, SURConfig(cadence="simultaneous", seed=5), (1, 2), 6)
    assert trace.converged_at is None
    assert trace.first_revisit == 2
    assert [s.profile for s in trace.steps[:3]] == [(1, 2), (2, 1), (1, 2)]


def test_round_robin_idle_mover_is_not_a_revisit():
    trace = simulate(PD, SURConfig(cadence="roundrobin", seed=0), (2, 1), 10)
    assert [s.profile for s in trace.steps] == [(2, 1), (2, 1), (2, 2)]
    assert trace.converged_at == 2
    assert trace.first_revisit is None


def test_round_robin_revisit_needs_the_same_next_mover():
    pennies = build_game(load_scenario("matching_pennies"))
    trace = simulate(pennies, SURConfig(cadence="roundrobin", seed=0), (1, 1), 8)
    assert [s.profile for s in trace.steps[:6]] == [(1, 1), (1, 1), (1, 2), (2, 2), (2, 1), (1, 1)]
    assert trace.converged_at is None
    assert trace.first_revisit == 5


def test_simulate_rejects_zero_steps():
    with pytest.raises(ValueError):
        simulate(PD, SURConfig(seed=0), (1, 1), 0)


def test_transition_matrix_for_simultaneous_updates():
    l_matrix = transition_matrix_L(PD, SURConfig(cadence="simultaneous"))
    assert l_matrix.column(0) == (0, 0, 0, 1)
    assert l_matrix_fixed_points(l_matrix) == [4]


def test_random_cadence_fixed_points_are_nash(rng):
    for _ in range(20):
        g = random_game(rng, 2, (2, 3))
        l_matrix = transition_matrix_L(g, SURConfig(cadence="random"))
        nash = [profile_index(a, g.k) for a in pure_nash_equilibria(g)]
        assert l_matrix_fixed_points(l_matrix) == nash


def test_round_robin_has_no_transition_matrix():
    with pytest.raises(ValueError):
        transition_matrix_L(PD, SURConfig(cadence="roundrobin"))


def test_step_uniforms_are_reproducible():
    u = step_uniforms(7, 3, 4)
    assert len(u) == 4
    assert np.array_equal(u, step_uniforms(7, 3, 4))
    assert not np.array_equal(u, step_uniforms(7, 4, 4))


def test_uniform_choice_covers_the_options():
    assert uniform_choice((1, 2, 3), 0.0) == 1
    assert uniform_choice((1, 2, 3), 0.5) == 2
    assert uniform_choice((1, 2, 3), 0.999) == 3


def test_sur_config_validates():
    with pytest.raises(ValueError):
        SURConfig(cadence="sometimes")
    with pytest.raises(ValueError):
        SURConfig(information="telepathic")
    with pytest.raises(ValueError):
        SURConfig(rule="logit")


def test_sampled_updates_match_the_transition_matrix(example_3_1):
    g = build_game(example_3_1)
    config = SURConfig(cadence="random", seed=0)
    l_matrix = transition_matrix_L(g, config)
    samples = 10_000
    for a in [(2, 2, 2), (1, 2, 1)]:
        j = profile_index(a, g.k) - 1
        counts = np.zeros(g.profile_count)
        for t in range(samples):
            b = mbra_step(g, a, config, step_uniforms(97 + j, t, g.n + 1), t)
            counts[profile_index(b, g.k) - 1] += 1
        for row, p in enumerate(l_matrix.column(j)):
            p = float(p)
            band = 4 * (p * (1 - p) / samples) ** 0.5
            assert abs(counts[row] / samples - p) <= band
