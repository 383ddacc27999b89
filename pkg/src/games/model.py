"""Payoff evaluation, network games, system objectives and pure Nash enumeration."""
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from ..algebra.ratmat import RationalVector, to_vector
from ..algebra.stp import Profile, all_profiles, check_profile, profile_index
from ..data.types import FNG, FiniteGame, NetworkTopology, ObjectiveFunction

Orientation = Set[Tuple[int, int]]


def payoff_eval(g: FiniteGame, i: int, a: Sequence[int]) -> Fraction:
    """c_i(a): entry of V^c_i at the profile's index."""
    if not 1 <= i <= g.n:
        raise ValueError(f"player {i} outside 1..{g.n}")
    return g.utilities[i - 1][profile_index(a, g.k) - 1]


def deviate(a: Sequence[int], i: int, s: int) -> Profile:
    """a with player i's strategy replaced by s."""
    out = list(a)
    out[i - 1] = s
    return tuple(out)


def _pair_payoff(fng: FNG, i: int, j: int, ai: int, aj: int, orientation: Optional[Orientation]) -> Fraction:
    """c_ij(a_i, a_j): player i's payoff in the FNG played against j."""
    if orientation is None:
        if not fng.is_symmetric:
            raise ValueError("an asymmetric FNG needs an edge orientation (row player, column player)")
        return fng.row_payoff[(ai - 1) * fng.k_col + aj - 1]
    if (i, j) in orientation:
        return fng.row_payoff[(ai - 1) * fng.k_col + aj - 1]
    if (j, i) in orientation:
        return fng.col_payoff[(aj - 1) * fng.k_col + ai - 1]
    raise ValueError(f"edge ({i}, {j}) has no orientation")


def aggregate_utility(
    topology: NetworkTopology,
    fng: FNG,
    i: int,
    a: Sequence[int],
    orientation: Optional[Orientation] = None,
) -> Fraction:
    """Overall payoff Σ_{j ∈ U(i)\\{i}} c_ij(a_i, a_j).

    With a symmetric FNG node i always plays the row role; an asymmetric FNG needs
    `orientation`, a set of (row, column) node pairs covering every edge.
    """
    if fng.k_row != fng.k_col:
        raise ValueError("network games need an FNG with equal strategy counts")
    total = Fraction(0)
    for j in sorted(topology.neighborhood(i) - {i}):
        total += _pair_payoff(fng, i, j, a[i - 1], a[j - 1], orientation)
    return total


def network_game(
    topology: NetworkTopology,
    fng: FNG,
    orientation: Optional[Orientation] = None,
) -> FiniteGame:
    """FiniteGame whose c_i is the aggregate FNG payoff over i's neighbours."""
    k = (fng.k_row,) * topology.n
    utilities = []
    for i in range(1, topology.n + 1):
        utilities.append(tuple(aggregate_utility(topology, fng, i, a, orientation) for a in all_profiles(k)))
    return FiniteGame(k, tuple(utilities))


def edge_potential_objective(
    topology: NetworkTopology,
    potential: Sequence,
    k: Sequence[int],
) -> ObjectiveFunction:
    """φ(a) = Σ_{(i,j) ∈ E, i<j} P(a_i, a_j) for a two-player potential P (length k_i·k_j)."""
    p = to_vector(potential)
    kk = k[0]
    if any(ki != kk for ki in k) or len(p) != kk * kk:
        raise ValueError("edge potential needs equal cardinalities and a potential of length k_i^2")
    values = []
    for a in all_profiles(k):
        values.append(sum((p[(a[i - 1] - 1) * kk + a[j - 1] - 1] for i, j in topology.sorted_edges()), Fraction(0)))
    return ObjectiveFunction(tuple(k), tuple(values))


def consensus_value(topology: NetworkTopology, a: Sequence[int]) -> Fraction:
    """2·Σ_i 1{a_i = 1} + Σ over ordered neighbour pairs of 1{a_i = a_j}/2."""
    value = Fraction(2 * sum(1 for ai in a if ai == 1))
    for i, j in topology.edges:
        if a[i - 1] == a[j - 1]:
            # (i, j) and (j, i) each contribute 1/2
            value += 1
    return value


def consensus_objective(per_state_topologies: Sequence[NetworkTopology], k: Sequence[int]) -> ObjectiveFunction:
    """State based consensus objective, one block per topology."""
    if any(ki != 2 for ki in k):
        raise ValueError(f"the consensus objective needs binary agents, got k={tuple(k)}")
    values: List[Fraction] = []
    for topology in per_state_topologies:
        if topology.n != len(k):
            raise ValueError(f"topology has {topology.n} nodes for {len(k)} agents")
        values.extend(consensus_value(topology, a) for a in all_profiles(k))
    return ObjectiveFunction(tuple(k), tuple(values), states=len(per_state_topologies))


def objective_eval(phi: ObjectiveFunction, x: Optional[int], a: Sequence[int]) -> Fraction:
    """φ(a) for a fixed objective (x must be None) or φ(x, a) for a state based one."""
    if phi.is_state_based and x is None:
        raise ValueError("state based objective needs a state index")
    if not phi.is_state_based and x is not None:
        raise ValueError("fixed-topology objective takes no state index")
    return phi.block(x or 1)[profile_index(a, phi.k) - 1]


def is_nash(g: FiniteGame, a: Sequence[int]) -> bool:
    """No player has a strictly improving unilateral deviation."""
    a = check_profile(a, g.k)
    for i in range(1, g.n + 1):
        current = payoff_eval(g, i, a)
        if any(payoff_eval(g, i, deviate(a, i, s)) > current for s in range(1, g.k[i - 1] + 1)):
            return False
    return True


def pure_nash_equilibria(g: FiniteGame) -> List[Profile]:
    """All pure Nash equilibria, in profile index order."""
    return [a for a in all_profiles(g.k) if is_nash(g, a)]


def structure_vector(fn, k: Sequence[int]) -> RationalVector:
    """Structure vector of a function of the profile."""
    return tuple(Fraction(fn(a)) for a in all_profiles(k))


def profiles_agreeing_on(a: Sequence[int], players: Iterable[int], k: Sequence[int]) -> List[Profile]:
    """All profiles equal to a on `players`."""
    fixed = set(players)
    return [b for b in all_profiles(k) if all(b[j - 1] == a[j - 1] for j in fixed)]
