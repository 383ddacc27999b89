"""Joint (state, action) chain and exact absorbing-chain analysis of column-stochastic matrices."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from ..algebra.ratmat import RationalMatrix, RationalVector, inverse, matmul, solve_linear
from ..algebra.stp import Profile, StochasticMatrix, index_profile
from ..data.types import StateBasedGame
from .state_based import build_MF

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JointChain:
    """Transition of the pair process (x(t), a(t)); pair (x, a) sits at index (x-1)·k + profile_index(a) - 1."""

    transition: StochasticMatrix
    r: int
    k: Tuple[int, ...]

    @property
    def profile_count(self) -> int:
        return self.transition.shape[0] // self.r

    def pair(self, index: int) -> Tuple[int, Profile]:
        """(state, profile) at a 0-based chain index."""
        x, j = divmod(index, self.profile_count)
        return x + 1, index_profile(j + 1, self.k)

    def index(self, x: int, j: int) -> int:
        """0-based chain index of state x and 1-based profile index j."""
        return (x - 1) * self.profile_count + j - 1


@dataclass(frozen=True)
class AbsorptionAnalysis:
    """Exact analysis of a finite chain given by a column-stochastic matrix (0-based indices).

    absorption[t][c] is the probability that transient index transient[t] ends in
    closed_classes[c]; hitting_times[t] is the expected number of steps to leave the
    transient set; stationary[c] is the stationary law on closed_classes[c].
    """

    closed_classes: Tuple[Tuple[int, ...], ...]
    transient: Tuple[int, ...]
    fundamental: Optional[RationalMatrix]
    absorption: Tuple[RationalVector, ...]
    hitting_times: RationalVector
    stationary: Tuple[RationalVector, ...]

    def class_of(self, index: int) -> Optional[int]:
        for c, members in enumerate(self.closed_classes):
            if index in members:
                return c
        return None

    def absorption_probability(self, index: int, c: int) -> Fraction:
        """Probability of ending in class c from any index (0 or 1 when index is recurrent)."""
        home = self.class_of(index)
        if home is not None:
            return Fraction(int(home == c))
        return self.absorption[self.transient.index(index)][c]


def joint_chain(sbg: StateBasedGame, m_f: Optional[StochasticMatrix] = None) -> JointChain:
    """T[(x', a'), (x, a)] = M_P[x', (x, a)] · M_F[a', (x', a)]."""
    m_f = m_f or build_MF(sbg)
    k, r = sbg.profile_count, sbg.r
    size = r * k
    data = RationalMatrix.zeros(size, size).data.copy()
    for x in range(1, r + 1):
        for j in range(k):
            src = (x - 1) * k + j
            state_col = sbg.m_p.column(src)
            for y, p_state in enumerate(state_col, start=1):
                if not p_state:
                    continue
                action_col = m_f.column((y - 1) * k + j)
                for b, p_action in enumerate(action_col):
                    if p_action:
                        data[(y - 1) * k + b, src] += p_state * p_action
    return JointChain(transition=StochasticMatrix(RationalMatrix(data)), r=r, k=sbg.k)


def support_graph(m: StochasticMatrix) -> nx.DiGraph:
    """Edge j -> i whenever column j of m puts positive mass on row i."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(m.shape[1]))
    rows, cols = np.nonzero(m.matrix.data != 0)
    graph.add_edges_from(zip(cols.tolist(), rows.tolist()))
    return graph


def closed_classes(m: StochasticMatrix) -> Tuple[Tuple[int, ...], ...]:
    """Closed communicating classes: strongly connected components with no edge leaving them."""
    classes = [tuple(sorted(c)) for c in nx.attracting_components(support_graph(m))]
    return tuple(sorted(classes))


def _submatrix(p: RationalMatrix, rows, cols) -> RationalMatrix:
    if not rows or not cols:
        return RationalMatrix.zeros(len(rows), len(cols))
    return RationalMatrix(p.data[np.ix_(list(rows), list(cols))])


def stationary_distribution(p: RationalMatrix, members: Tuple[int, ...]) -> RationalVector:
    """π with π·P_C = π and Σπ = 1 on a closed class (P row-stochastic)."""
    pc = _submatrix(p, members, members)
    m = len(members)
    system = (pc.T - RationalMatrix.identity(m)).tolist() + [[1] * m]
    pi = solve_linear(RationalMatrix.from_rows(system, m), [0] * m + [1])
    if pi is None:
        raise ValueError(f"class {members} has no stationary distribution; it is not closed")
    return pi


def absorption_analysis(m: StochasticMatrix) -> AbsorptionAnalysis:
    """Closed classes, N = (I - Q)^-1, absorption probabilities, hitting times N·1 and stationary laws."""
    p = m.matrix.T
    classes = closed_classes(m)
    recurrent = {i for members in classes for i in members}
    transient = tuple(i for i in range(p.rows) if i not in recurrent)
    logger.debug("chain of size %d: %d closed classes, %d transient", p.rows, len(classes), len(transient))
    stationary = tuple(stationary_distribution(p, members) for members in classes)
    if not transient:
        return AbsorptionAnalysis(classes, (), None, (), (), stationary)
    q = _submatrix(p, transient, transient)
    n = inverse(RationalMatrix.identity(len(transient)) - q)
    to_class = RationalMatrix.from_rows(
        [[sum((p.data[t, j] for j in members), Fraction(0)) for members in classes] for t in transient],
        len(classes),
    )
    b = matmul(n, to_class)
    hitting = matmul(n, RationalMatrix.ones(len(transient), 1)).column_vector(0)
    return AbsorptionAnalysis(
        closed_classes=classes,
        transient=transient,
        fundamental=n,
        absorption=tuple(b.row_vector(t) for t in range(b.rows)),
        hitting_times=hitting,
        stationary=stationary,
    )


def l_matrix_fixed_points(l_matrix: StochasticMatrix) -> List[int]:
    """1-based profile indices j with L[j, j] = 1."""
    rows, cols = l_matrix.shape
    return [j + 1 for j in range(min(rows, cols)) if l_matrix.entry(j, j) == 1]
