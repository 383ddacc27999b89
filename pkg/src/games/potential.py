"""Potential equation, potential extraction and neighborhood-determinant utility design."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Sequence, Tuple

from ..algebra.ratmat import (
    DimensionError,
    RationalMatrix,
    RationalVector,
    in_row_space,
    intersect_all,
    matmul,
    solve_linear,
    to_vector,
    vstack,
)
from ..algebra.stp import all_profiles, drawing_matrix, e_matrix, profile_index
from ..data.types import FiniteGame, ObjectiveFunction
from .model import deviate, payoff_eval

logger = logging.getLogger(__name__)


class SinglePlayerGameError(ValueError):
    """The potential equation is undefined for a one-player game."""


@dataclass(frozen=True)
class PotentialCertificate:
    """Solution ξ = (ξ_1, ..., ξ_n) of the potential equation and V_P = V^c_1 - ξ_1^T E_1^T."""

    xi: Tuple[RationalVector, ...]
    potential: RationalVector


@dataclass(frozen=True)
class UtilityDesign:
    """Local utilities V^c_i over a_{U(i)} and residuals V^d_i over a_{-i}.

    V^φ = V^c_i Γ_{U(i)} + V^d_i E_i^T for every player i.
    """

    neighborhoods: Tuple[Tuple[int, ...], ...]
    utilities: Tuple[RationalVector, ...]
    residuals: Tuple[RationalVector, ...]

    def lifted_utilities(self, k: Sequence[int]) -> Tuple[RationalVector, ...]:
        return tuple(
            lift_local_utility(v, u, k) for v, u in zip(self.utilities, self.neighborhoods)
        )

    def lifted_game(self, k: Sequence[int]) -> FiniteGame:
        return FiniteGame(tuple(k), self.lifted_utilities(k))

    def lifted_residuals(self, k: Sequence[int]) -> Tuple[RationalVector, ...]:
        """V^d_i E_i^T per player; entry a does not depend on a_i."""
        return tuple(
            matmul(RationalMatrix.row(d), e_matrix(i, k).T).row_vector(0)
            for i, d in enumerate(self.residuals, start=1)
        )

    def reconstructs(self, phi: Sequence, k: Sequence[int]) -> bool:
        """Whether V^c_i Γ_{U(i)} + V^d_i E_i^T equals V^φ for every player."""
        v = to_vector(phi)
        return all(
            tuple(c + d for c, d in zip(local, rest)) == v
            for local, rest in zip(self.lifted_utilities(k), self.lifted_residuals(k))
        )


def lift_local_utility(vector: Sequence, neighborhood: Iterable[int], k: Sequence[int]) -> RationalVector:
    """V^c Γ_U: a utility over the sub-profile of U as a full-length structure vector."""
    gamma = drawing_matrix(neighborhood, k)
    if len(vector) != gamma.rows:
        raise DimensionError(f"local utility has length {len(vector)}, neighborhood needs {gamma.rows}")
    return matmul(RationalMatrix.row(vector), gamma).row_vector(0)


def build_potential_equation(g: FiniteGame) -> Tuple[RationalMatrix, RationalVector]:
    """Coefficient matrix and right side of the potential equation.

    Block row i-1 (i = 2..n) is [-E_1, 0, ..., E_i, ..., 0] with right side (V^c_i - V^c_1)^T.

    Raises:
        SinglePlayerGameError: If g has one player.
    """
    n, k = g.n, g.k
    if n < 2:
        raise SinglePlayerGameError("the potential equation needs at least two players")
    size = g.profile_count
    es = [e_matrix(i, k) for i in range(1, n + 1)]
    widths = [e.cols for e in es]
    offsets = [sum(widths[:i]) for i in range(n)]
    data = RationalMatrix.zeros((n - 1) * size, sum(widths)).data.copy()
    rhs = []
    v1 = g.utilities[0]
    for i in range(2, n + 1):
        r0 = (i - 2) * size
        data[r0:r0 + size, 0:widths[0]] = (-es[0]).data
        data[r0:r0 + size, offsets[i - 1]:offsets[i - 1] + widths[i - 1]] = es[i - 1].data
        rhs.extend(vi - v1i for vi, v1i in zip(g.utilities[i - 1], v1))
    return RationalMatrix(data), tuple(rhs)


def is_potential(g: FiniteGame) -> Optional[PotentialCertificate]:
    """Certificate if g is a potential game, None otherwise.

    A one-player game is potential with V_P = V^c_1.
    """
    if g.n == 1:
        return PotentialCertificate(xi=(), potential=g.utilities[0])
    a, b = build_potential_equation(g)
    logger.debug("potential equation: %dx%d", a.rows, a.cols)
    xi = solve_linear(a, b)
    if xi is None:
        return None
    parts = []
    start = 0
    for i in range(g.n):
        width = g.profile_count // g.k[i]
        parts.append(xi[start:start + width])
        start += width
    lifted = matmul(e_matrix(1, g.k), RationalMatrix.column(parts[0])).column_vector(0)
    potential = tuple(v - d for v, d in zip(g.utilities[0], lifted))
    return PotentialCertificate(xi=tuple(parts), potential=potential)


def normalize_potential(v: Sequence) -> RationalVector:
    """Shift a potential so its value at profile (1, ..., 1) is 0."""
    v = to_vector(v)
    return tuple(x - v[0] for x in v)


def verify_potential_def(g: FiniteGame, potential: Sequence) -> bool:
    """Exhaustively check c_i(α, s_-i) - c_i(β, s_-i) = P(α, s_-i) - P(β, s_-i).

    Raises:
        DimensionError: If len(potential) != k.
    """
    p = to_vector(potential)
    if len(p) != g.profile_count:
        raise DimensionError(f"potential has length {len(p)}, expected {g.profile_count}")
    for a in all_profiles(g.k):
        base = profile_index(a, g.k) - 1
        for i in range(1, g.n + 1):
            ci = payoff_eval(g, i, a)
            for s in range(1, g.k[i - 1] + 1):
                b = deviate(a, i, s)
                if payoff_eval(g, i, b) - ci != p[profile_index(b, g.k) - 1] - p[base]:
                    return False
    return True


def design_space(neighborhood: Iterable[int], i: int, k: Sequence[int]) -> RationalMatrix:
    """[Γ_{U(i)}; E_i^T]: the row space of φ's that player i can be given locally."""
    return vstack(drawing_matrix(neighborhood, k), e_matrix(i, k).T)


def _as_neighborhoods(neighborhoods: Sequence[Iterable[int]], n: int) -> Tuple[Tuple[int, ...], ...]:
    out = tuple(tuple(sorted(set(u))) for u in neighborhoods)
    if len(out) != n:
        raise ValueError(f"{len(out)} neighborhoods for {n} players")
    for i, u in enumerate(out, start=1):
        if i not in u:
            raise ValueError(f"neighborhood of player {i} must contain {i}, got {u}")
    return out


def designability_basis(neighborhoods: Sequence[Iterable[int]], k: Sequence[int]) -> RationalMatrix:
    """Basis of ∩_i rowspace([Γ_{U(i)}; E_i^T]), folded over i = 1..n."""
    us = _as_neighborhoods(neighborhoods, len(k))
    return intersect_all([design_space(u, i, k) for i, u in enumerate(us, start=1)])


def _fixed_vector(phi: ObjectiveFunction) -> RationalVector:
    if phi.is_state_based:
        raise DimensionError("expected a fixed-topology objective (one block)")
    return phi.vector


def designability_report(phi: ObjectiveFunction, neighborhoods: Sequence[Iterable[int]], k: Sequence[int]) -> Tuple[bool, ...]:
    """Per player i: whether V^φ lies in rowspace([Γ_{U(i)}; E_i^T])."""
    v = _fixed_vector(phi)
    if len(v) != prod(k):
        raise DimensionError(f"objective length {len(v)} does not match k={tuple(k)}")
    us = _as_neighborhoods(neighborhoods, len(k))
    return tuple(in_row_space(v, design_space(u, i, k)) for i, u in enumerate(us, start=1))


def check_designability(phi: ObjectiveFunction, neighborhoods: Sequence[Iterable[int]], k: Sequence[int]) -> bool:
    """True iff neighborhood-determinant utilities with potential φ exist."""
    return all(designability_report(phi, neighborhoods, k))


def design_utilities(
    phi: ObjectiveFunction,
    neighborhoods: Sequence[Iterable[int]],
    k: Sequence[int],
) -> Optional[UtilityDesign]:
    """Solve V^φ = V^c_i Γ_{U(i)} + V^d_i E_i^T for every player (free variables zero).

    Returns None when some player's system is inconsistent, i.e. exactly when
    check_designability is False.
    """
    v = _fixed_vector(phi)
    us = _as_neighborhoods(neighborhoods, len(k))
    utilities, residuals = [], []
    for i, u in enumerate(us, start=1):
        space = design_space(u, i, k)
        y = solve_linear(space.T, v)
        if y is None:
            logger.info("objective is not designable for player %d with U=%s", i, u)
            return None
        split = drawing_matrix(u, k).rows
        utilities.append(y[:split])
        residuals.append(y[split:])
    return UtilityDesign(neighborhoods=us, utilities=tuple(utilities), residuals=tuple(residuals))


def is_neighborhood_determinant(g: FiniteGame, neighborhoods: Sequence[Iterable[int]]) -> bool:
    """Exhaustively check that every c_i depends only on a_{U(i)}."""
    us = _as_neighborhoods(neighborhoods, g.n)
    for i, u in enumerate(us, start=1):
        seen = {}
        for a in all_profiles(g.k):
            key = tuple(a[j - 1] for j in u)
            value = payoff_eval(g, i, a)
            if seen.setdefault(key, value) != value:
                return False
    return True


def potential_residual(a: RationalMatrix, xi: Sequence, b: Sequence) -> RationalVector:
    """a·ξ - b, exactly."""
    ax = matmul(a, RationalMatrix.column(xi)).column_vector(0)
    return tuple(x - y for x, y in zip(ax, to_vector(b)))


def constant_difference(p1: Sequence, p2: Sequence) -> Optional[Fraction]:
    """The constant c with p1 - p2 = c·1, or None if the difference is not constant."""
    diffs = {Fraction(x) - Fraction(y) for x, y in zip(p1, p2)}
    return diffs.pop() if len(diffs) == 1 else None
