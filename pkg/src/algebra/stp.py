"""Semi-tensor product algebra and the structural matrices built from it.

Strategy profiles are encoded player-1-most-significant with 1-based indices:
profile (a_1, ..., a_n) with cardinalities (k_1, ..., k_n) is the delta vector
δ_k^j, j = 1 + Σ_i (a_i - 1)·k_{i+1}···k_n.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm, prod
from typing import Iterable, Iterator, Sequence, Tuple

import numpy as np

from .ratmat import DimensionError, RationalMatrix, matmul

Profile = Tuple[int, ...]


@dataclass(frozen=True)
class DeltaVector:
    """δ_m^index, the index-th column of I_m."""

    dimension: int
    index: int

    def __post_init__(self) -> None:
        if not 1 <= self.index <= self.dimension:
            raise ValueError(f"delta index {self.index} outside 1..{self.dimension}")

    def to_matrix(self) -> RationalMatrix:
        col = [0] * self.dimension
        col[self.index - 1] = 1
        return RationalMatrix.column(col)


@dataclass(frozen=True)
class LogicalMatrix:
    """δ_m[i_1 ... i_r]: an m x r matrix whose j-th column is δ_m^{i_j}."""

    rows: int
    columns: Tuple[int, ...]

    def __post_init__(self) -> None:
        bad = [c for c in self.columns if not 1 <= c <= self.rows]
        if bad:
            raise ValueError(f"logical column indices {bad} outside 1..{self.rows}")

    @property
    def cols(self) -> int:
        return len(self.columns)

    def to_matrix(self) -> RationalMatrix:
        out = RationalMatrix.zeros(self.rows, self.cols).data.copy()
        for j, i in enumerate(self.columns):
            out[i - 1, j] = Fraction(1)
        return RationalMatrix(out)


@dataclass(frozen=True)
class StochasticMatrix:
    """Column-stochastic rational matrix: entries >= 0, every column sums to exactly 1."""

    matrix: RationalMatrix

    def __post_init__(self) -> None:
        m = self.matrix
        if any(x < 0 for x in m.entries()):
            raise ValueError("stochastic matrix has a negative entry")
        for j in range(m.cols):
            total = sum(m.column_vector(j), Fraction(0))
            if total != 1:
                raise ValueError(f"column {j + 1} sums to {total}, not 1")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction]], rows: int) -> "StochasticMatrix":
        data = np.empty((rows, len(columns)), dtype=object)
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise DimensionError(f"column {j + 1} has length {len(col)}, expected {rows}")
            data[:, j] = [Fraction(x) for x in col]
        return cls(RationalMatrix(data))

    @classmethod
    def from_logical(cls, logical: LogicalMatrix) -> "StochasticMatrix":
        return cls(logical.to_matrix())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def column(self, j: int) -> Tuple[Fraction, ...]:
        """0-based column j."""
        return self.matrix.column_vector(j)

    def entry(self, i: int, j: int) -> Fraction:
        return self.matrix.data[i, j]

    def is_logical(self) -> bool:
        return all(x in (0, 1) for x in self.matrix.entries())

    def to_logical(self) -> LogicalMatrix:
        if not self.is_logical():
            raise ValueError("matrix has fractional entries")
        return LogicalMatrix(self.matrix.rows, tuple(self.column(j).index(1) + 1 for j in range(self.matrix.cols)))


def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Kronecker product, shape (m·p) x (n·q)."""
    m, n = a.shape
    p, q = b.shape
    outer = np.multiply.outer(a.data, b.data)
    return RationalMatrix(outer.transpose(0, 2, 1, 3).reshape(m * p, n * q))


def kron_all(factors: Iterable[RationalMatrix]) -> RationalMatrix:
    out = RationalMatrix.identity(1)
    for f in factors:
        out = kron(out, f)
    return out


def stp(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Left semi-tensor product (A ⊗ I_{t/n})(B ⊗ I_{t/p}), t = lcm(cols(A), rows(B))."""
    n, p = a.cols, b.rows
    if n == 0 or p == 0:
        raise DimensionError(f"STP needs nonempty inner dimensions, got {a.shape} and {b.shape}")
    t = lcm(n, p)
    return matmul(kron(a, RationalMatrix.identity(t // n)), kron(b, RationalMatrix.identity(t // p)))


def stp_all(factors: Sequence[RationalMatrix]) -> RationalMatrix:
    if not factors:
        raise ValueError("empty STP product")
    out = factors[0]
    for f in factors[1:]:
        out = stp(out, f)
    return out


def swap_matrix(m: int, n: int) -> LogicalMatrix:
    """W_{[m,n]}: column (i-1)·n + j is δ_{mn}^{(j-1)·m + i}, so W·X·Y = Y·X for X ∈ Δ_m, Y ∈ Δ_n."""
    if m < 1 or n < 1:
        raise ValueError(f"swap matrix needs m, n >= 1, got {m}, {n}")
    return LogicalMatrix(m * n, tuple((j - 1) * m + i for i in range(1, m + 1) for j in range(1, n + 1)))


def delta_product(factors: Sequence[DeltaVector]) -> DeltaVector:
    """STP of delta vectors, computed on indices."""
    if not factors:
        raise ValueError("delta_product of an empty list")
    dim, idx = factors[0].dimension, factors[0].index
    for f in factors[1:]:
        idx = (idx - 1) * f.dimension + f.index
        dim *= f.dimension
    return DeltaVector(dim, idx)


def check_profile(a: Sequence[int], k: Sequence[int]) -> Profile:
    if len(a) != len(k):
        raise ValueError(f"profile {tuple(a)} has {len(a)} entries for {len(k)} players")
    for i, (ai, ki) in enumerate(zip(a, k), start=1):
        if not 1 <= ai <= ki:
            raise ValueError(f"strategy {ai} of player {i} outside 1..{ki}")
    return tuple(int(x) for x in a)


def profile_index(a: Sequence[int], k: Sequence[int]) -> int:
    """1-based lexicographic index of profile a (player 1 most significant)."""
    check_profile(a, k)
    return delta_product([DeltaVector(ki, ai) for ai, ki in zip(a, k)]).index


def index_profile(j: int, k: Sequence[int]) -> Profile:
    """Inverse of profile_index."""
    total = prod(k)
    if not 1 <= j <= total:
        raise ValueError(f"profile index {j} outside 1..{total}")
    rest = j - 1
    out = []
    for ki in reversed(k):
        rest, digit = divmod(rest, ki)
        out.append(digit + 1)
    return tuple(reversed(out))


def all_profiles(k: Sequence[int]) -> Iterator[Profile]:
    """All profiles in index order."""
    return product(*(range(1, ki + 1) for ki in k))


def _block(size_before: int, middle: RationalMatrix, size_after: int) -> RationalMatrix:
    return kron(kron(RationalMatrix.identity(size_before), middle), RationalMatrix.identity(size_after))


def e_matrix(i: int, k: Sequence[int]) -> RationalMatrix:
    """E_i = I_{k^[1,i-1]} ⊗ 1_{k_i} ⊗ I_{k^[i+1,n]}, shape k x (k/k_i); i is 1-based."""
    n = len(k)
    if not 1 <= i <= n:
        raise ValueError(f"player index {i} outside 1..{n}")
    return _block(prod(k[:i - 1]), RationalMatrix.ones(k[i - 1], 1), prod(k[i:]))


def drawing_matrix(u: Iterable[int], k: Sequence[int]) -> RationalMatrix:
    """Γ_U = ⊗_i γ_i with γ_i = I_{k_i} for i ∈ U and 1_{k_i}^T otherwise."""
    members = set(u)
    n = len(k)
    bad = sorted(x for x in members if not 1 <= x <= n)
    if bad:
        raise ValueError(f"players {bad} outside 1..{n}")
    return kron_all(
        RationalMatrix.identity(ki) if i in members else RationalMatrix.ones(1, ki)
        for i, ki in enumerate(k, start=1)
    )


def draw_profile(a: Sequence[int], u: Iterable[int]) -> Profile:
    """Sub-profile of the players in U, in increasing player order."""
    return tuple(a[i - 1] for i in sorted(set(u)))
