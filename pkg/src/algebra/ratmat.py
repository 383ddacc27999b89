"""Exact rational dense linear algebra on numpy object arrays of Fractions.

Every span-membership and solvability question in this package is decided here,
by Gauss-Jordan elimination over the rationals, never by a floating-point tolerance.
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

Rational = Fraction
RationalVector = Tuple[Fraction, ...]
Scalar = Union[Fraction, int, str]


class DimensionError(ValueError):
    """Operand shapes do not satisfy an operation's contract."""


def to_rational(value: Scalar) -> Fraction:
    """Convert an exact scalar (int, Fraction or 'p/q' string) to a Fraction.

    Floats are rejected: a float literal such as 0.1 is not the rational 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}: {value!r}")


def to_vector(values: Iterable[Scalar]) -> RationalVector:
    return tuple(to_rational(v) for v in values)


def _fraction_array(values, rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    for idx, v in np.ndenumerate(np.asarray(values, dtype=object).reshape(rows, cols)):
        out[idx] = to_rational(v)
    return out


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    """Dense rows x cols matrix of Fractions. Empty shapes (0 rows or 0 cols) are allowed."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2 or self.data.dtype != object:
            raise DimensionError(f"expected a 2-D object array, got ndim={self.data.ndim} dtype={self.data.dtype}")
        self.data.flags.writeable = False

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "RationalMatrix":
        n_rows = len(rows)
        if n_rows == 0:
            return cls.zeros(0, cols or 0)
        n_cols = len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise DimensionError("ragged rows")
        if cols is not None and cols != n_cols:
            raise DimensionError(f"rows have {n_cols} columns, expected {cols}")
        return cls(_fraction_array([list(r) for r in rows], n_rows, n_cols))

    @classmethod
    def from_array(cls, values: np.ndarray) -> "RationalMatrix":
        arr = np.asarray(values, dtype=object)
        if arr.ndim != 2:
            raise DimensionError(f"expected 2-D input, got ndim={arr.ndim}")
        return cls(_fraction_array(arr, arr.shape[0], arr.shape[1]))

    @classmethod
    def row(cls, values: Iterable[Scalar]) -> "RationalMatrix":
        v = list(values)
        return cls(_fraction_array(v, 1, len(v)))

    @classmethod
    def column(cls, values: Iterable[Scalar]) -> "RationalMatrix":
        v = list(values)
        return cls(_fraction_array(v, len(v), 1))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(_fraction_array(np.zeros(rows * cols, dtype=int), rows, cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(_fraction_array(np.eye(n, dtype=int), n, n))

    @classmethod
    def ones(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(_fraction_array(np.ones(rows * cols, dtype=int), rows, cols))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self.data.T.copy())

    def entries(self) -> RationalVector:
        """Row-major entries."""
        return tuple(self.data.ravel())

    def row_vector(self, i: int) -> RationalVector:
        return tuple(self.data[i])

    def column_vector(self, j: int) -> RationalVector:
        return tuple(self.data[:, j])

    def tolist(self) -> list:
        return self.data.tolist()

    def __getitem__(self, key):
        return self.data[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.data == other.data))

    def __hash__(self) -> int:
        return hash((self.shape, self.entries()))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return matmul(self, other)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix(self.data + other.data)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RationalMatrix(self.data - other.data)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(-self.data)

    def scale(self, factor: Scalar) -> "RationalMatrix":
        return RationalMatrix(self.data * to_rational(factor))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.empty((a.rows, b.cols), dtype=object)
    for i in range(a.rows):
        for j in range(b.cols):
            out[i, j] = sum((x * y for x, y in zip(a.data[i], b.data[:, j]) if x and y), Fraction(0))
    return RationalMatrix(out)


def vstack(*blocks: RationalMatrix) -> RationalMatrix:
    """Stack matrices on top of each other (all with the same column count)."""
    if not blocks:
        raise DimensionError("nothing to stack")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionError(f"column counts differ: {[b.cols for b in blocks]}")
    return RationalMatrix(np.concatenate([b.data for b in blocks], axis=0))


def hstack(*blocks: RationalMatrix) -> RationalMatrix:
    if not blocks:
        raise DimensionError("nothing to stack")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionError(f"row counts differ: {[b.rows for b in blocks]}")
    return RationalMatrix(np.concatenate([b.data for b in blocks], axis=1))


def block_diag(*blocks: RationalMatrix) -> RationalMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = RationalMatrix.zeros(rows, cols).data.copy()
    r = c = 0
    for b in blocks:
        out[r:r + b.rows, c:c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return RationalMatrix(out)


def rref(m: RationalMatrix) -> Tuple[np.ndarray, list]:
    """Reduced row-echelon form by Gauss-Jordan elimination.

    Returns:
        (reduced array, pivot column indices). Pivot rows are normalized to a leading 1;
        rows below len(pivots) are zero.
    """
    work = m.data.copy()
    n_rows, n_cols = work.shape
    pivots: list = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if work[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            work[[r, p]] = work[[p, r]]
        work[r] = work[r] / work[r, c]
        for i in range(n_rows):
            if i != r and work[i, c] != 0:
                work[i] = work[i] - work[i, c] * work[r]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(m: RationalMatrix) -> int:
    """Dimension of the row space of m."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def solve_linear(a: RationalMatrix, b: Sequence[Scalar]) -> Optional[RationalVector]:
    """One particular solution of a·x = b, free variables fixed to 0.

    Returns None when the system is inconsistent.

    Raises:
        DimensionError: If len(b) != a.rows.
    """
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {a.rows} rows")
    if a.cols == 0:
        return () if all(to_rational(v) == 0 for v in b) else None
    augmented = hstack(a, RationalMatrix.column(b))
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for row, c in enumerate(pivots):
        x[c] = reduced[row, a.cols]
    return tuple(x)


def solve_many(a: RationalMatrix, b: RationalMatrix) -> Optional[RationalMatrix]:
    """Solve a·X = b column by column in one elimination; None if any column is inconsistent."""
    if a.rows != b.rows:
        raise DimensionError(f"right-hand side has {b.rows} rows, matrix has {a.rows}")
    reduced, pivots = rref(hstack(a, b))
    if any(c >= a.cols for c in pivots):
        return None
    out = RationalMatrix.zeros(a.cols, b.cols).data.copy()
    for row, c in enumerate(pivots):
        out[c] = reduced[row, a.cols:]
    return RationalMatrix(out)


def inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse of a square matrix.

    Raises:
        DimensionError: If m is not square.
        ZeroDivisionError: If m is singular.
    """
    if m.rows != m.cols:
        raise DimensionError(f"cannot invert a {m.shape} matrix")
    out = solve_many(m, RationalMatrix.identity(m.rows))
    if out is None or rank(m) < m.rows:
        raise ZeroDivisionError("matrix is singular")
    return out


def row_space_basis(m: RationalMatrix) -> RationalMatrix:
    """Nonzero rows of the reduced row-echelon form of m (0 rows for the zero span)."""
    if m.rows == 0 or m.cols == 0:
        return RationalMatrix.zeros(0, m.cols)
    reduced, pivots = rref(m)
    return RationalMatrix(reduced[:len(pivots)].copy())


def row_space_intersection(m1: RationalMatrix, m2: RationalMatrix) -> RationalMatrix:
    """Basis of rowspace(m1) ∩ rowspace(m2) (Zassenhaus).

    Reduce [[m1, m1], [m2, 0]]; the rows whose left half vanishes carry the
    intersection in their right half.

    Raises:
        DimensionError: If the column counts differ.
    """
    if m1.cols != m2.cols:
        raise DimensionError(f"column counts differ: {m1.cols} vs {m2.cols}")
    n = m1.cols
    if m1.rows == 0 or m2.rows == 0 or n == 0:
        return RationalMatrix.zeros(0, n)
    top = hstack(m1, m1)
    bottom = hstack(m2, RationalMatrix.zeros(m2.rows, n))
    reduced, pivots = rref(vstack(top, bottom))
    picked = [reduced[row, n:] for row, c in enumerate(pivots) if c >= n]
    if not picked:
        return RationalMatrix.zeros(0, n)
    return row_space_basis(RationalMatrix(np.array(picked, dtype=object).reshape(len(picked), n)))


def intersect_all(matrices: Sequence[RationalMatrix]) -> RationalMatrix:
    """Fold row_space_intersection over matrices in the given order."""
    if not matrices:
        raise DimensionError("need at least one matrix")
    acc = row_space_basis(matrices[0])
    for m in matrices[1:]:
        acc = row_space_intersection(acc, m)
    return acc


def in_row_space(v: Sequence[Scalar], m: RationalMatrix) -> bool:
    """True iff v is a linear combination of the rows of m.

    Raises:
        DimensionError: If len(v) != m.cols.
    """
    if len(v) != m.cols:
        raise DimensionError(f"vector has length {len(v)}, matrix has {m.cols} columns")
    if m.rows == 0:
        return all(to_rational(x) == 0 for x in v)
    return rank(vstack(m, RationalMatrix.row(v))) == rank(m)
