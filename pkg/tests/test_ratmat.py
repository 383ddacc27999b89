from fractions import Fraction

import numpy as np
import pytest

from src.algebra.ratmat import (
    DimensionError,
    RationalMatrix,
    in_row_space,
    intersect_all,
    inverse,
    matmul,
    rank,
    row_space_basis,
    row_space_intersection,
    rref,
    solve_linear,
    to_rational,
    vstack,
)


def _random_matrix(rng, rows, cols, low=-3, high=3) -> RationalMatrix:
    return RationalMatrix.from_rows(rng.integers(low, high + 1, (rows, cols)).tolist())


def test_to_rational_accepts_exact_scalars_only():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(-2) == Fraction(-2)
    with pytest.raises(TypeError):
        to_rational(0.1)
    with pytest.raises(TypeError):
        to_rational(True)


def test_rref_normalizes_pivots():
    m = RationalMatrix.from_rows([[2, 4, 2], [1, 2, 3], [0, 0, 4]])
    reduced, pivots = rref(m)
    assert pivots == [0, 2]
    assert list(reduced[0]) == [1, 2, 0]
    assert list(reduced[1]) == [0, 0, 1]
    assert all(x == 0 for x in reduced[2])


def test_rank_of_empty_and_zero_matrices():
    assert rank(RationalMatrix.zeros(0, 3)) == 0
    assert rank(RationalMatrix.zeros(3, 3)) == 0
    assert rank(RationalMatrix.identity(4)) == 4


def test_solve_linear_pins_free_variables_to_zero():
    a = RationalMatrix.from_rows([[1, 1, 0], [0, 0, 1]])
    assert solve_linear(a, [3, "1/2"]) == (Fraction(3), Fraction(0), Fraction(1, 2))


def test_solve_linear_reports_inconsistency_as_none():
    a = RationalMatrix.from_rows([[1, 1], [2, 2]])
    assert solve_linear(a, [1, 3]) is None


def test_solve_linear_checks_rhs_length():
    with pytest.raises(DimensionError):
        solve_linear(RationalMatrix.identity(2), [1, 2, 3])


def test_inverse_is_exact():
    m = RationalMatrix.from_rows([[2, 1], [7, 4]])
    assert matmul(m, inverse(m)) == RationalMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(RationalMatrix.from_rows([[1, 2], [2, 4]]))


def test_matmul_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        matmul(RationalMatrix.identity(2), RationalMatrix.identity(3))


def test_row_space_intersection_of_coordinate_planes():
    xy = RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]])
    yz = RationalMatrix.from_rows([[0, 1, 0], [0, 0, 1]])
    both = row_space_intersection(xy, yz)
    assert both.rows == 1
    assert in_row_space([0, 5, 0], both)
    assert not in_row_space([1, 0, 0], both)


def test_intersection_with_disjoint_span_is_empty():
    x = RationalMatrix.from_rows([[1, 0]])
    y = RationalMatrix.from_rows([[0, 1]])
    assert row_space_intersection(x, y).shape == (0, 2)
    assert in_row_space([0, 0], row_space_intersection(x, y))


def test_in_row_space_checks_length():
    with pytest.raises(DimensionError):
        in_row_space([1, 2, 3], RationalMatrix.identity(2))


def test_rank_matches_floating_point_rank_on_small_integer_matrices(rng):
    for _ in range(100):
        rows, cols = rng.integers(1, 6, 2)
        m = _random_matrix(rng, int(rows), int(cols))
        expected = np.linalg.matrix_rank(np.array(m.tolist(), dtype=float))
        assert rank(m) == expected


def test_solve_linear_recovers_consistent_systems(rng):
    for _ in range(100):
        a = _random_matrix(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        x = RationalMatrix.column(rng.integers(-4, 5, a.cols).tolist())
        b = matmul(a, x).column_vector(0)
        solution = solve_linear(a, b)
        assert solution is not None
        assert matmul(a, RationalMatrix.column(solution)).column_vector(0) == b


def test_intersection_dimension_formula(rng):
    for _ in range(100):
        cols = int(rng.integers(2, 6))
        m1 = _random_matrix(rng, int(rng.integers(1, cols + 1)), cols, -2, 2)
        m2 = _random_matrix(rng, int(rng.integers(1, cols + 1)), cols, -2, 2)
        both = row_space_intersection(m1, m2)
        assert both.rows == rank(m1) + rank(m2) - rank(vstack(m1, m2))
        for r in range(both.rows):
            assert in_row_space(both.row_vector(r), m1)
            assert in_row_space(both.row_vector(r), m2)


def test_intersect_all_folds_in_order(rng):
    m = _random_matrix(rng, 3, 4)
    assert intersect_all([m]) == row_space_basis(m)
    assert intersect_all([m, m, m]).rows == rank(m)
