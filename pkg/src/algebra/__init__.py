from .ratmat import (
    DimensionError,
    RationalMatrix,
    in_row_space,
    intersect_all,
    rank,
    row_space_intersection,
    solve_linear,
)
from .stp import (
    LogicalMatrix,
    StochasticMatrix,
    all_profiles,
    drawing_matrix,
    e_matrix,
    index_profile,
    profile_index,
    stp,
)

__all__ = [
    "DimensionError",
    "RationalMatrix",
    "in_row_space",
    "intersect_all",
    "rank",
    "row_space_intersection",
    "solve_linear",
    "LogicalMatrix",
    "StochasticMatrix",
    "all_profiles",
    "drawing_matrix",
    "e_matrix",
    "index_profile",
    "profile_index",
    "stp",
]
