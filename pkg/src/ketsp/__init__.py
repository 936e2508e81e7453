"""Exact Euclidean TSP for point sets with few points inside the convex hull."""

from .errors import (CapacityError, DegenerateInstanceError, DistinctnessError, EmptyInstanceError,
                     KetspError, ParseError, PreconditionError, SearchExhaustedError)
from .geometry import Point, convex_hull, make_points
from .instance import GetsphInstance, PathSolution, Tour, dp_solve, held_karp_tsp
from .kernel import reduce_instance
from .separator import SearchStats, SolverConfig, solve_getsph
from .solver import KetspResult, lower_bound_hull, solve_ketsp

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DegenerateInstanceError", "DistinctnessError", "EmptyInstanceError",
    "GetsphInstance", "KetspError", "KetspResult", "ParseError", "PathSolution", "Point",
    "PreconditionError", "SearchExhaustedError", "SearchStats", "SolverConfig", "Tour",
    "convex_hull", "dp_solve", "held_karp_tsp", "lower_bound_hull", "make_points",
    "reduce_instance", "solve_getsph", "solve_ketsp",
]
