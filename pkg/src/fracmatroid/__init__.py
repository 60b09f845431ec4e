"""Perfect fractional linear matroid matching by isolating weights and determinant degrees."""

from .algebra import DEFAULT_PRIME, FieldTooSmall, QuadPoly, QuadPolyMatrix, pfaffian, total_degree_of_det
from .instance import DependentLine, Instance, build_Atilde, ncrank_estimate
from .oracle import GuardExceeded, Polytope, is_isolating, max_matching
from .lattice import NOT_IN_LATTICE, decompose, near_shortest, shortest_length
from .weights import FamilyParams, WeightAssignment, gen_family, make_distinct, perturb
from .solver import SolveReport, solve, solve_instance, solve_weighted
from .hitting_set import INDETERMINATE, NO_WITNESS, HittingTuple, find_witness, gen_hitting_set

__all__ = [
    "DEFAULT_PRIME",
    "FieldTooSmall",
    "QuadPoly",
    "QuadPolyMatrix",
    "pfaffian",
    "total_degree_of_det",
    "DependentLine",
    "Instance",
    "build_Atilde",
    "ncrank_estimate",
    "GuardExceeded",
    "Polytope",
    "is_isolating",
    "max_matching",
    "NOT_IN_LATTICE",
    "decompose",
    "near_shortest",
    "shortest_length",
    "FamilyParams",
    "WeightAssignment",
    "gen_family",
    "make_distinct",
    "perturb",
    "SolveReport",
    "solve",
    "solve_instance",
    "solve_weighted",
    "INDETERMINATE",
    "NO_WITNESS",
    "HittingTuple",
    "find_witness",
    "gen_hitting_set",
]
