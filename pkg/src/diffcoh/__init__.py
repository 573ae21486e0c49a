"""Exact simplicial cohomology, Steenrod squares and differential cocycles."""

from .checks import bz2_kunneth_check, exactness_check, kunneth_check, trapezoid_check
from .cochains import Cochain, pullback
from .cohomology import (
    CohomologyClass,
    bockstein_beta,
    bockstein_beta2,
    bockstein_exp,
    cohomology_group,
    gamma2,
    is_cohomologous,
    rho2,
)
from .complexes import SimplicialComplex, SimplicialMap, coboundary_matrix, parse_complex, product, suspension
from .corpus import builtin
from .differential import (
    DiffCocycle,
    DiffProfile,
    I,
    R,
    a,
    db_cup,
    dd_power,
    diff_profile,
    differential,
    is_trivial,
    j,
    refined_sq,
)
from .groups import GroupDescriptor
from .linalg import SNFResult, SparseIntMatrix, in_lattice_image, quotient_structure, smith_normal_form, solve_integer
from .steenrod import CupIOperator, cup, cup_i, sq, sq_integral

__version__ = "0.1.0"

__all__ = [
    "Cochain",
    "CohomologyClass",
    "CupIOperator",
    "DiffCocycle",
    "DiffProfile",
    "GroupDescriptor",
    "I",
    "R",
    "SNFResult",
    "SimplicialComplex",
    "SimplicialMap",
    "SparseIntMatrix",
    "a",
    "bockstein_beta",
    "bockstein_beta2",
    "bockstein_exp",
    "builtin",
    "bz2_kunneth_check",
    "coboundary_matrix",
    "cohomology_group",
    "cup",
    "cup_i",
    "db_cup",
    "dd_power",
    "diff_profile",
    "differential",
    "exactness_check",
    "gamma2",
    "in_lattice_image",
    "is_cohomologous",
    "is_trivial",
    "j",
    "kunneth_check",
    "parse_complex",
    "product",
    "pullback",
    "quotient_structure",
    "refined_sq",
    "rho2",
    "smith_normal_form",
    "solve_integer",
    "sq",
    "sq_integral",
    "suspension",
    "trapezoid_check",
]
