"""Exact rational/lattice linear algebra, LP feasibility and double description."""

from .linalg import (
    as_fraction, as_int_vector, as_rational_vector, dot, add, sub, scale, norm2,
    primitive_vector, is_primitive, integerize, transpose, mat_vec, mat_mul,
    identity, rref, rank, nullspace, determinant, lattice_determinant, inverse,
    solve_linear_system,
)
from .lattice import (
    smith_normal_form, multiplicity, halfopen_parallelepiped_points,
    parallelepiped_coefficients,
)
from .lp import LPProblem, Feasible, Infeasible, solve_rational_lp, simplex_maximize
from .dd import extreme_rays, cone_hrep, in_cone_hrep

__all__ = [name for name in dir() if not name.startswith("_")]
