"""Exact Pareto-optimal ratings from pairwise comparisons in max-times algebra."""

__version__ = "0.1.0"

from .decision import (
    DecisionProblem,
    NormalizePolicy,
    RatingSolution,
    chebyshev_error,
    minimal_generators,
    normalize,
    solve,
    solve_single,
    validate_constraints,
    validate_pairwise,
)
from .linsys import kleene_star, solve_upper, spectral_radius, tr_det
from .polyfront import (
    FrontierDescription,
    TropPoly2,
    eval_G,
    eval_H,
    expand_tr_poly,
    frontier,
    frontier_unconstrained,
    generator_matrix,
    poly_bounds,
)
from .tropcore import TropMatrix, TropScalar, TropVector, quad_form

__all__ = [
    "DecisionProblem",
    "FrontierDescription",
    "NormalizePolicy",
    "RatingSolution",
    "TropMatrix",
    "TropPoly2",
    "TropScalar",
    "TropVector",
    "chebyshev_error",
    "eval_G",
    "eval_H",
    "expand_tr_poly",
    "frontier",
    "frontier_unconstrained",
    "generator_matrix",
    "kleene_star",
    "minimal_generators",
    "normalize",
    "poly_bounds",
    "quad_form",
    "solve",
    "solve_single",
    "solve_upper",
    "spectral_radius",
    "tr_det",
    "validate_constraints",
    "validate_pairwise",
]
