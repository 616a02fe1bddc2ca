"""Level-curve geometry, generator integrals, and Melnikov-function pipeline
for the cubic Hamiltonian H = x^2 y (1 - x - y)."""

from .geometry import H_MAX, LevelCurve, branch_y, hamiltonian, level_params, radicand, u_to_h
from .generators import (
    GeneratorValues,
    branch_integral,
    generator_values_closed,
    generator_values_quadrature,
    ij_quadrature,
)
from .decompose import (
    Decomposition,
    PerturbationSpec,
    boundary_poly,
    chord_integral,
    melnikov_decompose,
    reduce_monomials,
    reduce_to_generators,
)
from .melnikov import melnikov_eval, melnikov_eval_quadrature, melnikov_zero_report

__all__ = [
    "H_MAX",
    "LevelCurve",
    "hamiltonian",
    "level_params",
    "branch_y",
    "radicand",
    "u_to_h",
    "branch_integral",
    "ij_quadrature",
    "chord_integral",
    "GeneratorValues",
    "generator_values_closed",
    "generator_values_quadrature",
    "Decomposition",
    "PerturbationSpec",
    "boundary_poly",
    "melnikov_decompose",
    "reduce_monomials",
    "reduce_to_generators",
    "melnikov_eval",
    "melnikov_eval_quadrature",
    "melnikov_zero_report",
]
