"""Exact Graver-basis machinery for N-fold 4-block separable convex integer programs."""

from .errors import DecompositionFailed, NotInKernel, SizeGuardExceeded
from .intlinalg import (
    IntMatrix,
    hermite_normal_form,
    kernel_lattice_basis,
    matrix_rank,
    max_abs_subdeterminant,
    solve_integer,
)
from .graver import (
    ConformalDecomposition,
    GraverBasis,
    conformal_decompose,
    expand_repeated_columns,
    graver_brute_force,
    graver_completion,
)
from .bounds import (
    BoundReport,
    determinant_bounds,
    fourblock_bound_alternative,
    fourblock_bound_primary,
    measure_stochastic_constants,
    ppi_bound,
    stacked_bound,
)
from .objective import (
    AbsDevTerm,
    DirectedObjective,
    LinearTerm,
    PiecewiseLinearTerm,
    QuadraticTerm,
    SeparableObjective,
    compare,
    directed_value,
    evaluate,
    max_abs_bound,
    piecewise_linearize,
)
from .continuous import ContinuousOutcome, RationalLP, approx_continuous_oracle, lp_solve
from .fourblock import (
    FourBlockInstance,
    SmcfSpec,
    assemble_fourblock,
    generate_smcf,
    instance_from_json_obj,
    instance_to_json_obj,
    nfold_part,
    random_smcf_spec,
    smcf_spec_from_json_obj,
    smcf_spec_to_json_obj,
    stochastic_part,
)
from .solver import (
    SolveOutcome,
    brute_force_solve,
    directed_step,
    graver_best_step,
    optimize_restricted,
    phase_one,
    solve,
    structured_block_step,
)

__all__ = [
    "AbsDevTerm",
    "BoundReport",
    "ConformalDecomposition",
    "ContinuousOutcome",
    "DecompositionFailed",
    "DirectedObjective",
    "FourBlockInstance",
    "GraverBasis",
    "IntMatrix",
    "LinearTerm",
    "NotInKernel",
    "PiecewiseLinearTerm",
    "QuadraticTerm",
    "RationalLP",
    "SeparableObjective",
    "SizeGuardExceeded",
    "SmcfSpec",
    "SolveOutcome",
    "approx_continuous_oracle",
    "assemble_fourblock",
    "brute_force_solve",
    "compare",
    "conformal_decompose",
    "determinant_bounds",
    "directed_step",
    "directed_value",
    "evaluate",
    "expand_repeated_columns",
    "fourblock_bound_alternative",
    "fourblock_bound_primary",
    "generate_smcf",
    "graver_best_step",
    "graver_brute_force",
    "graver_completion",
    "hermite_normal_form",
    "instance_from_json_obj",
    "instance_to_json_obj",
    "kernel_lattice_basis",
    "lp_solve",
    "matrix_rank",
    "max_abs_bound",
    "max_abs_subdeterminant",
    "measure_stochastic_constants",
    "nfold_part",
    "optimize_restricted",
    "phase_one",
    "piecewise_linearize",
    "ppi_bound",
    "random_smcf_spec",
    "smcf_spec_from_json_obj",
    "smcf_spec_to_json_obj",
    "solve",
    "solve_integer",
    "stacked_bound",
    "stochastic_part",
    "structured_block_step",
]
