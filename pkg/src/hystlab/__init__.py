"""hystlab: numerical laboratory for hysteresis-driven pattern formation
in a one-dimensional diffusion-ODE system.

Subpackages:
    kinetics    -- model nonlinearities, branches, equilibria, stable manifold
    stationary  -- quadrature construction of discontinuous layer solutions
    evolution   -- method-of-lines simulation and qualitative-theory harnesses
    asymptotics -- singular-integral asymptotics of the layer half-widths
    cli         -- config-driven experiments, CSV/SVG emission, sweeps
"""
from .kinetics import (
    ModelParams,
    BranchTable,
    PhasePortrait,
    baseline_params,
    branch_h,
    branch_table,
    classify_region,
    equilibria,
    eval_S,
    eval_f,
    eval_g,
    fold_points,
    jacobian,
    mu3_window,
    nullcline_phi,
    nullcline_psi,
    quasi_steady_receptors,
    stable_manifold,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "BranchTable",
    "PhasePortrait",
    "baseline_params",
    "branch_h",
    "branch_table",
    "classify_region",
    "equilibria",
    "eval_S",
    "eval_f",
    "eval_g",
    "fold_points",
    "jacobian",
    "mu3_window",
    "nullcline_phi",
    "nullcline_psi",
    "quasi_steady_receptors",
    "stable_manifold",
    "__version__",
]
