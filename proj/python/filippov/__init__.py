"""Filippov predator-prey system with prey refuge and threshold harvesting."""

from ._core import (
    DomainError,
    FilippovError,
    IoError,
    ModelParams,
    NumericalError,
    ParamError,
    all_equilibria,
    boundary_bifurcations,
    compute_basins,
    eval_field,
    existence_boundary_p,
    filippov_equilibria,
    filippov_lambda,
    interior_equilibria,
    preset_names,
    pseudo_equilibrium,
    pseudo_stability,
    scan_sp_plane,
    simulate,
    sliding_bounds,
    sliding_flow,
)

__all__ = [name for name in dir() if not name.startswith("_")]
