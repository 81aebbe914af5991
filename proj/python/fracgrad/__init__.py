"""Riesz fractional gradient and divergence on periodic grids.

Fields are numpy arrays: a scalar field on an n-dimensional grid has shape
(N,)*n, a vector field (n, N, ...), a matrix field (n, n, N, ...). The box
[-L/2, L/2)^n is sampled at cell centres; pass L with every call.
"""

from ._core import (
    BudgetError,
    ConfigError,
    RangeError,
    SolveError,
    __version__,
    c_ns,
    c_ns_over_one_minus_s,
    cof_field,
    constants_table,
    coordinates,
    det_field,
    det_ibp_residual,
    fractional_divergence,
    fractional_divergence_direct,
    fractional_gradient,
    fractional_gradient_direct,
    ftc_reconstruct,
    gagliardo_seminorm,
    gamma,
    gamma_riesz,
    hsp_norm,
    lattice_zeta,
    riesz_potential,
    selftest,
    set_thread_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]
