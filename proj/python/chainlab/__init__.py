"""Numerical laboratory for the infinite harmonic chain."""

from ._core import (
    REPORT_VERSION,
    ConstructionError,
    DomainError,
    Fill,
    InternalError,
    LatticeWindow,
    PreconditionError,
    adversarial_growth,
    bessel_j,
    bessel_j_oracle,
    bessel_row,
    cos_norm,
    empirical_covariance,
    evolve,
    exact_covariance,
    gamma,
    gaussian_sup,
    kernel_row,
    light_cone_window,
    run_suite,
    sup_bound,
    upper_envelope,
    verify_upper_bound,
    verlet,
)

__all__ = [name for name in dir() if not name.startswith("_")]
