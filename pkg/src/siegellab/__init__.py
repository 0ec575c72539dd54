"""Exact computations with Siegel modular forms of small genus."""

from __future__ import annotations

from .errors import (
    ArgumentError,
    ConditioningError,
    DimensionError,
    DomainError,
    InconsistencyError,
    NotEigenformError,
    ResourceError,
    SiegelError,
    TruncationError,
    UnsupportedError,
)
from .expansion import FourierExpansion
from .hecke import HeckeElement, SatakeData, coset_reps, eigenvalue, hecke_apply, satake_solve
from .jacobi import JacobiFormExpansion, fourier_jacobi, is_maass_space, maass_lift
from .lfn import EulerFactor, sk_factorization_check, spinor_factor, standard_factor
from .reduction import minkowski_reduce, siegel_reduce, siegel_volume
from .theta import chi10, theta_constant, theta_expansion

__version__ = "0.1.0"
