"""Orthonormal eigenbases of a particle confined to ``[-a, a]``.

The four basis families are obtained by sifting projected free-particle
doublets for mutual orthogonality instead of imposing boundary conditions.
"""
from .core import (
    Family,
    Kind,
    ModeId,
    WellConfig,
    enumerate_modes,
    energy_of,
    eval_free_doublet,
    eval_mode,
    eval_mode_derivative,
    level_table,
)
from .estimator import FamilyExpansion, ModeBasis
from .expansion import ExpansionReport, boundary_probe, expand, gibbs_study, rotate_IV_from_III
from .overlap import GramReport, gram_cross, gram_family, kernel_diagonal, kernel_free, sift_families
from .quadrature import QuadratureConvergenceError

__version__ = "0.1.0"

__all__ = [
    "ExpansionReport",
    "Family",
    "FamilyExpansion",
    "GramReport",
    "Kind",
    "ModeBasis",
    "ModeId",
    "QuadratureConvergenceError",
    "WellConfig",
    "boundary_probe",
    "energy_of",
    "enumerate_modes",
    "eval_free_doublet",
    "eval_mode",
    "eval_mode_derivative",
    "expand",
    "gibbs_study",
    "gram_cross",
    "gram_family",
    "kernel_diagonal",
    "kernel_free",
    "level_table",
    "rotate_IV_from_III",
    "sift_families",
]
