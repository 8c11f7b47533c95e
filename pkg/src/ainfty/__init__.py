"""Finite filtered A-infinity categories over GF(2).

Structure constants, relation checking, functors and homotopies, Hochschild
chains with the shifted action, bar-type quotients, the main-filtration
retraction, and the homotopy-limit category, with fixtures and a CLI.
"""

from .category import (
    AInftyStructure,
    MorphismGenerator,
    Violation,
    evaluate_mu,
    gauge_transform,
    hom_homology,
    is_homology_unit,
    verify_ainfty_relations,
    verify_degree_convention,
)
from .errors import AInftyError
from .f2linalg import F2Matrix, F2Vector, homology_dimension, kernel_basis, rank
from .filtration import verify_filtration_subadditivity, word_weight, zero_filtered_subcategory

__all__ = [
    "AInftyError",
    "AInftyStructure",
    "F2Matrix",
    "F2Vector",
    "MorphismGenerator",
    "Violation",
    "evaluate_mu",
    "gauge_transform",
    "hom_homology",
    "homology_dimension",
    "is_homology_unit",
    "kernel_basis",
    "rank",
    "verify_ainfty_relations",
    "verify_degree_convention",
    "verify_filtration_subadditivity",
    "word_weight",
    "zero_filtered_subcategory",
]
