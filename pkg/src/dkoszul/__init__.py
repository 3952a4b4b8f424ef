"""Graded path algebras, minimal graded resolutions, d-Koszul classifiers and Yoneda Ext."""

__version__ = "0.1.0"

from .scalar import Field
from .algebra import (GradedAlgebra, PathAlgebraPresentation, Quiver, build_from_structure_constants,
                      build_path_algebra, build_truncated_algebra, check_standardly_graded)
from .gmod import (FreeModule, GradedMap, GradedModule, direct_sum, generated_in_degrees, graded_iso,
                   kernel_of, projective_module, radical_power, shift, simple_module, top, trivial_module)
from .resolve import Resolution, horseshoe, lift_chain_map, minimal_resolution, minimize, syzygy
from .koszul import Delta, delta, is_d_koszul, is_d_koszul_algebra, is_generalized_d_koszul, is_koszul_module

__all__ = [
    "Field", "GradedAlgebra", "PathAlgebraPresentation", "Quiver", "build_from_structure_constants",
    "build_path_algebra", "build_truncated_algebra", "check_standardly_graded", "FreeModule", "GradedMap",
    "GradedModule", "direct_sum", "generated_in_degrees", "graded_iso", "kernel_of", "projective_module",
    "radical_power", "shift", "simple_module", "top", "trivial_module", "Resolution", "horseshoe",
    "lift_chain_map", "minimal_resolution", "minimize", "syzygy", "Delta", "delta", "is_d_koszul",
    "is_d_koszul_algebra", "is_generalized_d_koszul", "is_koszul_module",
]
