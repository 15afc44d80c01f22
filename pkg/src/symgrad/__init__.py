"""Planar grid engine for symmetric gradients, maximal functions, Whitney covers and truncations."""

from src.symgrad.fields import (
    BumpSpec,
    FieldFamily,
    bump_family,
    bump_specs,
    log_cusp,
    polynomial_field,
    read_field_csv,
    rigid_field,
    write_field_csv,
)
from src.symgrad.grid import (
    GridDomain,
    PoincareResult,
    RigidMotion2D,
    TensorField2D,
    VectorField2D,
    poincare_check,
    rigid_project,
    symmetric_gradient,
)
from src.symgrad.maximal import maximal_function, weak_type_ratio
from src.symgrad.truncation import (
    PartitionOfUnity,
    TruncationResult,
    level_region,
    partition_of_unity,
    truncate,
    truncate_grad_only,
)
from src.symgrad.verification import (
    ModularResult,
    SobolevReport,
    field_profile,
    rearrangement_bound_profile,
    sobolev_poincare_check,
    verify_orlicz_modular,
    verify_sobolev_2d,
)
from src.symgrad.whitney import WhitneyChecks, WhitneyCover, WhitneyCube, check_cover, whitney_cover

__all__ = [
    'BumpSpec',
    'FieldFamily',
    'GridDomain',
    'ModularResult',
    'PartitionOfUnity',
    'PoincareResult',
    'RigidMotion2D',
    'SobolevReport',
    'TensorField2D',
    'TruncationResult',
    'VectorField2D',
    'WhitneyChecks',
    'WhitneyCover',
    'WhitneyCube',
    'bump_family',
    'bump_specs',
    'check_cover',
    'field_profile',
    'level_region',
    'log_cusp',
    'maximal_function',
    'partition_of_unity',
    'poincare_check',
    'polynomial_field',
    'read_field_csv',
    'rearrangement_bound_profile',
    'rigid_field',
    'rigid_project',
    'sobolev_poincare_check',
    'symmetric_gradient',
    'truncate',
    'truncate_grad_only',
    'verify_orlicz_modular',
    'verify_sobolev_2d',
    'weak_type_ratio',
    'whitney_cover',
    'write_field_csv',
]
