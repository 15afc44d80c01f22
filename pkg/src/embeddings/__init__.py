"""Optimal target norms, the L^inf criterion and moduli of continuity."""

from src.embeddings.targets import (
    ModuliResult,
    ModulusCurve,
    TargetNormHandle,
    linf_embedding_check,
    moduli,
    modulus_curve,
    rn_target_norm,
    rn_zero_space_admissible,
    uniform_continuity_verdict,
    x1_associate_norm,
)

__all__ = [
    'ModuliResult',
    'ModulusCurve',
    'TargetNormHandle',
    'linf_embedding_check',
    'moduli',
    'modulus_curve',
    'rn_target_norm',
    'rn_zero_space_admissible',
    'uniform_continuity_verdict',
    'x1_associate_norm',
]
