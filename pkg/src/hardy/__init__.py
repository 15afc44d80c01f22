"""One-dimensional Hardy reduction operators."""

from src.hardy.verifier import (
    RatioResult,
    SplitResult,
    TrialFamily,
    hardy_finite,
    hardy_norm,
    hardy_rn,
    ratio_sup,
    rn_split_check,
)

__all__ = [
    'RatioResult',
    'SplitResult',
    'TrialFamily',
    'hardy_finite',
    'hardy_norm',
    'hardy_rn',
    'ratio_sup',
    'rn_split_check',
]
