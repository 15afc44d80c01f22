"""Rearrangement-invariant norms: descriptions, evaluation and associates."""

from src.norms.norm_spec import NormFamily, NormSpec, WeightTable, parse_norm, power_tail_integrable
from src.norms.ri_norms import (
    AssociateRule,
    associate_pairing_lb,
    associate_spec,
    dual_exponent,
    fundamental_function,
    modular,
    norm,
    tabulated_norm,
    weighted_norm,
)

__all__ = [
    'AssociateRule',
    'NormFamily',
    'NormSpec',
    'WeightTable',
    'associate_pairing_lb',
    'associate_spec',
    'dual_exponent',
    'fundamental_function',
    'modular',
    'norm',
    'parse_norm',
    'power_tail_integrable',
    'tabulated_norm',
    'weighted_norm',
]
