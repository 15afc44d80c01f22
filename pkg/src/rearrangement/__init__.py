"""Decreasing rearrangements and step-profile calculus."""

from src.rearrangement.profiles import (
    DecreasingProfile,
    WeightedSamples,
    double_star,
    hardy_littlewood_pairing,
    rearrange,
)

__all__ = [
    'DecreasingProfile',
    'WeightedSamples',
    'double_star',
    'hardy_littlewood_pairing',
    'rearrange',
]
