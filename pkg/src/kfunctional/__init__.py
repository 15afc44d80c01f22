"""K-functionals: closed forms, direct search and the symmetric-gradient comparison."""

from src.kfunctional.lab import (
    Decomposition,
    KResult,
    SymgradComparison,
    k_bruteforce,
    k_exact_l1_linf,
    k_l1_ln1_predicted,
    k_l1_ln1_two_step,
    k_on_grid,
    k_symgrad_compare,
)

__all__ = [
    'Decomposition',
    'KResult',
    'SymgradComparison',
    'k_bruteforce',
    'k_exact_l1_linf',
    'k_l1_ln1_predicted',
    'k_l1_ln1_two_step',
    'k_on_grid',
    'k_symgrad_compare',
]
