"""Young functions and the Orlicz calculus built on them."""

from src.young.calculus import (
    conjugate,
    hat_A,
    sigma_A,
    sobolev_conjugate,
    xi_eta,
)
from src.young.young_function import (
    ExpPowerYoung,
    LinfYoung,
    PowerLogLogYoung,
    PowerLogYoung,
    PowerYoung,
    TableYoung,
    YoungFunction,
    parse_young,
    young_from_dict,
)
from src.young.zygmund_table import AsymptoticClass, TargetDescriptor, zygmund_table

__all__ = [
    'AsymptoticClass',
    'ExpPowerYoung',
    'LinfYoung',
    'PowerLogLogYoung',
    'PowerLogYoung',
    'PowerYoung',
    'TableYoung',
    'TargetDescriptor',
    'YoungFunction',
    'conjugate',
    'hat_A',
    'parse_young',
    'sigma_A',
    'sobolev_conjugate',
    'xi_eta',
    'young_from_dict',
    'zygmund_table',
]
