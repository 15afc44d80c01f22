"""
`target`: optimal Sobolev targets for a Young function or a gradient norm.

With --young the report carries the symbolic Orlicz and r.i. targets (when the
Young function has a tabulated power-log class), the numeric A_n handle, the
L^inf verdict and, with --modulus, sigma_A with its uniform-continuity verdict.
With --space it carries the X_1 data of embedding_targets instead.
"""

import argparse
from typing import Any, Dict, Optional

import numpy as np

from src.commands.common import CommandContext, RunConfig, add_profile_arguments, load_profile, parse_young_arg
from src.config.settings import NumericsConfig
from src.embeddings.targets import (
    TargetNormHandle,
    linf_embedding_check,
    modulus_curve,
    rn_zero_space_admissible,
    uniform_continuity_verdict,
)
from src.norms.norm_spec import parse_norm
from src.utils.exceptions import ValidationError
from src.utils.ledger import ChoiceLedger
from src.utils.logger import get_logger
from src.young.calculus import continuity_kernels, sigma_A, sobolev_conjugate
from src.young.young_function import ExpPowerYoung, LinfYoung, PowerLogYoung, YoungFunction
from src.young.zygmund_table import ModulusDescriptor, SETTINGS, SETTING_ALIASES, canonical_setting, \
    modulus_table, zygmund_table

logger = get_logger(__name__)

SAMPLE_POINTS = np.geomspace(1e-2, 1e2, 9)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--young', help="Young function: JSON or shorthand such as 'power:2' or 'exppower:1'")
    source.add_argument('--space', help='Gradient norm X as for the norm command')
    parser.add_argument('--n', type=int, required=True, help='Dimension')
    parser.add_argument('--setting', default='finite', choices=SETTINGS + tuple(SETTING_ALIASES),
                        help='Domain and space setting (default: finite)')
    parser.add_argument('--L', type=float, help='Domain measure for --space (default: 1)')
    parser.add_argument('--d', type=float, default=1.0, help='Domain diameter for moduli (default: 1)')
    parser.add_argument('--modulus', action='store_true', help='Add the modulus of continuity and its verdict')
    add_profile_arguments(parser)


def symbolic_modulus(A: YoungFunction, n: int) -> Optional[ModulusDescriptor]:
    """Tabulated modulus when A is one of the worked examples."""
    if isinstance(A, LinfYoung):
        return modulus_table('linf', n)
    if isinstance(A, ExpPowerYoung):
        return modulus_table('exp', n, beta=A.beta)
    if isinstance(A, PowerLogYoung) and A.p == n and A.alpha > n - 1:
        return modulus_table('lnlog', n, alpha=A.alpha)
    return None


def young_modulus(A: YoungFunction, n: int, numerics: NumericsConfig, ledger: ChoiceLedger) -> Dict[str, Any]:
    """sigma_A on r = 2^{-k} with the verdict; refused when xi_A is infinite."""
    kernels = continuity_kernels(A, n, numerics)
    ledger.extend(kernels.regularizations)
    symbolic = symbolic_modulus(A, n)
    result: Dict[str, Any] = {'xi_finite': kernels.xi_finite,
                              'symbolic': None if symbolic is None else symbolic.expression}
    if not kernels.xi_finite:
        result.update({'xi': float('inf'), 'sigma': None, 'uniform_continuity': False})
        return result
    r = 2.0 ** -np.arange(1, numerics.moduli.verdict_levels + 1)
    sigma = np.asarray(sigma_A(A, n, r, numerics))
    result['sigma'] = np.column_stack([r, sigma])
    result['uniform_continuity'] = uniform_continuity_verdict(r, sigma, numerics)
    return result


def _run_young(config: RunConfig, context: CommandContext, setting: str) -> Dict[str, Any]:
    numerics, ledger = context.numerics, context.ledger
    n = config.get('n')
    A = parse_young_arg(config.get('young'), numerics)
    result: Dict[str, Any] = {'young': A.describe(), 'n': n, 'setting': setting}

    asymptotics = A.asymptotics()
    if asymptotics is None:
        ledger.record('numeric-target', f"{A.describe()} has no tabulated class; targets are numeric only",
                      'target')
        result['targets'] = None
    else:
        result['targets'] = zygmund_table(asymptotics, n, setting).to_dict()

    with context.metrics.timed('sobolev_conjugate'):
        conjugate = sobolev_conjugate(A, n, numerics)
    ledger.extend(conjugate.regularizations)
    with np.errstate(over='ignore'):
        samples = np.asarray(conjugate.young.value(SAMPLE_POINTS), dtype=float)
    result['sobolev_conjugate'] = {
        'collapse': conjugate.collapse,
        'h_limit': conjugate.h_limit,
        'samples': np.column_stack([SAMPLE_POINTS, samples]),
    }
    result['linf'] = conjugate.collapse
    if config.get('modulus', False):
        with context.metrics.timed('modulus'):
            result['modulus'] = young_modulus(A, n, numerics, ledger)
    return result


def _run_space(config: RunConfig, context: CommandContext, setting: str) -> Dict[str, Any]:
    numerics, ledger = context.numerics, context.ledger
    n = config.get('n')
    L = config.get('L', 1.0)
    whole_space = setting.startswith('Rn')
    X = parse_norm(config.get('space'), None if whole_space else L, numerics)
    result: Dict[str, Any] = {'space': X.describe(), 'n': n, 'setting': setting}

    with context.metrics.timed('linf_embedding_check'):
        result['linf'] = linf_embedding_check(X, n, L, numerics)
    if config.get('profile') is not None or config.get('samples') is not None:
        f = load_profile(config.get('profile'), config.get('samples'))
        if whole_space:
            handle = TargetNormHandle(X, 'X1Rn', n, numerics=numerics)
            result['x1'] = handle.norm(f)
        else:
            handle = TargetNormHandle(X, 'X1', n, L, numerics)
            result['x1'] = handle.associate_norm(f)
        ledger.extend(handle.ledger.entries)
    if whole_space:
        result['rn_admissible'] = rn_zero_space_admissible(X, n, numerics)
    if config.get('modulus', False):
        with context.metrics.timed('modulus_curve'):
            curve = modulus_curve(X, n, config.get('d', 1.0), numerics=numerics)
        ledger.extend(curve.regularizations)
        result['sigma'] = curve.rows()
        result['sigma_bracket'] = list(curve.bracket)
        result['uniform_continuity'] = curve.uniform_continuity
    return result


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    setting = canonical_setting(config.get('setting', 'finite'))
    if config.get('young') is not None:
        result = _run_young(config, context, setting)
    elif config.get('space') is not None:
        result = _run_space(config, context, setting)
    else:
        raise ValidationError("Give one of --young or --space")
    logger.info(f"Targets computed for n={config.get('n')} in {setting}")
    return result
