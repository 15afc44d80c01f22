"""`norm`: rearrangement-invariant norm of a profile."""

import argparse
from typing import Any, Dict

from src.commands.common import CommandContext, RunConfig, add_profile_arguments, bracket, load_profile
from src.norms.norm_spec import parse_norm
from src.norms.ri_norms import associate_spec, fundamental_function, norm
from src.utils.logger import get_logger

logger = get_logger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--space', required=True,
                        help="Norm: JSON or shorthand such as 'lorentz:2,1' or 'orlicz:power:2'")
    parser.add_argument('--L', type=float, help='Interval length (default: the family default)')
    add_profile_arguments(parser)
    parser.add_argument('--associate', action='store_true',
                        help='Also evaluate the associate norm, reported as a bracket')
    parser.add_argument('--fundamental', type=float, nargs='*', default=[],
                        help='Also report the fundamental function at these s')


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    X = parse_norm(config.get('space'), config.get('L'), context.numerics)
    f = load_profile(config.get('profile'), config.get('samples'))
    with context.metrics.timed('norm'):
        value = norm(X, f, context.numerics)
    result: Dict[str, Any] = {'space': X.describe(), 'norm': value}
    if config.get('associate', False):
        rule = associate_spec(X)
        with context.metrics.timed('associate_norm'):
            associate_value = norm(rule.spec, f, context.numerics)
        result['associate'] = {
            'space': rule.spec.describe(),
            'exact': rule.exact,
            'norm': bracket(*rule.bracket(associate_value)),
        }
    fundamental = config.get('fundamental', [])
    if fundamental:
        result['fundamental'] = [[s, fundamental_function(X, s, context.numerics)] for s in fundamental]
    logger.info(f"||f||_{X.describe()} = {value:.12g}")
    return result
