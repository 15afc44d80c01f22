"""`modulus`: tabulated moduli of continuity checked against sigma_A."""

import argparse
from typing import Any, Dict

import numpy as np

from src.commands.common import CommandContext, RunConfig, require, write_rows
from src.embeddings.targets import moduli
from src.norms.norm_spec import NormSpec
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.young.calculus import sigma_A
from src.young.young_function import YoungFunction, parse_young
from src.young.zygmund_table import MODULUS_EXAMPLES, modulus_table

logger = get_logger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--example', required=True, choices=MODULUS_EXAMPLES)
    parser.add_argument('--n', type=int, required=True, help='Dimension')
    parser.add_argument('--beta', type=float, help="Exponent of the 'exp' example")
    parser.add_argument('--alpha', type=float, help="Log exponent of the 'lnlog' example")
    parser.add_argument('--r-min', type=float, default=1e-6)
    parser.add_argument('--r-max', type=float, default=1e-2)
    parser.add_argument('--points', type=int, default=25)
    parser.add_argument('--compare-space', action='store_true',
                        help='Also evaluate sigma_X for the Orlicz norm of the example')
    parser.add_argument('--check', action='store_true', help='Assert the ratio spread bound')
    parser.add_argument('--max-spread', type=float, default=10.0)


def example_young(example: str, n: int, beta: float = None, alpha: float = None, numerics=None) -> YoungFunction:
    """Young function of a worked example."""
    if example == 'linf':
        return parse_young('linf', numerics)
    if example == 'exp':
        if beta is None:
            raise ValidationError("Example 'exp' needs --beta")
        return parse_young(f"exppower:{beta!r}", numerics)
    if alpha is None:
        raise ValidationError("Example 'lnlog' needs --alpha")
    return parse_young(f"powerlog:{n},{alpha!r}", numerics)


def _spread(ratio: np.ndarray) -> float:
    if np.any(~np.isfinite(ratio)) or np.any(ratio <= 0):
        return float('inf')
    return float(ratio.max() / ratio.min())


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    example, n = config.get('example'), config.get('n')
    r_min, r_max = config.get('r_min', 1e-6), config.get('r_max', 1e-2)
    if not 0 < r_min < r_max <= 1:
        raise ValidationError(f"Invalid radius range: ({r_min}, {r_max}). Need 0 < r_min < r_max <= 1")
    descriptor = modulus_table(example, n, beta=config.get('beta'), alpha=config.get('alpha'))
    A = example_young(example, n, config.get('beta'), config.get('alpha'), numerics)

    r = np.geomspace(r_min, r_max, config.get('points', 25))
    with context.metrics.timed('sigma_A'):
        sigma = np.asarray(sigma_A(A, n, r, numerics))
    predicted = descriptor.evaluate(r)
    ratio = sigma / predicted
    result: Dict[str, Any] = {
        'example': example,
        'n': n,
        'young': A.describe(),
        'modulus': descriptor.expression,
        'ratio': [float(ratio.min()), float(ratio.max())],
        'spread': _spread(ratio),
    }
    rows = np.column_stack([r, sigma, predicted])

    if config.get('compare_space', False):
        X = NormSpec.orlicz(A)
        with context.metrics.timed('moduli'):
            values = []
            for point in r:
                found = moduli(X, n, 1.0, float(point), numerics=numerics)
                context.ledger.extend(found.regularizations)
                values.append(found.sigma_bracket)
        values = np.array(values)
        result['space_ratio'] = [float((values[:, 0] / sigma).min()), float((values[:, 1] / sigma).max())]
        result['space_spread'] = _spread(values[:, 1] / sigma)
        rows = np.column_stack([rows, values])

    if config.csv_path is not None:
        header = ['r', 'sigma', 'predicted'] + (['sigma_x_lo', 'sigma_x_hi'] if rows.shape[1] > 3 else [])
        write_rows(config.csv_path, header, rows.tolist())
    if config.get('check', False):
        limit = config.get('max_spread', 10.0)
        require(result['spread'] <= limit,
                f"sigma_A / ({descriptor.expression}) spread {result['spread']:.4g} <= {limit:g}")
        if 'space_spread' in result:
            require(result['space_spread'] <= limit,
                    f"sigma_X / sigma_A spread {result['space_spread']:.4g} <= {limit:g}")
    logger.info(f"Modulus {descriptor.expression}: ratio spread {result['spread']:.4g}")
    return result
