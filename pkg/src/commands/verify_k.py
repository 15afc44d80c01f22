"""`verify-k`: K-functional closed forms against direct search."""

import argparse
from typing import Any, Dict, List, Optional

import numpy as np

from src.commands.common import CommandContext, RunConfig, load_profile, require, write_rows
from src.kfunctional.lab import k_bruteforce, k_exact_l1_linf, k_l1_ln1_predicted, k_l1_ln1_two_step, k_on_grid
from src.norms.norm_spec import NormSpec, parse_norm
from src.rearrangement.profiles import DecreasingProfile, random_profile
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

COUPLES = ('l1-linf', 'l1-ln1', 'general')
L1 = NormSpec.lebesgue(1.0)
LINF = NormSpec.lebesgue(float('inf'))


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--profile', type=str, help='Decreasing profile CSV with header s,v')
    parser.add_argument('--samples', type=str, help='Weighted samples CSV with header value,weight')
    parser.add_argument('--t', type=float, nargs='+', default=[0.5], help='Values of t (default: 0.5)')
    parser.add_argument('--couple', choices=COUPLES, default='l1-linf')
    parser.add_argument('--n', type=int, default=2, help='Dimension of the (L^1, L^{n,1}) couple')
    parser.add_argument('--X0', help='First space of a general couple')
    parser.add_argument('--X1', help='Second space of a general couple')
    parser.add_argument('--oracle', type=int, default=0,
                        help='Check the (L^1, L^inf) oracle on this many seeded random profiles instead')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--rel-tol', type=float, default=0.01, help='Oracle tolerance (default: 1%%)')
    parser.add_argument('--check', action='store_true', help='Assert the oracle and the bracket properties')


def evaluate(f: DecreasingProfile, t: float, couple: str, n: int, X0: Optional[NormSpec],
             X1: Optional[NormSpec], numerics) -> Dict[str, Any]:
    """Predicted value, direct-search value and their ratio at one t."""
    if couple == 'l1-linf':
        predicted = k_exact_l1_linf(f, t)
        found = k_bruteforce(f, t, L1, LINF, numerics).value
    elif couple == 'l1-ln1':
        predicted = k_l1_ln1_predicted(f, t, n)
        found = k_l1_ln1_two_step(f, t, n, numerics).value
    else:
        predicted = None
        found = k_bruteforce(f, t, X0, X1, numerics).value
    ratio = None if not predicted else found / predicted
    return {'t': t, 'predicted': predicted, 'bruteforce': found, 'ratio': ratio}


def concave_nondecreasing(ts: np.ndarray, values: np.ndarray, rtol: float = 1e-6) -> bool:
    """Discrete monotonicity and concavity of t -> K(f, t) on an increasing grid."""
    scale = max(float(np.max(np.abs(values))), 1e-300)
    steps = np.diff(values)
    slopes = steps / np.diff(ts)
    return bool(np.all(steps >= -rtol * scale) and np.all(np.diff(slopes) <= rtol * scale / np.min(np.diff(ts))))


def _oracle(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    rng = np.random.default_rng(config.get('seed', 0))
    ts = np.array(sorted(config.get('t')))
    grid = np.linspace(0.05, 1.0, 20)
    worst, shape_ok = 0.0, True
    rows: List[List[Any]] = []
    for index in range(config.get('oracle')):
        f = random_profile(rng, 1.0)
        for t in ts:
            row = evaluate(f, float(t), 'l1-linf', 2, None, None, numerics)
            worst = max(worst, abs(row['ratio'] - 1.0))
            rows.append([index, t, row['predicted'], row['bruteforce']])
        values = np.array(k_on_grid(f, grid, k_bruteforce, L1, LINF, numerics))
        shape_ok &= concave_nondecreasing(grid, values)
        context.metrics.increment('profiles')
    if config.csv_path is not None:
        write_rows(config.csv_path, ['profile_id', 't', 'predicted', 'bruteforce'], rows)
    if config.get('check', False):
        tol = config.get('rel_tol', 0.01)
        require(worst <= tol, f"direct search within {worst:.3g} <= {tol:g} of the integral of f*")
        require(shape_ok, "K(f, t) is nondecreasing and concave in t")
    return {'profiles': config.get('oracle'), 't': ts, 'max_relative_error': worst, 'concave': shape_ok}


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    if config.get('oracle', 0) > 0:
        with context.metrics.timed('k_oracle'):
            return _oracle(config, context)

    couple = config.get('couple', 'l1-linf')
    X0 = X1 = None
    if couple == 'general':
        if config.get('X0') is None or config.get('X1') is None:
            raise ValidationError("The general couple needs --X0 and --X1")
        X0 = parse_norm(config.get('X0'), None, numerics)
        X1 = parse_norm(config.get('X1'), None, numerics)
    f = load_profile(config.get('profile'), config.get('samples'))
    n = config.get('n', 2)
    with context.metrics.timed('k_functional'):
        values = [evaluate(f, t, couple, n, X0, X1, numerics) for t in config.get('t')]
    if config.csv_path is not None:
        write_rows(config.csv_path, ['t', 'predicted', 'bruteforce'],
                   [[v['t'], '' if v['predicted'] is None else v['predicted'], v['bruteforce']] for v in values])
    if config.get('check', False) and couple != 'general':
        # both couples: the search value never undercuts the closed form
        for v in values:
            require(v['bruteforce'] >= v['predicted'] * (1 - 1e-9),
                    f"t={v['t']:g}: direct search {v['bruteforce']:.6g} >= predicted {v['predicted']:.6g}")
    result: Dict[str, Any] = {'couple': couple, 'values': values}
    if len(values) == 1:
        result.update({key: values[0][key] for key in ('predicted', 'bruteforce', 'ratio')})
    return result
