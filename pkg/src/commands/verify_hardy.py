"""`verify-hardy`: ratio suprema of the Hardy-type reduction operators."""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from src.commands.common import CommandContext, RunConfig, require, write_rows
from src.hardy.verifier import TRIAL_KINDS, RatioResult, TrialFamily, ratio_sup, rn_split_check
from src.norms.norm_spec import parse_norm
from src.rearrangement.io import write_profile_csv
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_SCALES = {
    'indicator': tuple(10.0 ** np.linspace(0.0, 3.0, 13)),
    'power': (0.0, 0.25, 0.5, 0.75, 0.9),
}


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--X', required=True, help='Norm of the input')
    parser.add_argument('--Y', required=True, help='Norm of the output')
    parser.add_argument('--n', type=int, required=True, help='Dimension')
    parser.add_argument('--L', type=float, default=1.0, help='Interval length (default: 1)')
    parser.add_argument('--family', choices=TRIAL_KINDS, default='indicator')
    parser.add_argument('--scales', type=float, nargs='*', help='Exponents (power) or k values (indicator)')
    parser.add_argument('--count', type=int, default=50, help='Random trials (default: 50)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--split', action='store_true',
                        help='Whole-space split check; trials live on (0, L) with L > 1')
    parser.add_argument('--expect', choices=('bounded', 'slope'),
                        help="Assert bounded growth or a given growth slope")
    parser.add_argument('--max-slope', type=float, default=0.02)
    parser.add_argument('--slope', type=float, help='Expected slope for --expect slope')
    parser.add_argument('--slope-tol', type=float, default=0.1, help='Relative tolerance on --slope')


def build_family(config: RunConfig) -> TrialFamily:
    kind, L = config.get('family', 'indicator'), config.get('L', 1.0)
    if kind == 'random':
        return TrialFamily.random(config.get('count', 50), config.get('seed', 0), L)
    scales = config.get('scales') or DEFAULT_SCALES[kind]
    if kind == 'power':
        return TrialFamily.power(scales, L)
    return TrialFamily.indicator(scales, L)


def _summary(result: RatioResult) -> Dict[str, Any]:
    return {
        'best_ratio': result.best_ratio,
        'slope_estimate': result.slope_estimate,
        'ratios': [list(pair) for pair in result.ratios],
    }


def _witness_path(csv_path: Optional[str], part: str = '') -> Optional[Path]:
    if csv_path is None:
        return None
    path = Path(csv_path)
    suffix = f"_{part}" if part else ''
    return path.with_name(f"{path.stem}{suffix}_witness.csv")


def _save_witness(result: RatioResult, path: Optional[Path]) -> Optional[str]:
    if path is None or result.witness is None:
        return None
    write_profile_csv(result.witness, path)
    return str(path)


def _check(config: RunConfig, result: RatioResult, label: str) -> None:
    expect = config.get('expect')
    if expect is None:
        return
    slope = result.slope_estimate
    require(slope is not None, f"{label}: growth slope is available")
    if expect == 'bounded':
        limit = config.get('max_slope', 0.02)
        require(abs(slope) < limit, f"{label}: |slope| = {abs(slope):.4g} < {limit:g}")
        return
    target, tol = config.get('slope'), config.get('slope_tol', 0.1)
    require(target is not None, f"{label}: --slope is given with --expect slope")
    require(abs(slope - target) <= tol * abs(target),
            f"{label}: slope {slope:.4g} within {tol:.0%} of {target:.4g}")


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    n = config.get('n')
    family = build_family(config)
    rows: List[List[Any]] = []

    if config.get('split', False):
        X = parse_norm(config.get('X'), None, numerics)
        Y = parse_norm(config.get('Y'), None, numerics)
        with context.metrics.timed('rn_split_check'):
            split = rn_split_check(X, Y, n, family, numerics)
        context.metrics.increment('trials', 2 * len(split.local.ratios))
        result: Dict[str, Any] = {'X': X.describe(), 'Y': Y.describe()}
        for part, part_result in (('local', split.local), ('global', split.global_)):
            context.ledger.extend(part_result.regularizations)
            summary = _summary(part_result)
            summary['witness_profile_path'] = _save_witness(part_result, _witness_path(config.csv_path, part))
            result[part] = summary
            rows += [[f"{part}-{i}", ratio] for i, (_, ratio) in enumerate(part_result.ratios)]
            _check(config, part_result, part)
    else:
        L = config.get('L', 1.0)
        X = parse_norm(config.get('X'), L, numerics)
        Y = parse_norm(config.get('Y'), L, numerics)
        with context.metrics.timed('ratio_sup'):
            found = ratio_sup(X, Y, n, L, family, numerics)
        context.metrics.increment('trials', len(found.ratios))
        context.ledger.extend(found.regularizations)
        result = {'X': X.describe(), 'Y': Y.describe(), **_summary(found)}
        result['witness_profile_path'] = _save_witness(found, _witness_path(config.csv_path))
        rows = [[i, ratio] for i, (_, ratio) in enumerate(found.ratios)]
        _check(config, found, 'ratio_sup')

    if config.csv_path is not None:
        write_rows(config.csv_path, ['trial_id', 'ratio'], rows)
    return result
