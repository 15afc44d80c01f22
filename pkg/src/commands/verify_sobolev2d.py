"""
`verify-sobolev2d`: planar symmetric-gradient suites.

Suites:
    sobolev: embedding ratios with a refinement study and the pointwise bound
    truncation: |T u| <= c theta, |eps(T u)| <= c lambda, T u = u off O, Whitney checks
    modular: smallest constant of the Orlicz modular inequality
    poincare: ||u - R u||_Y / ||eps(u)||_X
    kfunctional: truncation upper bound against the predicted K-functional
"""

import argparse
from pathlib import Path
from typing import Any, Dict, Iterator, List, Tuple

import numpy as np

from src.commands.common import CommandContext, RunConfig, parse_young_arg, require, write_rows
from src.kfunctional.lab import k_symgrad_compare
from src.norms.norm_spec import parse_norm
from src.symgrad.fields import FAMILY_KINDS, FieldFamily, read_field_csv
from src.symgrad.grid import GridDomain, VectorField2D, symmetric_gradient
from src.symgrad.truncation import truncate
from src.symgrad.verification import sobolev_poincare_check, verify_orlicz_modular, verify_sobolev_2d
from src.utils.exceptions import GridExtentError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

SUITES = ('sobolev', 'truncation', 'modular', 'poincare', 'kfunctional')


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--suite', choices=SUITES, required=True)
    parser.add_argument('--family', choices=FAMILY_KINDS, default='bump')
    parser.add_argument('--count', type=int, default=20, help='Bump fields (default: 20)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--resolutions', type=int, nargs='+', default=[64, 128])
    parser.add_argument('--levels', type=float, nargs='+', default=[1.0, 2.0, 3.0],
                        help='Cusp heights of the log-cusp family')
    parser.add_argument('--field', type=str, help='Single field CSV (i,j,u1,u2) instead of a family')
    parser.add_argument('--domain', type=str, help='Domain JSON for --field')
    parser.add_argument('--X', default='lebesgue:1', help='Norm of eps(u) (default: lebesgue:1)')
    parser.add_argument('--Y', default='lorentz:2,1', help='Norm of u (default: lorentz:2,1)')
    parser.add_argument('--young', default='power:1.5', help='Young function of the modular suite')
    parser.add_argument('--fractions', type=float, nargs='+', default=[0.25, 0.5, 0.9],
                        help='theta and lambda as fractions of sup|u| and sup|eps(u)|')
    parser.add_argument('--t', type=float, nargs='+', default=[0.001, 0.003, 0.01, 0.03, 0.1],
                        help='Values of t for the kfunctional suite')
    parser.add_argument('--check', action='store_true', help='Assert the acceptance properties of the suite')
    parser.add_argument('--max-change', type=float, default=None,
                        help='Allowed relative change under refinement (suite default when omitted)')


def _fields(config: RunConfig) -> Iterator[Tuple[int, float, VectorField2D]]:
    """(resolution, label, field) triples of the family or of the single input field."""
    if config.get('field') is not None:
        if config.get('domain') is None:
            raise ValidationError("--field needs --domain")
        domain = GridDomain.from_json(Path(config.get('domain')))
        yield domain.nx, 0.0, read_field_csv(Path(config.get('field')), domain)
        return
    family = _family(config)
    for resolution in family.resolutions:
        for label, u in zip(family.labels(), family.fields(resolution)):
            yield resolution, float(label), u


def _family(config: RunConfig) -> FieldFamily:
    return FieldFamily(
        kind=config.get('family', 'bump'),
        count=config.get('count', 20),
        seed=config.get('seed', 0),
        resolutions=tuple(config.get('resolutions', [64, 128])),
        levels=tuple(config.get('levels', [1.0, 2.0, 3.0])),
    )


def _refinement_change(by_resolution: Dict[int, float]) -> float:
    ordered = [by_resolution[k] for k in sorted(by_resolution)]
    changes = [abs(b - a) / a for a, b in zip(ordered, ordered[1:]) if a > 0]
    return max(changes, default=0.0)


def _sobolev(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    X = parse_norm(config.get('X'), None, numerics)
    Y = parse_norm(config.get('Y'), None, numerics)
    report = verify_sobolev_2d(_family(config), X, Y, numerics=numerics)
    if config.csv_path is not None:
        write_rows(config.csv_path, ['resolution', 'field', 'ratio'],
                   [[res, label, ratio] for res, rows in report.ratios.items() for label, ratio in rows])
    if config.get('check', False):
        limit = config.get('max_change', 0.1)
        require(report.refinement_change < limit,
                f"max ratio changes by {report.refinement_change:.3g} < {limit:g} under refinement")
        require(bool(np.isfinite(report.pointwise_constant)),
                f"pointwise rearrangement bound holds with constant {report.pointwise_constant:.4g}")
    return report.to_dict()


def _truncation(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    fractions = config.get('fractions')
    constant, unchanged, covers, skipped = 0.0, True, True, 0
    rows: List[List[Any]] = []
    first = None
    for resolution, label, u in _fields(config):
        first = resolution if first is None else first
        if resolution != first:
            continue
        u_sup = u.sup_norm()
        if u_sup == 0.0:
            continue
        eps_sup = symmetric_gradient(u).sup_norm()
        for a in fractions:
            for b in fractions:
                theta, lam = a * u_sup, b * eps_sup
                try:
                    result = truncate(u, theta, lam, numerics)
                except GridExtentError as e:
                    skipped += 1
                    context.ledger.record('truncation-skipped', str(e), 'verify-sobolev2d', level='warning',
                                          field=label, theta=theta, lam=lam)
                    continue
                context.ledger.extend(result.regularizations)
                c = max(result.theta_constant, result.lambda_constant)
                keep = result.unchanged
                same = bool(np.array_equal(result.field.u1[keep], u.u1[keep])
                            and np.array_equal(result.field.u2[keep], u.u2[keep]))
                passed = result.cover is None or result.cover.checks.passed
                constant, unchanged, covers = max(constant, c), unchanged and same, covers and passed
                rows.append([label, theta, lam, result.theta_constant, result.lambda_constant])
                context.metrics.increment('truncations')
    if config.csv_path is not None:
        write_rows(config.csv_path, ['field', 'theta', 'lambda', 'theta_constant', 'lambda_constant'], rows)
    if config.get('check', False):
        require(len(rows) > 0, "at least one truncation was evaluated")
        require(unchanged, "T u = u off the level set")
        require(covers, "Whitney covers pass the structural checks")
    return {'constant': constant, 'unchanged_off_level_set': unchanged, 'covers_passed': covers,
            'evaluated': len(rows), 'skipped': skipped}


def _modular(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    A = parse_young_arg(config.get('young'), numerics)
    by_resolution: Dict[int, List[float]] = {}
    holds = True
    rows: List[List[Any]] = []
    for resolution, label, u in _fields(config):
        result = verify_orlicz_modular(u, A, 2, numerics)
        context.ledger.extend(result.regularizations)
        holds = holds and result.holds
        if result.holds and result.c > 0:
            by_resolution.setdefault(resolution, []).append(result.c)
        rows.append([resolution, label, result.c, result.gradient_modular, result.field_modular])
    largest = {k: max(v) for k, v in by_resolution.items()}
    change = _refinement_change(largest)
    if config.csv_path is not None:
        write_rows(config.csv_path, ['resolution', 'field', 'c', 'gradient_modular', 'field_modular'], rows)
    if config.get('check', False):
        limit = config.get('max_change', 0.25)
        require(holds, f"a finite constant exists for every field with {A.describe()}")
        require(change <= limit, f"largest constant changes by {change:.3g} <= {limit:g} under refinement")
    return {'young': A.describe(), 'holds': holds, 'max_c': {str(k): v for k, v in largest.items()},
            'refinement_change': change}


def _poincare(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    X = parse_norm(config.get('X'), None, numerics)
    Y = parse_norm(config.get('Y'), None, numerics)
    by_resolution: Dict[int, float] = {}
    rows: List[List[Any]] = []
    for resolution, label, u in _fields(config):
        ratio = sobolev_poincare_check(u, X, Y, numerics=numerics)
        by_resolution[resolution] = max(by_resolution.get(resolution, 0.0), ratio)
        rows.append([resolution, label, ratio])
    if config.csv_path is not None:
        write_rows(config.csv_path, ['resolution', 'field', 'ratio'], rows)
    change = _refinement_change(by_resolution)
    if config.get('check', False):
        limit = config.get('max_change', 0.1)
        require(change < limit, f"max ratio changes by {change:.3g} < {limit:g} under refinement")
    return {'X': X.describe(), 'Y': Y.describe(), 'max_ratio': {str(k): v for k, v in by_resolution.items()},
            'refinement_change': change}


def _kfunctional(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    numerics = context.numerics
    by_resolution: Dict[int, List[float]] = {}
    rows: List[List[Any]] = []
    skipped = 0
    for resolution, label, u in _fields(config):
        for t in config.get('t'):
            try:
                comparison = k_symgrad_compare(u, t, numerics)
            except GridExtentError as e:
                skipped += 1
                context.ledger.record('kfunctional-skipped', str(e), 'verify-sobolev2d', level='warning',
                                      field=label, t=t)
                continue
            context.ledger.extend(comparison.regularizations)
            if comparison.ratio is None:
                continue
            by_resolution.setdefault(resolution, []).append(comparison.ratio)
            rows.append([resolution, label, t, comparison.predicted, comparison.upper])
    brackets = {str(k): [min(v), max(v)] for k, v in by_resolution.items()}
    change = _refinement_change({k: max(v) for k, v in by_resolution.items()})
    if config.csv_path is not None:
        write_rows(config.csv_path, ['resolution', 'field', 't', 'predicted', 'upper'], rows)
    if config.get('check', False):
        limit = config.get('max_change', 0.3)
        require(bool(by_resolution), "at least one comparison was evaluated")
        lowest = min(min(v) for v in by_resolution.values())
        require(lowest >= 1.0 - 1e-9, f"upper / predicted >= 1 (lowest {lowest:.6g})")
        require(change <= limit, f"largest ratio changes by {change:.3g} <= {limit:g} under refinement")
    return {'ratio_bracket': brackets, 'refinement_change': change, 'skipped': skipped}


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    suite = config.get('suite')
    handler = {
        'sobolev': _sobolev,
        'truncation': _truncation,
        'modular': _modular,
        'poincare': _poincare,
        'kfunctional': _kfunctional,
    }[suite]
    with context.metrics.timed(f"verify-sobolev2d:{suite}"):
        result = handler(config, context)
    result['suite'] = suite
    return result
