"""`golden`: regenerate the symbolic target and modulus tables and compare them with fixtures."""

import argparse
from pathlib import Path
from typing import Any, Dict, List

import yaml

from src.commands.common import CommandContext, RunConfig, require
from src.config.config_loader import get_config_path, load_config
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.young.young_function import parse_young
from src.young.zygmund_table import AsymptoticClass, modulus_table, zygmund_table

logger = get_logger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--cases', type=str, help='Case file (default: bundled golden_cases.yaml)')
    parser.add_argument('--check', type=str, help='Fixture YAML to compare against')
    parser.add_argument('--write', type=str, help='Write the regenerated tables as YAML')


def target_case(case: Dict[str, Any], numerics=None) -> Dict[str, Any]:
    """Descriptor of one target case given by a Young function or an asymptotic class."""
    if 'young' in case:
        cls = parse_young(case['young'], numerics).asymptotics()
        if cls is None:
            raise ValidationError(f"Young function {case['young']} has no tabulated class")
    elif 'class' in case:
        cls = AsymptoticClass.from_dict(case['class'])
    else:
        raise ValidationError(f"Invalid golden case {case}: needs 'young' or 'class'")
    return zygmund_table(cls, int(case['n']), case.get('setting', 'finite')).to_dict()


def modulus_case(case: Dict[str, Any]) -> str:
    return modulus_table(case['example'], int(case['n']), beta=case.get('beta'), alpha=case.get('alpha')).expression


def regenerate(cases: Dict[str, Any], numerics=None) -> Dict[str, Any]:
    """Tables keyed by case id: target descriptors and modulus expressions."""
    return {
        'targets': {key: target_case(case, numerics) for key, case in (cases.get('targets') or {}).items()},
        'moduli': {key: modulus_case(case) for key, case in (cases.get('moduli') or {}).items()},
    }


def compare(tables: Dict[str, Any], fixture: Dict[str, Any]) -> List[str]:
    """Human-readable mismatches between regenerated tables and a fixture."""
    problems = []
    for section in ('targets', 'moduli'):
        expected = fixture.get(section) or {}
        found = tables.get(section) or {}
        for key in sorted(set(expected) | set(found)):
            if key not in found:
                problems.append(f"{section}/{key}: missing from regenerated tables")
            elif key not in expected:
                problems.append(f"{section}/{key}: missing from fixture")
            elif found[key] != expected[key]:
                problems.append(f"{section}/{key}: expected {expected[key]!r}, got {found[key]!r}")
    return problems


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    cases_path = Path(config.get('cases')) if config.get('cases') else get_config_path('golden_cases')
    cases = load_config(cases_path)
    with context.metrics.timed('golden'):
        tables = regenerate(cases, context.numerics)
    if config.get('write'):
        path = Path(config.get('write'))
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            yaml.safe_dump(tables, f, sort_keys=True, allow_unicode=True)
        logger.info(f"Golden tables written to {path}")
    result: Dict[str, Any] = {'tables': tables,
                              'cases': len(tables['targets']) + len(tables['moduli'])}
    if config.get('check'):
        fixture = load_config(Path(config.get('check')))
        problems = compare(tables, fixture)
        result['mismatches'] = problems
        for problem in problems:
            logger.error(f"Golden mismatch: {problem}")
        require(not problems, f"{result['cases']} golden cases match {config.get('check')}")
    return result
