"""Shared plumbing for embedding lab commands: run configuration, reports and CSV output."""

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import NumericsConfig
from src.rearrangement.io import read_profile_csv, read_samples_csv
from src.rearrangement.profiles import DecreasingProfile, rearrange
from src.utils.exceptions import AcceptanceError, ValidationError
from src.utils.ledger import ChoiceLedger
from src.utils.logger import get_logger
from src.utils.monitoring import RunMetrics
from src.utils.validators import validate_dimension, validate_positive_number
from src.young.young_function import parse_young, young_from_dict

logger = get_logger(__name__)

REPORT_SCHEMA = '1'
SIGNIFICANT_DIGITS = 12

# Options owned by the entry point; everything else belongs to the subcommand.
GLOBAL_OPTIONS = ('command', 'config', 'log_level', 'tol', 'output', 'csv', 'handler')


@dataclass(frozen=True)
class RunConfig:
    """
    Validated description of one run.

    A run is reproducible from its RunConfig: the report embeds `to_dict()`.

    Attributes:
        subcommand: Command name
        options: Subcommand options as parsed (paths kept as strings)
        overrides: `section.key=value` tolerance overrides in the order given
        config_file: Optional numerics YAML layered over the bundled defaults
        output: JSON report path; stdout when None
        csv_path: CSV output path for commands that write tables
    """

    subcommand: str
    options: Dict[str, Any] = field(default_factory=dict)
    overrides: Tuple[str, ...] = ()
    config_file: Optional[str] = None
    output: Optional[str] = None
    csv_path: Optional[str] = None

    def __post_init__(self):
        n = self.options.get('n')
        if n is not None:
            validate_dimension(n)
        L = self.options.get('L')
        if L is not None:
            validate_positive_number(L, "L", strict=True)
        seed = self.options.get('seed')
        if seed is not None and seed < 0:
            raise ValidationError(f"Invalid seed: {seed}. Must be >= 0")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        options = {key: _plain(value) for key, value in sorted(vars(args).items()) if key not in GLOBAL_OPTIONS}
        return cls(
            subcommand=args.command,
            options=options,
            overrides=tuple(args.tol or ()),
            config_file=None if args.config is None else str(args.config),
            output=None if args.output is None else str(args.output),
            csv_path=None if args.csv is None else str(args.csv),
        )

    def get(self, key: str, default: Any = None) -> Any:
        value = self.options.get(key)
        return default if value is None else value

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subcommand': self.subcommand,
            'options': dict(self.options),
            'overrides': list(self.overrides),
            'config_file': self.config_file,
            'csv': self.csv_path,
        }


@dataclass
class CommandContext:
    """Resolved settings and run-wide collectors handed to every command."""

    numerics: NumericsConfig
    ledger: ChoiceLedger = field(default_factory=ChoiceLedger)
    metrics: RunMetrics = field(default_factory=RunMetrics)


def _plain(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def round_numbers(value: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """
    Convert a result payload into JSON-ready values.

    Floats keep `digits` significant digits; non-finite floats become the
    strings 'inf', '-inf' and 'nan'; numpy scalars and arrays become Python values.
    """
    if isinstance(value, dict):
        return {str(k): round_numbers(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_numbers(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return round_numbers(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value):
            return 'nan'
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return float(f"{value:.{digits}g}")
    return value


def build_report(config: RunConfig, result: Dict[str, Any], ledger: ChoiceLedger) -> Dict[str, Any]:
    """Versioned report: config, result, the ledger entries that fired and a timestamp."""
    return {
        'schema': REPORT_SCHEMA,
        'command': config.subcommand,
        'config': round_numbers(config.to_dict()),
        'result': round_numbers(result),
        'regularizations': round_numbers(ledger.to_list()),
        'timestamp': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }


def dump_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


def write_report(report: Dict[str, Any], output: Optional[str] = None) -> None:
    """Write the report to `output`, or to stdout when no path is given."""
    text = dump_report(report)
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Report written to {path}")


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV table; floats use repr so that values survive a round trip."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    logger.info(f"Table written to {path}")
    return path


def bracket(lo: float, hi: float) -> List[float]:
    """Brackets are always emitted as [lo, hi] pairs."""
    return [float(lo), float(hi)]


def load_profile(profile: Optional[str], samples: Optional[str]) -> DecreasingProfile:
    """
    Profile from a `s,v` CSV or the rearrangement of a `value,weight` CSV.

    Raises:
        ValidationError: If neither or both sources are given
    """
    if (profile is None) == (samples is None):
        raise ValidationError("Give exactly one of --profile or --samples")
    if profile is not None:
        return read_profile_csv(Path(profile))
    return rearrange(read_samples_csv(Path(samples)))


def add_profile_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('input profile')
    group.add_argument('--profile', type=str, help='Decreasing profile CSV with header s,v')
    group.add_argument('--samples', type=str, help='Weighted samples CSV with header value,weight')


def require(condition: bool, message: str) -> None:
    """
    Acceptance assertion of a verify-* run.

    Raises:
        AcceptanceError: If the condition fails
    """
    if not condition:
        raise AcceptanceError(message)
    logger.info(f"Acceptance check passed: {message}")


def parse_young_arg(text: str, numerics: Optional[NumericsConfig] = None, base_dir: Optional[Path] = None):
    """Young function from a JSON blob or the `kind:params` shorthand."""
    text = text.strip()
    if not text.startswith('{'):
        return parse_young(text, numerics)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Invalid Young function JSON: {e}") from e
    return young_from_dict(data, base_dir, numerics)
