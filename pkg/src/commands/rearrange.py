"""`rearrange`: decreasing rearrangement of weighted samples."""

import argparse
from pathlib import Path
from typing import Any, Dict

import numpy as np

from src.commands.common import CommandContext, RunConfig, add_profile_arguments, load_profile
from src.rearrangement.io import write_profile_csv
from src.rearrangement.profiles import double_star_array
from src.utils.logger import get_logger

logger = get_logger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_profile_arguments(parser)
    parser.add_argument('--at', type=float, nargs='*', default=[],
                        help='Also report f*(s) and f**(s) at these s')


def run(config: RunConfig, context: CommandContext) -> Dict[str, Any]:
    with context.metrics.timed('rearrange'):
        profile = load_profile(config.get('profile'), config.get('samples')).canonical()
    if config.csv_path is not None:
        write_profile_csv(profile, Path(config.csv_path))
    at = np.asarray(config.get('at', []), dtype=float)
    logger.info(f"Rearranged into {len(profile)} steps on (0, {profile.L:g})")
    return {
        'breakpoints': profile.breakpoints,
        'values': profile.values,
        'L': profile.L,
        'support': profile.support,
        'integral': profile.integral,
        'sup': profile.sup,
        'at': [[s, float(profile.value_at(s)), float(d)]
               for s, d in zip(at, double_star_array(profile, at))] if at.size else [],
    }
