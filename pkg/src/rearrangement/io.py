"""CSV input/output for profiles and weighted samples."""

import csv
from pathlib import Path
from typing import List, Sequence

import numpy as np

from src.rearrangement.profiles import DecreasingProfile, WeightedSamples
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _read_rows(path: Path, header: Sequence[str]) -> List[List[float]]:
    if not path.exists():
        raise ValidationError(f"Input file not found: {path}")
    with open(path, newline='') as f:
        reader = csv.reader(f)
        try:
            first = next(reader)
        except StopIteration as e:
            raise ValidationError(f"Input file is empty: {path}") from e
        if [cell.strip() for cell in first] != list(header):
            raise ValidationError(
                f"Invalid header in {path}: {first}. Expected {','.join(header)}"
            )
        rows = []
        for line_number, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ValidationError(f"Invalid row {line_number} in {path}: {row}")
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as e:
                raise ValidationError(f"Invalid number in row {line_number} of {path}: {row}") from e
    logger.debug(f"Read {len(rows)} rows from {path}")
    return rows


def read_profile_csv(path: Path) -> DecreasingProfile:
    """Read a profile from CSV with header `s,v` (right endpoints and step values)."""
    rows = _read_rows(Path(path), ('s', 'v'))
    return DecreasingProfile.from_steps((s, v) for s, v in rows)


def write_profile_csv(profile: DecreasingProfile, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['s', 'v'])
        for s, v in profile.to_rows():
            writer.writerow([repr(float(s)), repr(float(v))])


def read_samples_csv(path: Path) -> WeightedSamples:
    """Read weighted samples from CSV with header `value,weight`."""
    rows = _read_rows(Path(path), ('value', 'weight'))
    if not rows:
        return WeightedSamples(np.zeros(0), np.zeros(0))
    data = np.array(rows)
    return WeightedSamples(data[:, 0], data[:, 1])
