"""Seeded test-field families and field CSV input/output."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from src.symgrad.grid import GridDomain, RigidMotion2D, VectorField2D
from src.symgrad.truncation import bump
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_choice, validate_positive_number

logger = get_logger(__name__)

FAMILY_KINDS = ('bump', 'log-cusp')


@dataclass(frozen=True)
class BumpSpec:
    """u(x) = amplitude (1 - rho^2)^3 (cos angle, sin angle) with rho = |x - center| / width."""

    center: Tuple[float, float]
    width: float
    amplitude: float
    angle: float

    def on(self, domain: GridDomain) -> VectorField2D:
        def evaluate(x, y):
            rho = np.hypot(x - self.center[0], y - self.center[1]) / self.width
            profile = self.amplitude * bump(rho)
            return profile * np.cos(self.angle), profile * np.sin(self.angle)
        return VectorField2D.from_function(domain, evaluate)


def bump_specs(count: int, seed: int, box: Tuple[float, float] = (0.0, 1.0),
               widths: Tuple[float, float] = (0.08, 0.2)) -> List[BumpSpec]:
    """
    Resolution-independent bump parameters.

    Bump centres stay two widths away from the box edges so that their
    maximal-function level sets stay inside the grid.
    """
    if count < 1:
        raise ValidationError(f"Invalid count: {count}. Must be >= 1")
    rng = np.random.default_rng(seed)
    lo, hi = box
    specs = []
    for _ in range(count):
        width = rng.uniform(*widths) * (hi - lo)
        margin = 2.0 * width
        if hi - lo <= 2 * margin:
            raise ValidationError(f"Invalid bump widths {widths} for box {box}")
        center = (rng.uniform(lo + margin, hi - margin), rng.uniform(lo + margin, hi - margin))
        specs.append(BumpSpec(center, width, rng.uniform(0.5, 2.0), rng.uniform(0.0, 2 * np.pi)))
    return specs


def bump_family(domain: GridDomain, count: int, seed: int) -> List[VectorField2D]:
    """Seeded smooth compactly supported bumps sampled on `domain`."""
    side = domain.nx * domain.h
    box = (domain.origin[0], domain.origin[0] + side)
    return [spec.on(domain) for spec in bump_specs(count, seed, box)]


def log_cusp(domain: GridDomain, k: float, center: Tuple[float, float] = (0.5, 0.5),
             radius: float = 0.25) -> VectorField2D:
    """
    u = min(log(radius / |x - c|), k) e_1 inside the disc, 0 outside.

    sup |u| = k while ||eps(u)||_{L^2} grows like sqrt(k).
    """
    validate_positive_number(k, "k", strict=True)
    validate_positive_number(radius, "radius", strict=True)

    def evaluate(x, y):
        r = np.hypot(x - center[0], y - center[1])
        with np.errstate(divide='ignore'):
            value = np.where(r < radius, np.minimum(np.log(radius / np.maximum(r, 1e-300)), k), 0.0)
        return value, np.zeros_like(value)
    return VectorField2D.from_function(domain, evaluate)


def rigid_field(domain: GridDomain, motion: RigidMotion2D) -> VectorField2D:
    return motion.on(domain)


def polynomial_field(domain: GridDomain, coefficients: Sequence[Sequence[float]]) -> VectorField2D:
    """
    Quadratic field with components c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2.

    Args:
        coefficients: Two rows of up to six coefficients
    """
    rows = [list(row) + [0.0] * (6 - len(row)) for row in coefficients]
    if len(rows) != 2 or any(len(row) != 6 for row in rows):
        raise ValidationError("Invalid polynomial coefficients: need two rows of at most six entries")

    def evaluate(x, y):
        basis = (np.ones_like(x), x, y, x * x, x * y, y * y)
        return tuple(sum(c * b for c, b in zip(row, basis)) for row in rows)
    return VectorField2D.from_function(domain, evaluate)


@dataclass(frozen=True)
class FieldFamily:
    """
    Field family sampled at several resolutions of the unit square.

    Kinds:
        bump: `count` seeded bumps
        log-cusp: cusps of heights `levels`
    """

    kind: str = 'bump'
    count: int = 50
    seed: int = 0
    resolutions: Tuple[int, ...] = (64, 128)
    levels: Tuple[float, ...] = (1.0, 2.0, 3.0)

    def __post_init__(self):
        validate_choice(self.kind, FAMILY_KINDS, "field family kind")
        if not self.resolutions or any(r < 8 for r in self.resolutions):
            raise ValidationError(f"Invalid resolutions: {self.resolutions}. Must be >= 8")

    def domain(self, resolution: int) -> GridDomain:
        return GridDomain.square(resolution)

    def fields(self, resolution: int) -> List[VectorField2D]:
        domain = self.domain(resolution)
        if self.kind == 'bump':
            return bump_family(domain, self.count, self.seed)
        return [log_cusp(domain, k) for k in self.levels]

    def labels(self) -> List[float]:
        return list(range(self.count)) if self.kind == 'bump' else list(self.levels)


def write_field_csv(field: VectorField2D, path: Path) -> None:
    """Write active cells as rows `i,j,u1,u2`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['i', 'j', 'u1', 'u2'])
        for i, j in zip(*np.nonzero(field.domain.mask)):
            writer.writerow([int(i), int(j), repr(float(field.u1[i, j])), repr(float(field.u2[i, j]))])


def read_field_csv(path: Path, domain: GridDomain) -> VectorField2D:
    """
    Read a field from rows `i,j,u1,u2`; cells not listed are zero.

    Raises:
        ValidationError: On a bad header, a malformed row or an index outside the grid
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"Field file not found: {path}")
    u1 = np.zeros(domain.shape)
    u2 = np.zeros(domain.shape)
    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [cell.strip() for cell in header] != ['i', 'j', 'u1', 'u2']:
            raise ValidationError(f"Invalid header in {path}: {header}. Expected i,j,u1,u2")
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                i, j, a, b = int(row[0]), int(row[1]), float(row[2]), float(row[3])
            except (IndexError, ValueError) as e:
                raise ValidationError(f"Invalid row {line_number} in {path}: {row}") from e
            if not (0 <= i < domain.nx and 0 <= j < domain.ny):
                raise ValidationError(f"Invalid cell ({i}, {j}) in row {line_number} of {path}")
            u1[i, j], u2[i, j] = a, b
    return VectorField2D(domain, u1, u2)
