"""
Whitney covers of open cell sets by dyadic squares.

Geometry is resolved at cell-centre level: coordinates are measured in cell
units from the grid origin, O is the set of its cell centres and dist(Q, dO)
is the distance from the closed square Q to the nearest centre outside O.
Squares are dyadic subdivisions of the smallest power-of-two square holding
the grid, sub-cell sizes included.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.config.settings import NumericsConfig, resolve
from src.symgrad.grid import GridDomain
from src.utils.exceptions import DomainError, ValidationError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger

logger = get_logger(__name__)

SQRT2 = float(np.sqrt(2.0))


@dataclass(frozen=True)
class WhitneyCube:
    """Dyadic square [x, x + side) x [y, y + side) in cell units with its boundary distance."""

    level: int
    ix: int
    iy: int
    side: float
    dist: float
    capped: bool = False

    @property
    def corner(self) -> Tuple[float, float]:
        return (self.ix * self.side, self.iy * self.side)

    @property
    def center(self) -> Tuple[float, float]:
        return ((self.ix + 0.5) * self.side, (self.iy + 0.5) * self.side)

    def dilated_half_side(self, dilation: float) -> float:
        return 0.5 * dilation * self.side


@dataclass(frozen=True)
class WhitneyChecks:
    """Structural properties of a cover, each verified on the produced squares."""

    disjoint: bool
    covers: bool
    distance_bounds: bool
    neighbour_ratio: bool
    max_neighbours: int
    neighbour_limit: int

    @property
    def passed(self) -> bool:
        return (self.disjoint and self.covers and self.distance_bounds and self.neighbour_ratio
                and self.max_neighbours <= self.neighbour_limit)

    def to_dict(self) -> Dict[str, object]:
        return {
            'disjoint': self.disjoint,
            'covers': self.covers,
            'distance_bounds': self.distance_bounds,
            'neighbour_ratio': self.neighbour_ratio,
            'max_neighbours': self.max_neighbours,
            'neighbour_limit': self.neighbour_limit,
            'passed': self.passed,
        }


@dataclass(frozen=True, eq=False)
class WhitneyCover:
    """Accepted squares of a Whitney decomposition of O together with their checks."""

    domain: GridDomain
    region: np.ndarray
    cubes: Tuple[WhitneyCube, ...]
    lower: float
    upper: float
    dilation: float
    checks: Optional[WhitneyChecks] = None
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.cubes)

    def sides(self) -> np.ndarray:
        return np.array([cube.side for cube in self.cubes])

    def physical_center(self, cube: WhitneyCube) -> Tuple[float, float]:
        cx, cy = cube.center
        return (self.domain.origin[0] + cx * self.domain.h, self.domain.origin[1] + cy * self.domain.h)

    def cells_in(self, cube: WhitneyCube) -> Tuple[slice, slice]:
        """Index ranges of the cell centres inside the half-open square."""
        return _centre_range(cube.corner[0], cube.side, self.domain.nx), \
            _centre_range(cube.corner[1], cube.side, self.domain.ny)

    def neighbours(self) -> List[List[int]]:
        """Indices of squares whose closures touch, per square."""
        if not self.cubes:
            return []
        centers = np.array([cube.center for cube in self.cubes])
        sides = self.sides()
        tree = cKDTree(centers)
        result = []
        for k, cube in enumerate(self.cubes):
            radius = 0.5 * (cube.side + sides.max())
            candidates = tree.query_ball_point(centers[k], radius * (1 + 1e-12), p=np.inf)
            touching = [
                other for other in candidates
                if other != k and np.max(np.abs(centers[other] - centers[k]))
                <= 0.5 * (cube.side + sides[other]) * (1 + 1e-12)
            ]
            result.append(sorted(touching))
        return result


def _centre_range(start: float, side: float, count: int) -> slice:
    """Indices i with i + 1/2 in [start, start + side), clipped to the grid."""
    lo = int(np.ceil(start - 0.5))
    hi = int(np.ceil(start + side - 0.5))
    return slice(max(lo, 0), max(min(hi, count), 0))


class _BoxCounter:
    """Constant-time counts of marked cell centres inside a half-open square."""

    def __init__(self, marks: np.ndarray):
        self.shape = marks.shape
        self.table = np.zeros((marks.shape[0] + 1, marks.shape[1] + 1), dtype=np.int64)
        self.table[1:, 1:] = marks.astype(np.int64).cumsum(axis=0).cumsum(axis=1)

    def count(self, x: float, y: float, side: float) -> int:
        rows = _centre_range(x, side, self.shape[0])
        cols = _centre_range(y, side, self.shape[1])
        if rows.stop <= rows.start or cols.stop <= cols.start:
            return 0
        t = self.table
        return int(t[rows.stop, cols.stop] - t[rows.start, cols.stop]
                   - t[rows.stop, cols.start] + t[rows.start, cols.start])


class _BoundaryDistance:
    """Distance from a closed square to the nearest centre outside O."""

    def __init__(self, outside: np.ndarray):
        i, j = np.nonzero(outside)
        self.points = np.column_stack([i + 0.5, j + 0.5])
        self.tree = cKDTree(self.points)

    def __call__(self, x: float, y: float, side: float) -> float:
        center = np.array([x + 0.5 * side, y + 0.5 * side])
        nearest, _ = self.tree.query(center)
        candidates = self.tree.query_ball_point(center, nearest + side / SQRT2 + 1e-12)
        points = self.points[candidates]
        gap = np.maximum(np.abs(points - center) - 0.5 * side, 0.0)
        return float(np.min(np.hypot(gap[:, 0], gap[:, 1])))


def whitney_cover(domain: GridDomain, region: np.ndarray, numerics: Optional[NumericsConfig] = None,
                  check: bool = True) -> WhitneyCover:
    """
    Whitney decomposition of the open cell set `region`.

    A square is accepted once it holds only centres of O and
    lower sqrt(2) side <= dist(Q, dO); squares without centres of O are dropped.

    Args:
        domain: Grid carrying the region
        region: Boolean (nx, ny) set O
        numerics: Settings (whitney section)
        check: Verify the structural properties and attach them

    Raises:
        DomainError: If O is the whole grid
        ValidationError: If the region has the wrong shape
    """
    region = np.asarray(region, dtype=bool)
    if region.shape != domain.shape:
        raise ValidationError(f"Invalid region shape: {region.shape}. Must be {domain.shape}")
    if np.all(region):
        raise DomainError("Invalid region: O covers the whole grid and has no boundary")
    settings = resolve(numerics).whitney
    ledger = ChoiceLedger()
    inside = _BoxCounter(region)
    outside_counter = _BoxCounter(~region)
    distance = _BoundaryDistance(~region)
    min_side = 2.0 ** -settings.max_depth

    root_level = int(np.ceil(np.log2(max(domain.nx, domain.ny, 1))))
    stack = [(0, 0, 0, float(2 ** root_level))]
    accepted = []
    capped = 0
    while stack:
        level, ix, iy, side = stack.pop()
        x, y = ix * side, iy * side
        if inside.count(x, y, side) == 0:
            continue
        if outside_counter.count(x, y, side) == 0:
            dist = distance(x, y, side)
            if dist >= settings.lower * SQRT2 * side:
                accepted.append(WhitneyCube(level, ix, iy, side, dist))
                continue
            if side <= min_side:
                accepted.append(WhitneyCube(level, ix, iy, side, dist, capped=True))
                capped += 1
                continue
        half = side / 2.0
        for dx in (1, 0):
            for dy in (1, 0):
                stack.append((level + 1, 2 * ix + dx, 2 * iy + dy, half))

    accepted.sort(key=lambda c: (c.level, c.ix, c.iy))
    if capped:
        ledger.record('boundary-layer-cubes',
                      f"{capped} squares reached side 2^-{settings.max_depth} cells before the distance bound",
                      'whitney_cover', level='warning', count=capped)
    cover = WhitneyCover(domain, region, tuple(accepted), settings.lower, settings.upper, settings.dilation,
                         regularizations=tuple(ledger.entries))
    logger.debug(f"Whitney cover: {len(accepted)} squares, sides "
                 f"{cover.sides().min() if accepted else 0:g}..{cover.sides().max() if accepted else 0:g}")
    if check:
        checks = check_cover(cover)
        if not checks.passed:
            logger.warning(f"Whitney cover fails structural checks: {checks.to_dict()}")
        cover = WhitneyCover(domain, region, cover.cubes, cover.lower, cover.upper, cover.dilation,
                             checks, cover.regularizations)
    return cover


def check_cover(cover: WhitneyCover) -> WhitneyChecks:
    """Disjointness, coverage, distance bounds and neighbour structure of a cover."""
    counts = np.zeros(cover.domain.shape, dtype=np.int64)
    for cube in cover.cubes:
        rows, cols = cover.cells_in(cube)
        counts[rows, cols] += 1
    disjoint = bool(np.all(counts <= 1))
    covers = bool(np.all(counts[cover.region] == 1) and np.all(counts[~cover.region] == 0))

    regular = [k for k, cube in enumerate(cover.cubes) if not cube.capped]
    distance_bounds = all(
        cover.lower * SQRT2 * cube.side <= cube.dist * (1 + 1e-12)
        and cube.dist <= cover.upper * SQRT2 * cube.side * (1 + 1e-12)
        for cube in (cover.cubes[k] for k in regular)
    )

    neighbours = cover.neighbours()
    sides = cover.sides()
    ratio_ok, most = True, 0
    regular_set = set(regular)
    for k in regular:
        close = [other for other in neighbours[k] if other in regular_set]
        most = max(most, len(close))
        if close:
            ratios = sides[close] / sides[k]
            ratio_ok = ratio_ok and bool(np.all((ratios >= 0.5) & (ratios <= 2.0)))
    return WhitneyChecks(disjoint, covers, distance_bounds, ratio_ok, most, (3 ** 2 - 1) * 2 ** 2)
