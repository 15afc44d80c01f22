"""
Planar cell grids, vector and tensor fields, symmetric gradients and rigid projections.

Fields are stored as arrays of shape (nx, ny); index i runs along x, j along y.
Cell (i, j) has centre origin + ((i + 1/2) h, (j + 1/2) h).
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy import ndimage

from src.utils.exceptions import DomainError, RankError, ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_finite_array, validate_positive_number

logger = get_logger(__name__)

MASK_KINDS = ('square', 'annulus')


@dataclass(frozen=True, eq=False)
class GridDomain:
    """
    Set of active cells of a uniform planar grid.

    Attributes:
        nx, ny: Grid dimensions in cells
        h: Cell side
        origin: Lower-left corner of the grid
        mask: Boolean array (nx, ny) of cells belonging to the domain
    """

    nx: int
    ny: int
    h: float
    origin: Tuple[float, float] = (0.0, 0.0)
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (isinstance(self.nx, (int, np.integer)) and isinstance(self.ny, (int, np.integer))) \
                or self.nx < 1 or self.ny < 1:
            raise ValidationError(f"Invalid grid dimensions: ({self.nx}, {self.ny}). Must be positive integers")
        validate_positive_number(self.h, "h", strict=True)
        mask = np.ones((self.nx, self.ny), dtype=bool) if self.mask is None else np.asarray(self.mask, dtype=bool)
        if mask.shape != (self.nx, self.ny):
            raise ValidationError(f"Invalid mask shape: {mask.shape}. Must be ({self.nx}, {self.ny})")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, 'mask', mask)
        object.__setattr__(self, 'origin', (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, 'h', float(self.h))

    @classmethod
    def square(cls, cells: int, side: float = 1.0, origin: Tuple[float, float] = (0.0, 0.0)) -> 'GridDomain':
        """Fully active cells x cells grid on a square of the given side."""
        return cls(cells, cells, side / cells, origin)

    @classmethod
    def annulus(cls, cells: int, inner: float = 0.25, outer: float = 0.75, side: float = 1.0) -> 'GridDomain':
        """
        Square annulus inner < |x - c|_inf / (side/2) < outer around the grid centre.

        Raises:
            ValidationError: If not 0 <= inner < outer <= 1
        """
        if not 0.0 <= inner < outer <= 1.0:
            raise ValidationError(f"Invalid annulus radii: ({inner}, {outer}). Must satisfy 0 <= inner < outer <= 1")
        domain = cls.square(cells, side)
        x, y = domain.centers()
        half = side / 2.0
        r = np.maximum(np.abs(x - half), np.abs(y - half)) / half
        return domain.with_mask((r > inner) & (r < outer))

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None) -> 'GridDomain':
        """
        Domain from {"nx", "ny", "h", "mask"} with mask 'square', 'annulus' or a CSV file of 0/1 rows.

        Raises:
            ValidationError: On missing keys or an unreadable mask
        """
        try:
            nx, ny, h = int(data['nx']), int(data.get('ny', data['nx'])), float(data['h'])
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Invalid domain description: {data}") from e
        origin = tuple(data.get('origin', (0.0, 0.0)))
        kind = data.get('mask', 'square')
        domain = cls(nx, ny, h, origin)
        if kind == 'square':
            return domain
        if kind == 'annulus':
            if nx != ny:
                raise ValidationError("Invalid annulus domain: grid must be square")
            return cls.annulus(nx, float(data.get('inner', 0.25)), float(data.get('outer', 0.75)), nx * h)
        path = Path(kind)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.exists():
            raise ValidationError(f"Mask file not found: {path}")
        try:
            mask = np.loadtxt(path, delimiter=',', ndmin=2) > 0
        except ValueError as e:
            raise ValidationError(f"Invalid mask file {path}") from e
        return domain.with_mask(mask)

    @classmethod
    def from_json(cls, path: Path) -> 'GridDomain':
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"Domain file not found: {path}")
        with open(path) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ValidationError(f"Invalid domain JSON in {path}") from e
        return cls.from_dict(data, path.parent)

    def with_mask(self, mask: np.ndarray) -> 'GridDomain':
        return GridDomain(self.nx, self.ny, self.h, self.origin, mask)

    @property
    def cell_measure(self) -> float:
        return self.h * self.h

    @property
    def measure(self) -> float:
        """|Omega|."""
        return float(np.count_nonzero(self.mask)) * self.cell_measure

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    def centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates as two (nx, ny) arrays."""
        x = self.origin[0] + (np.arange(self.nx) + 0.5) * self.h
        y = self.origin[1] + (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y, indexing='ij')

    def components(self) -> int:
        """Number of 4-connected components of the active cells."""
        _, count = ndimage.label(self.mask)
        return int(count)

    def interior(self) -> np.ndarray:
        """Active cells whose four neighbours are active."""
        padded = np.pad(self.mask, 1, constant_values=False)
        return (self.mask & padded[2:, 1:-1] & padded[:-2, 1:-1]
                & padded[1:-1, 2:] & padded[1:-1, :-2])

    def box_mask(self, i0: int, j0: int, size: int) -> np.ndarray:
        """Square block of size x size cells with lower-left cell (i0, j0)."""
        if i0 < 0 or j0 < 0 or i0 + size > self.nx or j0 + size > self.ny or size < 1:
            raise ValidationError(f"Invalid block ({i0}, {j0}, {size}) for a {self.nx}x{self.ny} grid")
        block = np.zeros(self.shape, dtype=bool)
        block[i0:i0 + size, j0:j0 + size] = True
        return block

    def integrate(self, values: np.ndarray, where: Optional[np.ndarray] = None) -> float:
        """Sum of values h^2 over the active cells (restricted to `where`)."""
        selection = self.mask if where is None else self.mask & where
        return float(np.sum(np.asarray(values)[selection])) * self.cell_measure

    def to_dict(self) -> Dict[str, Any]:
        return {'nx': self.nx, 'ny': self.ny, 'h': self.h, 'origin': list(self.origin),
                'active_cells': int(np.count_nonzero(self.mask))}


def _field_array(values: Any, domain: GridDomain, name: str) -> np.ndarray:
    array = validate_finite_array(values, name)
    if array.shape != domain.shape:
        raise ValidationError(f"Invalid {name} shape: {array.shape}. Must be {domain.shape}")
    array = np.where(domain.mask, array, 0.0)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class VectorField2D:
    """Planar vector field (u1, u2) on the cells of a domain; zero off the mask."""

    domain: GridDomain
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'u1', _field_array(self.u1, self.domain, 'u1'))
        object.__setattr__(self, 'u2', _field_array(self.u2, self.domain, 'u2'))

    @classmethod
    def zeros(cls, domain: GridDomain) -> 'VectorField2D':
        return cls(domain, np.zeros(domain.shape), np.zeros(domain.shape))

    @classmethod
    def from_function(cls, domain: GridDomain,
                      func: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]) -> 'VectorField2D':
        """Sample func(x, y) -> (u1, u2) at cell centres."""
        x, y = domain.centers()
        u1, u2 = func(x, y)
        return cls(domain, np.broadcast_to(u1, domain.shape), np.broadcast_to(u2, domain.shape))

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u1, self.u2)

    def sup_norm(self) -> float:
        return float(self.magnitude().max(initial=0.0))

    def l1_norm(self, where: Optional[np.ndarray] = None) -> float:
        return self.domain.integrate(self.magnitude(), where)

    def __add__(self, other: 'VectorField2D') -> 'VectorField2D':
        return VectorField2D(self.domain, self.u1 + other.u1, self.u2 + other.u2)

    def __sub__(self, other: 'VectorField2D') -> 'VectorField2D':
        return VectorField2D(self.domain, self.u1 - other.u1, self.u2 - other.u2)

    def scaled(self, factor: float) -> 'VectorField2D':
        return VectorField2D(self.domain, factor * self.u1, factor * self.u2)

    def is_zero(self) -> bool:
        return not (np.any(self.u1) or np.any(self.u2))


@dataclass(frozen=True, eq=False)
class TensorField2D:
    """Symmetric 2x2 tensor field stored by its three independent entries."""

    domain: GridDomain
    e11: np.ndarray
    e12: np.ndarray
    e22: np.ndarray

    def __post_init__(self):
        for name in ('e11', 'e12', 'e22'):
            object.__setattr__(self, name, _field_array(getattr(self, name), self.domain, name))

    def frobenius(self) -> np.ndarray:
        """|e| = sqrt(e11^2 + 2 e12^2 + e22^2) per cell."""
        return np.sqrt(self.e11 ** 2 + 2.0 * self.e12 ** 2 + self.e22 ** 2)

    def matrix(self, i: int, j: int) -> np.ndarray:
        return np.array([[self.e11[i, j], self.e12[i, j]], [self.e12[i, j], self.e22[i, j]]])

    def sup_norm(self) -> float:
        return float(self.frobenius().max(initial=0.0))

    def l1_norm(self, where: Optional[np.ndarray] = None) -> float:
        return self.domain.integrate(self.frobenius(), where)


def _derivative(values: np.ndarray, mask: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Central differences where both neighbours are active, one-sided where only one is."""
    padded_mask = np.pad(mask, 1, constant_values=False)
    padded = np.pad(values, 1)
    core = (slice(1, -1), slice(1, -1))
    ahead = [slice(1, -1), slice(1, -1)]
    behind = [slice(1, -1), slice(1, -1)]
    ahead[axis] = slice(2, None)
    behind[axis] = slice(None, -2)
    ahead, behind = tuple(ahead), tuple(behind)

    has_ahead = padded_mask[ahead] & mask
    has_behind = padded_mask[behind] & mask
    centre = padded[core]
    out = np.zeros_like(values)
    both = has_ahead & has_behind
    out[both] = (padded[ahead] - padded[behind])[both] / (2.0 * h)
    forward = has_ahead & ~has_behind
    out[forward] = (padded[ahead] - centre)[forward] / h
    backward = has_behind & ~has_ahead
    out[backward] = (centre - padded[behind])[backward] / h
    return out


def symmetric_gradient(u: VectorField2D) -> TensorField2D:
    """
    eps(u) = (grad u + grad u^T) / 2 by finite differences on the active cells.

    Raises:
        DomainError: If the domain has no interior cells
    """
    domain = u.domain
    if not np.any(domain.interior()):
        raise DomainError("Invalid domain: no interior cells for the symmetric gradient")
    d1x = _derivative(u.u1, domain.mask, domain.h, 0)
    d1y = _derivative(u.u1, domain.mask, domain.h, 1)
    d2x = _derivative(u.u2, domain.mask, domain.h, 0)
    d2y = _derivative(u.u2, domain.mask, domain.h, 1)
    return TensorField2D(domain, d1x, 0.5 * (d1y + d2x), d2y)


@dataclass(frozen=True)
class RigidMotion2D:
    """x -> b + Q x with Q = [[0, -omega], [omega, 0]]."""

    b: Tuple[float, float] = (0.0, 0.0)
    omega: float = 0.0

    def __call__(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.b[0] - self.omega * y, self.b[1] + self.omega * x

    def on(self, domain: GridDomain) -> VectorField2D:
        return VectorField2D.from_function(domain, self)

    def distance(self, other: 'RigidMotion2D') -> float:
        """Euclidean distance between parameter vectors (b, omega)."""
        return float(np.linalg.norm(np.array([*self.b, self.omega]) - np.array([*other.b, other.omega])))

    def to_dict(self) -> Dict[str, Any]:
        return {'b': list(self.b), 'omega': self.omega}


def rigid_project(u: VectorField2D, where: Optional[np.ndarray] = None) -> RigidMotion2D:
    """
    Least-squares rigid motion: minimizes sum |u - (b + Q x)|^2 h^2 over the selected cells.

    Args:
        u: Vector field
        where: Optional boolean subdomain; intersected with the domain mask

    Raises:
        RankError: If the selected cells do not contain three non-collinear centres
    """
    domain = u.domain
    cells = domain.mask if where is None else domain.mask & np.asarray(where, dtype=bool)
    x, y = domain.centers()
    x, y = x[cells], y[cells]
    design = np.column_stack([np.ones_like(x), x, y])
    if x.size < 3 or np.linalg.matrix_rank(design) < 3:
        raise RankError(f"Degenerate subdomain for rigid projection: {x.size} cells, collinear or too few")
    u1, u2 = u.u1[cells], u.u2[cells]
    count = float(x.size)
    normal = np.array([
        [count, 0.0, -y.sum()],
        [0.0, count, x.sum()],
        [-y.sum(), x.sum(), np.sum(x * x + y * y)],
    ])
    rhs = np.array([u1.sum(), u2.sum(), np.sum(x * u2 - y * u1)])
    b1, b2, omega = np.linalg.solve(normal, rhs)
    return RigidMotion2D((float(b1), float(b2)), float(omega))


@dataclass(frozen=True)
class PoincareResult:
    """||u - R u||_{L1(Q)} against |Q|^{1/2} ||eps(u)||_{L1(Q)}; ratio is None for rigid fields."""

    numerator: float
    denominator: float
    ratio: Optional[float]
    motion: RigidMotion2D

    @property
    def rigid_field(self) -> bool:
        return self.ratio is None


def rigid_residual(u: VectorField2D, motion: RigidMotion2D) -> VectorField2D:
    return u - motion.on(u.domain)


def poincare_check(u: VectorField2D, square: np.ndarray, eps: Optional[TensorField2D] = None,
                   rigid_tol: float = 1e-10) -> PoincareResult:
    """
    Poincare ratio of u on a square block of cells.

    Args:
        u: Vector field
        square: Boolean block inside the mask (see GridDomain.box_mask)
        eps: Precomputed symmetric gradient of u
        rigid_tol: eps is treated as zero below rigid_tol * sup|u| / h

    Raises:
        ValidationError: If the block leaves the mask
    """
    square = np.asarray(square, dtype=bool)
    if np.any(square & ~u.domain.mask):
        raise ValidationError("Invalid block: must lie inside the domain mask")
    eps = symmetric_gradient(u) if eps is None else eps
    motion = rigid_project(u, square)
    numerator = rigid_residual(u, motion).l1_norm(square)
    gradient = eps.l1_norm(square)
    block_measure = float(np.count_nonzero(square)) * u.domain.cell_measure
    denominator = np.sqrt(block_measure) * gradient
    scale = max(u.sup_norm(), 1.0) / u.domain.h
    if gradient <= rigid_tol * scale * block_measure:
        logger.debug("eps(u) vanishes on the block; rigid field")
        return PoincareResult(numerator, denominator, None, motion)
    return PoincareResult(numerator, denominator, numerator / denominator, motion)


def field_values(values: Union[np.ndarray, VectorField2D, TensorField2D]) -> np.ndarray:
    """Per-cell magnitudes of a scalar, vector or tensor field."""
    if isinstance(values, VectorField2D):
        return values.magnitude()
    if isinstance(values, TensorField2D):
        return values.frobenius()
    return np.abs(np.asarray(values, dtype=float))
