"""
Truncation of vector fields on the level sets of maximal functions.

T u = u off O and T u = sum_j phi_j u_j on O, where {phi_j} is a partition
of unity subordinate to the dilated Whitney squares of O and u_j is the rigid
projection of u on the j-th dilated square.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.symgrad.grid import RigidMotion2D, TensorField2D, VectorField2D, rigid_project, symmetric_gradient
from src.symgrad.maximal import maximal_function
from src.symgrad.whitney import WhitneyCover, whitney_cover
from src.utils.exceptions import GridExtentError
from src.utils.ledger import LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_positive_number

logger = get_logger(__name__)


def bump(rho: np.ndarray) -> np.ndarray:
    """(1 - rho^2)^3 on [0, 1), zero beyond."""
    rho = np.abs(rho)
    return np.where(rho < 1.0, (1.0 - rho ** 2) ** 3, 0.0)


def bump_derivative(rho: np.ndarray) -> np.ndarray:
    return np.where(np.abs(rho) < 1.0, -6.0 * rho * (1.0 - rho ** 2) ** 2, 0.0)


@dataclass(frozen=True, eq=False)
class _Piece:
    rows: slice
    cols: slice
    weight: np.ndarray
    grad_x: np.ndarray
    grad_y: np.ndarray
    side: float


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """
    Normalized bumps phi_j on the cells of O, one per Whitney square.

    Each bump is a tensor product of (1 - rho^2)^3 profiles supported in the
    dilated square; weights are stored on the block of cells it can touch.
    """

    cover: WhitneyCover
    pieces: Tuple[_Piece, ...]
    total: np.ndarray

    def sum(self) -> np.ndarray:
        """sum_j phi_j per cell (1 on O, 0 off O)."""
        out = np.zeros(self.cover.domain.shape)
        for piece in self.pieces:
            out[piece.rows, piece.cols] += piece.weight
        return out

    def support_inside(self) -> bool:
        """Every phi_j vanishes outside its dilated square."""
        for piece, cube in zip(self.pieces, self.cover.cubes):
            half = cube.dilated_half_side(self.cover.dilation)
            cx, cy = cube.center
            i = np.arange(piece.rows.start, piece.rows.stop) + 0.5
            j = np.arange(piece.cols.start, piece.cols.stop) + 0.5
            outside = (np.abs(i - cx)[:, None] >= half) | (np.abs(j - cy)[None, :] >= half)
            if np.any(piece.weight[outside] != 0.0):
                return False
        return True

    def gradient_bound(self) -> float:
        """max_j sup |grad phi_j| r_j with r_j the side of the j-th square (both in cell units)."""
        best = 0.0
        for piece in self.pieces:
            if piece.weight.size:
                best = max(best, float(np.max(np.hypot(piece.grad_x, piece.grad_y))) * piece.side)
        return best


def partition_of_unity(cover: WhitneyCover) -> PartitionOfUnity:
    """Partition of unity on O subordinate to the dilated squares of the cover."""
    domain, region = cover.domain, cover.region
    raw = []
    total = np.zeros(domain.shape)
    total_x = np.zeros(domain.shape)
    total_y = np.zeros(domain.shape)
    for cube in cover.cubes:
        half = cube.dilated_half_side(cover.dilation)
        cx, cy = cube.center
        rows = slice(max(int(np.ceil(cx - half - 0.5)), 0), min(int(np.floor(cx + half - 0.5)) + 1, domain.nx))
        cols = slice(max(int(np.ceil(cy - half - 0.5)), 0), min(int(np.floor(cy + half - 0.5)) + 1, domain.ny))
        rx = (np.arange(rows.start, rows.stop) + 0.5 - cx) / half
        ry = (np.arange(cols.start, cols.stop) + 0.5 - cy) / half
        bx, by = bump(rx), bump(ry)
        psi = np.outer(bx, by) * region[rows, cols]
        dx = np.outer(bump_derivative(rx) / half, by) * region[rows, cols]
        dy = np.outer(bx, bump_derivative(ry) / half) * region[rows, cols]
        total[rows, cols] += psi
        total_x[rows, cols] += dx
        total_y[rows, cols] += dy
        raw.append((rows, cols, psi, dx, dy, cube.side))

    pieces = []
    safe = np.where(total > 0, total, 1.0)
    for rows, cols, psi, dx, dy, side in raw:
        s = safe[rows, cols]
        weight = psi / s
        grad_x = (dx * s - psi * total_x[rows, cols]) / s ** 2
        grad_y = (dy * s - psi * total_y[rows, cols]) / s ** 2
        pieces.append(_Piece(rows, cols, weight, grad_x, grad_y, side))
    return PartitionOfUnity(cover, tuple(pieces), total)


@dataclass(frozen=True, eq=False)
class TruncationResult:
    """
    T u together with the level set, the cover and the observed bound constants.

    theta_constant = sup |T u| / theta (None when only eps is truncated);
    lambda_constant = sup |eps(T u)| / lambda.
    """

    field: VectorField2D
    region: np.ndarray
    cover: Optional[WhitneyCover]
    theta: Optional[float]
    lam: float
    theta_constant: Optional[float]
    lambda_constant: float
    motions: Tuple[RigidMotion2D, ...] = ()
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    @property
    def unchanged(self) -> np.ndarray:
        """Cells where T u = u by construction."""
        return ~self.region


def level_region(u: VectorField2D, theta: Optional[float], lam: float,
                 eps: Optional[TensorField2D] = None) -> np.ndarray:
    """O = {M|u| > theta} union {M|eps(u)| > lam}; the first set is skipped when theta is None."""
    eps = symmetric_gradient(u) if eps is None else eps
    region = maximal_function(eps.frobenius(), u.domain) > lam
    if theta is not None:
        region |= maximal_function(u.magnitude(), u.domain) > theta
    return region


def _touches_edge(region: np.ndarray) -> bool:
    return bool(region[0, :].any() or region[-1, :].any() or region[:, 0].any() or region[:, -1].any())


def _projection_window(cover: WhitneyCover, cube, min_cells: int) -> np.ndarray:
    domain = cover.domain
    half = max(cube.dilated_half_side(cover.dilation), 0.5 * min_cells)
    cx, cy = cube.center
    i = np.arange(domain.nx) + 0.5
    j = np.arange(domain.ny) + 0.5
    return (np.abs(i - cx)[:, None] < half) & (np.abs(j - cy)[None, :] < half)


def _assemble(u: VectorField2D, theta: Optional[float], lam: float, numerics: Optional[NumericsConfig],
              source: str) -> TruncationResult:
    numerics = resolve(numerics)
    eps = symmetric_gradient(u)
    region = level_region(u, theta, lam, eps) & u.domain.mask
    if not np.any(region):
        logger.debug(f"{source}: level set is empty, T u = u")
        return TruncationResult(u, region, None, theta, lam,
                                None if theta is None else u.sup_norm() / theta,
                                eps.sup_norm() / lam)
    if _touches_edge(region):
        raise GridExtentError(f"Level set of {source} touches the grid edge; enlarge the grid")

    cover = whitney_cover(u.domain, region, numerics)
    partition = partition_of_unity(cover)
    x, y = u.domain.centers()
    u1 = np.where(region, 0.0, u.u1)
    u2 = np.where(region, 0.0, u.u2)
    motions: List[RigidMotion2D] = []
    min_cells = numerics.whitney.min_projection_cells
    for cube, piece in zip(cover.cubes, partition.pieces):
        motion = rigid_project(u, _projection_window(cover, cube, min_cells))
        motions.append(motion)
        m1, m2 = motion(x[piece.rows, piece.cols], y[piece.rows, piece.cols])
        u1[piece.rows, piece.cols] += piece.weight * m1
        u2[piece.rows, piece.cols] += piece.weight * m2
    truncated = VectorField2D(u.domain, u1, u2)
    eps_truncated = symmetric_gradient(truncated)
    theta_constant = None if theta is None else truncated.sup_norm() / theta
    lambda_constant = eps_truncated.sup_norm() / lam
    logger.info(f"{source}: {np.count_nonzero(region)} cells in O, {len(cover)} squares, "
                f"|eps(Tu)|/lambda <= {lambda_constant:.4g}")
    return TruncationResult(truncated, region, cover, theta, lam, theta_constant, lambda_constant,
                            tuple(motions), cover.regularizations)


def truncate(u: VectorField2D, theta: float, lam: float,
             numerics: Optional[NumericsConfig] = None) -> TruncationResult:
    """
    Truncation on O = {M|u| > theta} union {M|eps(u)| > lam}.

    Raises:
        GridExtentError: If O touches the grid edge
    """
    validate_positive_number(theta, "theta", strict=True)
    validate_positive_number(lam, "lambda", strict=True)
    return _assemble(u, theta, lam, numerics, 'truncate')


def truncate_grad_only(u: VectorField2D, lam: float,
                       numerics: Optional[NumericsConfig] = None) -> TruncationResult:
    """Truncation on O = {M|eps(u)| > lam}; only |eps(T u)| is controlled."""
    validate_positive_number(lam, "lambda", strict=True)
    return _assemble(u, None, lam, numerics, 'truncate_grad_only')
