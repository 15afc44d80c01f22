"""Dyadic-scale maximal function on grid fields and the weak-type check."""

from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.symgrad.grid import GridDomain
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_finite_array

logger = get_logger(__name__)


def _window_means(values: np.ndarray, m: int) -> np.ndarray:
    """Averages over all m x m blocks; entry (a, b) is the block with lower-left cell (a, b)."""
    table = np.zeros((values.shape[0] + 1, values.shape[1] + 1))
    table[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)
    sums = table[m:, m:] - table[:-m, m:] - table[m:, :-m] + table[:-m, :-m]
    return sums / (m * m)


def _containing_max(means: np.ndarray, m: int, shape) -> np.ndarray:
    """For every cell, the largest mean over the m x m blocks containing it."""
    padded = np.full((shape[0] + m - 1, shape[1] + m - 1), -np.inf)
    padded[m - 1:m - 1 + means.shape[0], m - 1:m - 1 + means.shape[1]] = means
    rows = sliding_window_view(padded, m, axis=0).max(axis=-1)
    return sliding_window_view(rows, m, axis=1).max(axis=-1)


def maximal_function(values: np.ndarray, domain: Optional[GridDomain] = None) -> np.ndarray:
    """
    M f(x) = sup of the mean of |f| over grid-aligned squares of side h 2^k containing x.

    Squares stay inside the grid; f is extended by zero off the mask.

    Args:
        values: Scalar field (nx, ny)
        domain: Optional domain whose mask zeroes inactive cells

    Returns:
        Array (nx, ny) with M f >= |f|
    """
    values = np.abs(validate_finite_array(values, "maximal function input"))
    if values.ndim != 2:
        raise ValidationError(f"Invalid field: {values.ndim} dimensions. Must be 2")
    if domain is not None:
        values = np.where(domain.mask, values, 0.0)
    result = values.copy()
    m = 2
    while m <= min(values.shape):
        result = np.maximum(result, _containing_max(_window_means(values, m), m, values.shape))
        m *= 2
    return result


def weak_type_ratio(values: np.ndarray, domain: GridDomain, thresholds: Optional[Sequence[float]] = None,
                    count: int = 20) -> float:
    """
    max over thresholds t of t |{M f > t}| / ||f||_1.

    Default thresholds are `count` geometric levels between the smallest
    positive and the largest value of M f.
    """
    maximal = maximal_function(values, domain)
    total = domain.integrate(np.abs(values))
    if total == 0.0:
        return 0.0
    if thresholds is None:
        positive = maximal[maximal > 0]
        thresholds = np.geomspace(positive.min(), positive.max(), count, endpoint=False)
    ratios = [t * np.count_nonzero(maximal > t) * domain.cell_measure / total for t in thresholds]
    ratio = float(max(ratios))
    logger.debug(f"Weak-type ratio {ratio:.6g} over {len(ratios)} thresholds")
    return ratio
