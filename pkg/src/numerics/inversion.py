"""Monotone inversion by bisection and by table lookup."""

from typing import Callable

import numpy as np

from src.utils.exceptions import ConvergenceError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def bisect_first_reach(
    func: Callable[[np.ndarray], np.ndarray],
    targets: np.ndarray,
    lo: float,
    hi: float,
    iterations: int
) -> np.ndarray:
    """
    Vectorized inf{u in [lo, hi] : func(u) >= target} for a nondecreasing func.

    Returns:
        -inf where func(lo) already reaches the target, +inf where func(hi) does not
    """
    targets = np.asarray(targets, dtype=float)
    flat = targets.ravel()
    left = np.full(flat.shape, float(lo))
    right = np.full(flat.shape, float(hi))
    at_lo = np.asarray(func(left), dtype=float) >= flat
    at_hi = np.asarray(func(right), dtype=float) >= flat
    for _ in range(iterations):
        middle = 0.5 * (left + right)
        reached = np.asarray(func(middle), dtype=float) >= flat
        right = np.where(reached, middle, right)
        left = np.where(reached, left, middle)
    result = np.where(at_lo, -np.inf, np.where(at_hi, right, np.inf))
    return result.reshape(targets.shape)


def bisect_scalar(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    iterations: int,
    tolerance: float = 0.0
) -> float:
    """
    Boundary of a monotone predicate false at lo and true at hi.

    Returns:
        Upper end of the final bracket

    Raises:
        ConvergenceError: If the bracket is not valid
    """
    if predicate(lo) or not predicate(hi):
        raise ConvergenceError(f"Invalid bisection bracket [{lo}, {hi}]")
    for _ in range(iterations):
        if hi - lo <= tolerance:
            break
        middle = 0.5 * (lo + hi)
        if predicate(middle):
            hi = middle
        else:
            lo = middle
    return hi


def invert_table(x: np.ndarray, y: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    First x where a nondecreasing tabulated y reaches each target.

    Linear interpolation inside the table; -inf below it and +inf above it.
    """
    targets = np.asarray(targets, dtype=float)
    shape = targets.shape
    targets = targets.ravel()
    y = np.maximum.accumulate(np.asarray(y, dtype=float))
    finite = np.isfinite(y)
    xs, ys = np.asarray(x, dtype=float)[finite], y[finite]
    if not ys.size:
        return np.full(shape, np.inf)
    index = np.searchsorted(ys, targets, side='left')
    inside = (index > 0) & (index < ys.size)
    out = np.where(index == 0, np.where(targets <= ys[0], -np.inf, xs[0]), np.inf)
    i = index[inside]
    span = ys[i] - ys[i - 1]
    weight = np.where(span > 0, (targets[inside] - ys[i - 1]) / np.where(span > 0, span, 1.0), 1.0)
    out = np.asarray(out, dtype=float)
    out[inside] = xs[i - 1] + weight * (xs[i] - xs[i - 1])
    exact = (index == 0) & (targets == ys[0])
    out[exact] = xs[0]
    return out.reshape(shape)
