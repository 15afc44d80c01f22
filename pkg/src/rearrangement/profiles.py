"""Decreasing rearrangements of weighted samples and exact step-profile calculus."""

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from src.utils.exceptions import DomainError, ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_measure, validate_positive_number

logger = get_logger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class WeightedSamples:
    """
    Values of |u| on level cells together with the cell measures.

    Attributes:
        values: Nonnegative sample values
        weights: Positive cell measures
    """

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if values.shape != weights.shape:
            raise ValidationError(
                f"Invalid samples: {values.size} values but {weights.size} weights"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValidationError("Invalid sample values: must be finite and >= 0")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValidationError("Invalid sample weights: must be finite and > 0")
        object.__setattr__(self, 'values', _frozen(values))
        object.__setattr__(self, 'weights', _frozen(weights))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, float]]) -> 'WeightedSamples':
        """Build samples from (value, weight) pairs."""
        pairs = list(pairs)
        if not pairs:
            return cls(np.zeros(0), np.zeros(0))
        values, weights = zip(*pairs)
        return cls(np.array(values), np.array(weights))

    @classmethod
    def uniform(cls, values: ArrayLike, cell_measure: float) -> 'WeightedSamples':
        """Samples on a uniform partition (e.g. grid cells of area h**2)."""
        values = np.abs(np.asarray(values, dtype=float).ravel())
        return cls(values, np.full(values.shape, float(cell_measure)))

    @property
    def total_measure(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return int(self.values.size)

    def same_partition(self, other: 'WeightedSamples') -> bool:
        return self.weights.shape == other.weights.shape and np.allclose(
            self.weights, other.weights, rtol=1e-12, atol=0.0
        )

    def _require_same_partition(self, other: 'WeightedSamples') -> None:
        if not self.same_partition(other):
            raise ValidationError("Invalid sample pair: cell partitions do not match")

    def plus(self, other: 'WeightedSamples') -> 'WeightedSamples':
        """Cell-by-cell sum |u| + |v| on a shared partition."""
        self._require_same_partition(other)
        return WeightedSamples(self.values + other.values, self.weights)

    def scaled(self, factor: float) -> 'WeightedSamples':
        validate_positive_number(factor, "factor")
        return WeightedSamples(self.values * factor, self.weights)

    def level_measure(self, t: float) -> float:
        """Measure of {u > t}."""
        return float(self.weights[self.values > t].sum())


@dataclass(frozen=True, eq=False)
class DecreasingProfile:
    """
    Nonincreasing nonnegative step function on (0, L).

    Step i has height values[i] on (breakpoints[i-1], breakpoints[i]) with an
    implicit first breakpoint 0; the profile vanishes beyond L = breakpoints[-1].
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        breaks = np.asarray(self.breakpoints, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if breaks.shape != values.shape:
            raise ValidationError(
                f"Invalid profile: {breaks.size} breakpoints but {values.size} values"
            )
        if breaks.size:
            if not np.all(np.isfinite(breaks)) or breaks[0] <= 0 or np.any(np.diff(breaks) <= 0):
                raise ValidationError("Invalid profile breakpoints: must be finite, positive, strictly increasing")
            if np.any(np.isnan(values)) or np.any(values < 0):
                raise ValidationError("Invalid profile values: must be >= 0")
            if np.any(np.diff(values) > 0):
                raise ValidationError("Invalid profile values: must be nonincreasing")
        object.__setattr__(self, 'breakpoints', _frozen(breaks))
        object.__setattr__(self, 'values', _frozen(values))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, L: float = 1.0) -> 'DecreasingProfile':
        return cls(np.array([float(L)]), np.array([0.0]))

    @classmethod
    def constant(cls, c: float, L: float) -> 'DecreasingProfile':
        validate_positive_number(c, "c")
        validate_positive_number(L, "L", strict=True)
        return cls(np.array([float(L)]), np.array([float(c)]))

    @classmethod
    def indicator(cls, m: float, height: float = 1.0, L: Optional[float] = None) -> 'DecreasingProfile':
        """height * chi_(0,m), optionally padded with a zero step up to L."""
        validate_positive_number(m, "m", strict=True)
        if L is None or L <= m:
            return cls(np.array([float(m)]), np.array([float(height)]))
        return cls(np.array([float(m), float(L)]), np.array([float(height), 0.0]))

    @classmethod
    def from_steps(cls, steps: Iterable[Tuple[float, float]]) -> 'DecreasingProfile':
        """Build a profile from (right endpoint, value) pairs."""
        steps = list(steps)
        if not steps:
            return cls(np.zeros(0), np.zeros(0))
        breaks, values = zip(*steps)
        return cls(np.array(breaks), np.array(values)).canonical()

    def canonical(self) -> 'DecreasingProfile':
        """Merge adjacent steps of equal height."""
        if self.values.size < 2:
            return self
        keep = np.append(self.values[1:] != self.values[:-1], True)
        return DecreasingProfile(self.breakpoints[keep], self.values[keep])

    # -- geometry -------------------------------------------------------

    @property
    def L(self) -> float:
        return float(self.breakpoints[-1]) if self.breakpoints.size else 0.0

    @property
    def left_endpoints(self) -> np.ndarray:
        return np.concatenate(([0.0], self.breakpoints[:-1]))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.concatenate(([0.0], self.breakpoints)))

    @property
    def support(self) -> float:
        """Right end of {f > 0}."""
        positive = np.nonzero(self.values > 0)[0]
        return float(self.breakpoints[positive[-1]]) if positive.size else 0.0

    @property
    def sup(self) -> float:
        """f*(0+)."""
        return float(self.values[0]) if self.values.size else 0.0

    def is_zero(self) -> bool:
        return not np.any(self.values > 0)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecreasingProfile):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def allclose(self, other: 'DecreasingProfile', rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return (self.breakpoints.shape == other.breakpoints.shape
                and np.allclose(self.breakpoints, other.breakpoints, rtol=rtol, atol=atol)
                and np.allclose(self.values, other.values, rtol=rtol, atol=atol))

    # -- evaluation -----------------------------------------------------

    def value_at(self, s: ArrayLike) -> np.ndarray:
        """f*(s), right-continuous, zero beyond L."""
        s = np.asarray(s, dtype=float)
        index = np.searchsorted(self.breakpoints, s, side='right')
        padded = np.append(self.values, 0.0)
        return padded[np.minimum(index, self.values.size)]

    def cumulative(self, s: ArrayLike) -> np.ndarray:
        """Exact piecewise-linear integral of f* over (0, s)."""
        s = np.asarray(s, dtype=float)
        if not self.values.size:
            return np.zeros_like(s)
        lefts = self.left_endpoints
        partial = np.concatenate(([0.0], np.cumsum(self.values * self.widths)))
        clipped = np.clip(s, 0.0, self.L)
        index = np.clip(np.searchsorted(self.breakpoints, clipped, side='left'), 0, self.values.size - 1)
        return partial[index] + self.values[index] * (clipped - lefts[index])

    @property
    def integral(self) -> float:
        return float(np.sum(self.values * self.widths))

    def level_measure(self, t: float) -> float:
        """Measure of {f* > t}."""
        return float(self.widths[self.values > t].sum())

    def weighted_integral(self, antiderivative: Callable[[np.ndarray], np.ndarray],
                          a: float = 0.0, b: Optional[float] = None) -> float:
        """
        Integral of f* against a weight with known antiderivative on (a, b).

        Args:
            antiderivative: W with W' = weight; must accept arrays
            a: Lower limit
            b: Upper limit (defaults to L)

        Returns:
            sum_i v_i (W(min(b, s_i)) - W(max(a, s_{i-1}))) over overlapping steps
        """
        b = self.L if b is None else min(b, self.L)
        if not self.values.size or b <= a:
            return 0.0
        lo = np.maximum(self.left_endpoints, a)
        hi = np.minimum(self.breakpoints, b)
        active = (hi > lo) & (self.values > 0)
        if not np.any(active):
            return 0.0
        increments = antiderivative(hi[active]) - antiderivative(lo[active])
        return float(np.sum(self.values[active] * increments))

    def kernel_integral(self, gamma: float, a: float = 0.0, b: Optional[float] = None) -> float:
        """Exact integral of f*(r) r**(-gamma) over (a, b)."""
        if gamma == 1.0:
            if a <= 0 and self.sup > 0:
                return float('inf')
            return self.weighted_integral(np.log, a, b)
        exponent = 1.0 - gamma
        if exponent < 0 and a <= 0 and self.sup > 0:
            return float('inf')
        return self.weighted_integral(lambda r: np.power(r, exponent) / exponent, a, b)

    # -- transformations --------------------------------------------------

    def scaled(self, factor: float) -> 'DecreasingProfile':
        validate_positive_number(factor, "factor")
        return DecreasingProfile(self.breakpoints, self.values * factor)

    def restricted(self, L: float) -> 'DecreasingProfile':
        """Restriction to (0, L)."""
        validate_positive_number(L, "L", strict=True)
        if L >= self.L:
            return self
        keep = self.breakpoints < L
        breaks = np.append(self.breakpoints[keep], L)
        index = int(np.count_nonzero(keep))
        values = np.append(self.values[keep], self.values[index])
        return DecreasingProfile(breaks, values)

    def padded(self, L: float) -> 'DecreasingProfile':
        """Extension by a zero step up to L."""
        if L <= self.L:
            return self
        return DecreasingProfile(np.append(self.breakpoints, L), np.append(self.values, 0.0))

    def trimmed(self) -> 'DecreasingProfile':
        """Drop trailing zero steps (keeps at least one step)."""
        support = self.support
        if support == 0.0 or support >= self.L:
            return self
        return self.restricted(support)

    def minimum(self, level: float) -> 'DecreasingProfile':
        """min(f*, level)."""
        return DecreasingProfile(self.breakpoints, np.minimum(self.values, level)).canonical()

    def excess(self, level: float) -> 'DecreasingProfile':
        """(f* - level)_+."""
        return DecreasingProfile(self.breakpoints, np.maximum(self.values - level, 0.0)).canonical()

    def to_samples(self) -> WeightedSamples:
        return WeightedSamples(self.values, self.widths)

    def to_rows(self) -> np.ndarray:
        return np.column_stack([self.breakpoints, self.values])


def rearrange(samples: WeightedSamples) -> DecreasingProfile:
    """
    Decreasing rearrangement of weighted samples.

    Equal values are merged into one step, so the output is canonical and its
    total measure equals samples.total_measure.

    Args:
        samples: Validated weighted samples

    Returns:
        DecreasingProfile equimeasurable with the samples
    """
    if not len(samples):
        return DecreasingProfile(np.zeros(0), np.zeros(0))
    levels, inverse = np.unique(samples.values, return_inverse=True)
    masses = np.bincount(inverse, weights=samples.weights, minlength=levels.size)
    levels = levels[::-1]
    masses = masses[::-1]
    breaks = np.cumsum(masses)
    # cumulative sums of positive masses can still collide in floating point; a run keeps its first (highest) level
    keep = np.insert(np.diff(breaks) > 0, 0, True)
    if not np.all(keep):
        logger.debug(f"Dropping {np.count_nonzero(~keep)} steps of negligible measure")
    return DecreasingProfile(breaks[keep], levels[keep])


def double_star(f: DecreasingProfile, s: float) -> float:
    """
    Maximal rearrangement f**(s) = (1/s) * integral of f* over (0, s).

    Raises:
        DomainError: If s <= 0
    """
    validate_measure(s)
    return float(f.cumulative(min(s, f.L))) / s if f.L > 0 else 0.0


def double_star_array(f: DecreasingProfile, s: ArrayLike) -> np.ndarray:
    """Vectorized f** for an array of positive s."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("Invalid s: all values must be > 0")
    return f.cumulative(np.minimum(s, f.L)) / s


def product_integral(f: DecreasingProfile, g: DecreasingProfile) -> float:
    """Exact integral of f* g* over (0, inf) for two step profiles."""
    end = min(f.L, g.L)
    if end <= 0:
        return 0.0
    edges = np.union1d(f.breakpoints, g.breakpoints)
    edges = np.concatenate(([0.0], edges[edges < end], [end]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.sum(np.diff(edges) * f.value_at(mids) * g.value_at(mids)))


def hardy_littlewood_pairing(u: WeightedSamples, v: WeightedSamples) -> Tuple[float, float]:
    """
    Both sides of the Hardy-Littlewood inequality sum(u v w) <= integral of u* v*.

    Raises:
        ValidationError: If the two sample sets do not share a partition
    """
    if not u.same_partition(v):
        raise ValidationError("Invalid sample pair: cell partitions do not match")
    lhs = float(np.sum(u.values * v.values * u.weights))
    rhs = product_integral(rearrange(u), rearrange(v))
    return lhs, rhs


def geometric_edges(lo: float, hi: float, points_per_decade: int,
                    extra: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Cell edges from lo to hi spaced geometrically, merged with extra breakpoints.

    Returns:
        Strictly increasing edges starting at lo and ending at hi
    """
    decades = max(np.log10(hi / lo), 1e-12)
    count = max(int(np.ceil(decades * points_per_decade)), 1)
    edges = np.geomspace(lo, hi, count + 1)
    if extra is not None and len(extra):
        extra = np.asarray(extra, dtype=float)
        edges = np.union1d(edges, extra[(extra > lo) & (extra < hi)])
    return edges


def profile_from_antiderivative(antiderivative: Callable[[np.ndarray], np.ndarray],
                                edges: np.ndarray, head: bool = True) -> DecreasingProfile:
    """
    Rearranged cell averages of a nonnegative function given by its antiderivative.

    Cell averages never increase a rearrangement-invariant norm, so norms of the
    result approach the norm of the function from below as the grid is refined.

    Args:
        antiderivative: F with F(s) = integral of g over (0, s); F(0) = 0
        edges: Increasing cell edges; with `head` the cell (0, edges[0]) is added
        head: Include the cell adjacent to the origin

    Returns:
        DecreasingProfile on (0, edges[-1])
    """
    edges = np.asarray(edges, dtype=float)
    if head and edges[0] > 0:
        edges = np.concatenate(([0.0], edges))
    primitive = antiderivative(edges)
    widths = np.diff(edges)
    averages = np.maximum(np.diff(primitive), 0.0) / widths
    if not head and edges[0] > 0:
        # leading gap carries no mass; keep it so the support stays aligned
        averages = np.concatenate(([0.0], averages))
        widths = np.concatenate(([edges[0]], widths))
    if not np.all(np.isfinite(averages)):
        raise ValidationError("Invalid tabulation: antiderivative is not finite on the grid")
    return rearrange(WeightedSamples(averages, widths))


def random_profile(rng: np.random.Generator, L: float, max_steps: int = 8) -> DecreasingProfile:
    """Decreasing step profile with 1..max_steps steps and support in (L/20, L)."""
    top = L * rng.uniform(0.05, 1.0)
    inner = rng.uniform(0.0, top, size=int(rng.integers(0, max_steps)))
    breaks = np.unique(np.append(inner[inner > 0], top))
    values = np.sort(rng.exponential(1.0, size=breaks.size))[::-1]
    return DecreasingProfile(breaks, values)
