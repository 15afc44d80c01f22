"""
Integration helpers.

Improper integrals over (0, inf) are taken in the variable u = log s, where
power-type integrands become exponentials of slowly varying functions. Tails
beyond the computed range are fitted to log h(u) = c - kappa*log|u| - delta*|u|
and closed analytically; a tail is accepted as convergent when delta exceeds the
convergence margin or when delta vanishes and kappa > 1 + margin.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from src.config.settings import NumericsConfig, TableSettings, resolve
from src.utils.logger import get_logger

logger = get_logger(__name__)

LogIntegrand = Callable[[np.ndarray], np.ndarray]


def integrate_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    numerics: Optional[NumericsConfig] = None,
    points: Optional[Sequence[float]] = None,
    label: str = "integral"
) -> float:
    """
    Adaptive quadrature with configured tolerances.

    Args:
        func: Scalar integrand
        a: Lower limit (may be -inf)
        b: Upper limit (may be inf)
        numerics: Settings; bundled defaults when None
        points: Known breakpoints inside (a, b)
        label: Name used in diagnostics

    Returns:
        Value of the integral
    """
    settings = resolve(numerics).quadrature
    kwargs = dict(epsrel=settings.rel_tol, epsabs=settings.abs_tol, limit=settings.limit)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        inner = [p for p in points if a < p < b]
        if inner:
            kwargs['points'] = inner
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', integrate.IntegrationWarning)
        value, error = integrate.quad(func, a, b, **kwargs)
    if caught:
        logger.debug(f"{label}: quadrature warning on ({a}, {b}), error estimate {error:.3g}")
    return float(value)


def log_axis_grid(u_lo: float, u_hi: float, tables: TableSettings) -> np.ndarray:
    """
    Graded grid on [u_lo, u_hi]: uniform steps for |u| <= switch, geometric beyond.

    Returns:
        Strictly increasing nodes including both endpoints
    """
    if u_hi <= u_lo:
        return np.array([u_lo])
    switch, step, growth = tables.switch, tables.step, tables.growth
    pieces = []
    lo, hi = max(u_lo, -switch), min(u_hi, switch)
    if lo < hi:
        pieces.append(np.linspace(lo, hi, int(np.ceil((hi - lo) / step)) + 1))
    start = max(u_lo, switch)
    if u_hi > start:
        count = int(np.ceil(np.log(u_hi / start) / np.log(growth)))
        pieces.append(np.geomspace(start, u_hi, max(count, 1) + 1))
    end = min(u_hi, -switch)
    if u_lo < end:
        count = int(np.ceil(np.log(u_lo / end) / np.log(growth)))
        pieces.append(-np.geomspace(-u_lo, -end, max(count, 1) + 1))
    return np.unique(np.concatenate(pieces))


def _log_expm1_ratio(d: np.ndarray) -> np.ndarray:
    """log((exp(d) - 1) / d), stable for all real d."""
    out = np.empty_like(d)
    small = np.abs(d) < 1e-6
    pos = ~small & (d > 0)
    neg = ~small & (d < 0)
    out[small] = 0.5 * d[small] + d[small] ** 2 / 24.0
    out[pos] = d[pos] + np.log(-np.expm1(-d[pos])) - np.log(d[pos])
    out[neg] = np.log(-np.expm1(d[neg])) - np.log(-d[neg])
    return out


def log_segment_integrals(u: np.ndarray, log_h: np.ndarray) -> np.ndarray:
    """
    log of the integral of exp(log_h) over each grid segment.

    log_h is interpolated linearly, which is exact for pure powers of s.
    Segments with a vanishing endpoint fall back to the trapezoid rule.
    """
    du = np.diff(u)
    left, right = log_h[:-1], log_h[1:]
    out = np.full(du.shape, -np.inf)
    with np.errstate(invalid='ignore', over='ignore'):
        finite = np.isfinite(left) & np.isfinite(right)
        out[finite] = left[finite] + np.log(du[finite]) + _log_expm1_ratio(right[finite] - left[finite])
        half = np.log(0.5 * du)
        one_sided = ~finite & (np.isfinite(left) | np.isfinite(right))
        out[one_sided] = half[one_sided] + np.where(
            np.isfinite(left[one_sided]), left[one_sided], right[one_sided]
        )
    infinite = (left == np.inf) | (right == np.inf)
    out[infinite] = np.inf
    return out


def log_cumulative(u: np.ndarray, log_h: np.ndarray) -> np.ndarray:
    """log of the running integral from u[0] to u[k]; the first entry is -inf."""
    pieces = log_segment_integrals(u, log_h)
    return np.logaddexp.accumulate(np.concatenate(([-np.inf], pieces)))


def log_reverse_cumulative(u: np.ndarray, log_h: np.ndarray) -> np.ndarray:
    """log of the integral from u[k] to u[-1]; the last entry is -inf."""
    pieces = log_segment_integrals(u, log_h)
    if not pieces.size:
        return np.array([-np.inf])
    return np.concatenate((np.logaddexp.accumulate(pieces[::-1])[::-1], [-np.inf]))


@dataclass(frozen=True)
class TailFit:
    """Fitted decay of log h along |u| together with the closed tail integral."""

    log_constant: float
    kappa: float
    delta: float
    convergent: bool
    log_tail: float


def fit_tail(log_h: LogIntegrand, distance: float, margin: float, direction: int = 1) -> TailFit:
    """
    Fit log h(u) = c - kappa*log v - delta*v with v = direction*u at v = D/4, D/2, D.

    Args:
        log_h: Vectorized log-integrand in u
        distance: D > 0, the distance of the truncation point from the origin
        margin: Convergence margin
        direction: +1 for the tail u -> inf, -1 for the head u -> -inf

    Returns:
        TailFit with log of the integral of exp(log_h) beyond the truncation point
    """
    v = np.array([distance / 4.0, distance / 2.0, distance])
    y = np.asarray(log_h(direction * v), dtype=float)
    if np.all(y == -np.inf):
        return TailFit(-np.inf, 0.0, np.inf, True, -np.inf)
    if np.any(y == np.inf) or np.any(np.isnan(y)) or np.isinf(y[-1]):
        return TailFit(np.inf, 0.0, -np.inf, False, np.inf)
    if np.any(np.isinf(y)):
        # vanishes at the inner points only: decays at least as fast as exp(-v)
        return TailFit(float(y[-1]), 0.0, np.inf, True, float(y[-1]))
    design = np.column_stack([np.ones(3), -np.log(v), -v])
    c, kappa, delta = np.linalg.solve(design, y)
    if delta > margin:
        rate = delta + kappa / distance
        log_tail = float(y[-1] - np.log(rate if rate > 0 else delta))
        return TailFit(float(c), float(kappa), float(delta), True, log_tail)
    if abs(delta) <= margin and kappa > 1.0 + margin:
        log_tail = float(y[-1] + np.log(distance) - np.log(kappa - 1.0))
        return TailFit(float(c), float(kappa), float(delta), True, log_tail)
    return TailFit(float(c), float(kappa), float(delta), False, np.inf)


@dataclass(frozen=True)
class ImproperIntegral:
    """log of an integral over an unbounded u-range and how it was closed."""

    log_value: float
    convergent: bool
    log_tail: float
    truncation: float

    @property
    def value(self) -> float:
        return float(np.exp(self.log_value))


def log_axis_integral(
    log_h: LogIntegrand,
    u_lo: float,
    numerics: Optional[NumericsConfig] = None
) -> ImproperIntegral:
    """
    Integral of exp(log_h(u)) over (u_lo, inf) with an analytic tail.

    The truncation point doubles from tails.start until the fitted tail is
    below tails.rel_tol of the body or tails.limit is reached; past the limit
    the fit alone decides convergence.

    Returns:
        ImproperIntegral; log_value is inf for a divergent tail
    """
    numerics = resolve(numerics)
    tails = numerics.tails
    upper = max(tails.start, 4.0 * max(u_lo, 0.0) + tails.start)
    while True:
        upper = min(upper, max(tails.limit, 4.0 * max(u_lo, 0.0) + tails.start))
        grid = log_axis_grid(u_lo, upper, numerics.tables)
        body = float(log_cumulative(grid, np.asarray(log_h(grid), dtype=float))[-1])
        fit = fit_tail(log_h, upper, tails.convergence_margin)
        at_limit = upper >= tails.limit
        if fit.convergent and (fit.log_tail - body < np.log(tails.rel_tol) or at_limit):
            return ImproperIntegral(float(np.logaddexp(body, fit.log_tail)), True, fit.log_tail, upper)
        if at_limit:
            logger.debug(f"Tail fit at u={upper}: delta={fit.delta:.4g}, kappa={fit.kappa:.4g}; divergent")
            return ImproperIntegral(np.inf, False, np.inf, upper)
        upper *= 2.0


def log_head_integral(
    log_h: LogIntegrand,
    u_hi: float,
    numerics: Optional[NumericsConfig] = None
) -> ImproperIntegral:
    """Integral of exp(log_h(u)) over (-inf, u_hi), by reflection."""
    return log_axis_integral(lambda v: log_h(-np.asarray(v)), -u_hi, numerics)


def head_estimate(log_h: LogIntegrand, u_lo: float, margin: float) -> float:
    """log of the integral of exp(log_h) over (-inf, u_lo) for u_lo < 0, from the head fit."""
    return fit_tail(log_h, -u_lo, margin, direction=-1).log_tail


class LogAxisTable:
    """
    Running integral of exp(log_h) on a graded log axis, head included.

    Attributes:
        u: Grid nodes
        log_h: Log-integrand at the nodes
        log_head: log of the integral over (-inf, u[0])
        log_values: log of the integral over (-inf, u[k])
    """

    def __init__(self, log_h: LogIntegrand, u_lo: float, u_hi: float,
                 numerics: Optional[NumericsConfig] = None, include_head: bool = True):
        numerics = resolve(numerics)
        self.u = log_axis_grid(u_lo, u_hi, numerics.tables)
        self.log_h = np.asarray(log_h(self.u), dtype=float)
        self.log_head = (head_estimate(log_h, u_lo, numerics.tails.convergence_margin)
                         if include_head and u_lo < 0 else -np.inf)
        self.log_values = np.logaddexp(self.log_head, log_cumulative(self.u, self.log_h))

    def log_at(self, u: np.ndarray) -> np.ndarray:
        """Interpolated log running integral; clamped to the table range."""
        return np.interp(np.asarray(u, dtype=float), self.u, self.log_values)

    @property
    def log_total(self) -> float:
        return float(self.log_values[-1])
