"""
Young-function calculus: conjugates, the Sobolev conjugate A_n, the
Orlicz-Lorentz density hat-A and the continuity kernels xi, eta, sigma.

All improper integrals run along u = log s on graded grids
(src.numerics.quadrature); near-zero and near-infinity behaviour is closed
by head/tail fits.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Tuple

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.numerics.inversion import invert_table
from src.numerics.quadrature import (
    LogAxisTable,
    fit_tail,
    log_axis_integral,
    log_axis_grid,
    log_cumulative,
    log_reverse_cumulative,
)
from src.utils.exceptions import PreconditionError, ValidationError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_dimension, validate_positive_number
from src.young.young_function import (
    ConjugateYoung,
    LinfYoung,
    RegularizedYoung,
    TableYoung,
    YoungFunction,
)

logger = get_logger(__name__)


def conjugate(A: YoungFunction) -> YoungFunction:
    """
    Young conjugate with density a^{-1}.

    Tables conjugate exactly to tables; conjugating a conjugate returns the base.
    """
    if isinstance(A, TableYoung):
        return A.conjugate()
    if isinstance(A, ConjugateYoung):
        return A.base
    return ConjugateYoung(A)


def _dual_exponent(n: int) -> float:
    return n / (n - 1.0)


def _require_nonzero(A: YoungFunction) -> None:
    top = A.numerics.bisection.log_bracket
    if np.isneginf(A.log_value(np.array([top]))[0]):
        raise ValidationError(f"Invalid Young function {A.describe()}: identically zero")


def _sobolev_log_integrand(A: YoungFunction, n: int):
    """u -> log of s (s/A(s))^{1/(n-1)} at s = e^u."""
    def log_h(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(invalid='ignore'):
            return u + (u - A.log_value(u)) / (n - 1.0)
    return log_h


def near_zero_integrable(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None) -> bool:
    """Numerical test of the integrability of (t/A(t))^{1/(n-1)} at 0."""
    tails = resolve(numerics).tails
    fit = fit_tail(_sobolev_log_integrand(A, n), -tails.head, tails.convergence_margin, direction=-1)
    return fit.convergent


def collapses(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None) -> bool:
    """True when the integral of (t/A(t))^{1/(n-1)} converges at infinity (the L^inf regime)."""
    if not A.is_finite_valued():
        return True
    return log_axis_integral(_sobolev_log_integrand(A, n), 0.0, numerics).convergent


def regularize_near_zero(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None,
                         ledger: Optional[ChoiceLedger] = None,
                         source: str = 'sobolev_conjugate') -> YoungFunction:
    """
    Replace the density on (0, cutoff) by the constant a(cutoff) when the
    Sobolev integrand is not integrable at 0; otherwise return A unchanged.
    """
    numerics = resolve(numerics)
    if near_zero_integrable(A, n, numerics):
        return A
    regularized = RegularizedYoung(A, 'floor', numerics.regularization.cutoff)
    if ledger is not None:
        ledger.record(
            'near-zero-floor',
            f"density of {A.describe()} replaced by the constant a({regularized.cutoff:g}) "
            f"on (0, {regularized.cutoff:g}); equivalent near infinity",
            source, level='warning', cutoff=regularized.cutoff,
        )
    return regularized


class SobolevConjugateYoung(YoungFunction):
    """
    A_n = A o H^{-1} with H(t) = (integral of (s/A(s))^{1/(n-1)} over (0, t))^{1/n'}.

    H is tabulated on a graded log grid; in the collapse regime A_n is +inf
    from the finite limit of H on.
    """

    kind = 'sobolev-conjugate'

    def __init__(self, base: YoungFunction, n: int, table: LogAxisTable,
                 log_h_limit: float, collapse: bool, numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics)
        self.base = base
        self.n = n
        self.collapse = collapse
        self._u = table.u
        self._log_integral = table.log_values
        self._log_H = table.log_values / _dual_exponent(n)
        self.log_h_limit = float(log_h_limit)

    @property
    def h_limit(self) -> float:
        return float(np.exp(self.log_h_limit))

    def _inverse_H(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        u = invert_table(self._u, self._log_H, v)
        beyond = v > self._log_H[-1]
        # only the fitted tail of H lies between the table end and the limit
        u = np.where(beyond & (v < self.log_h_limit), self._u[-1], u)
        return u

    def log_value(self, v):
        v = np.asarray(v, dtype=float)
        u = self._inverse_H(v)
        with np.errstate(invalid='ignore'):
            out = np.where(np.isfinite(u), self.base.log_value(np.where(np.isfinite(u), u, 0.0)), u)
        return np.where(v >= self.log_h_limit, np.inf, out)

    def log_density(self, v):
        v = np.asarray(v, dtype=float)
        u = self._inverse_H(v)
        finite = np.isfinite(u)
        safe = np.where(finite, u, 0.0)
        log_integral = np.interp(safe, self._u, self._log_integral)
        n_dual = _dual_exponent(self.n)
        with np.errstate(invalid='ignore'):
            log_h_prime = (-np.log(n_dual) + (1.0 / n_dual - 1.0) * log_integral
                           + (safe - self.base.log_value(safe)) / (self.n - 1.0))
            out = self.base.log_density(safe) - log_h_prime
        out = np.where(finite, out, u)
        return np.where(v >= self.log_h_limit, np.inf, out)

    def to_dict(self):
        return {'kind': self.kind, 'n': self.n, 'of': self.base.to_dict(), 'collapse': self.collapse}

    def describe(self):
        return f"({self.base.describe()})_{self.n}"


@dataclass(frozen=True)
class SobolevConjugate:
    """A_n together with the collapse verdict and the choices that fired."""

    young: YoungFunction
    collapse: bool
    h_limit: float
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    def __iter__(self) -> Iterator:
        return iter((self.young, self.collapse))


def sobolev_conjugate(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None) -> SobolevConjugate:
    """
    Optimal Orlicz target growth A_n and the L^inf collapse verdict.

    Args:
        A: Young function
        n: Dimension (>= 2)
        numerics: Settings

    Returns:
        SobolevConjugate; unpacks as (A_n, collapse)

    Raises:
        ValidationError: If A vanishes identically
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    if not A.is_finite_valued():
        ledger.record('linf-collapse', f"{A.describe()} jumps to infinity; A_n is the L^inf indicator",
                      'sobolev_conjugate')
        return SobolevConjugate(LinfYoung(numerics), True, 0.0, tuple(ledger.entries))
    _require_nonzero(A)
    base = regularize_near_zero(A, n, numerics, ledger)
    log_h = _sobolev_log_integrand(base, n)
    tails = numerics.tails

    tail = log_axis_integral(log_h, 0.0, numerics)
    collapse = tail.convergent
    if collapse:
        table = LogAxisTable(log_h, tails.head, tails.limit, numerics)
        head = float(table.log_at(0.0))
        log_total = float(np.logaddexp(head, tail.log_value))
        log_h_limit = log_total / _dual_exponent(n)
        logger.debug(f"A_n of {A.describe()} collapses; H limit {np.exp(log_h_limit):.6g}")
    else:
        upper = tails.limit
        target = np.log(1e15) * _dual_exponent(n)
        table = LogAxisTable(log_h, tails.head, upper, numerics)
        while table.log_total < target and upper < 1e300:
            upper = min(upper * 1e4, 1e300)
            table = LogAxisTable(log_h, tails.head, upper, numerics)
        if table.log_total < target:
            ledger.record('beyond-float-range',
                          f"H reaches only {np.exp(table.log_total / _dual_exponent(n)):.6g} "
                          f"for log t <= {upper:g}; A_n is +inf beyond", 'sobolev_conjugate')
        log_h_limit = np.inf
    young = SobolevConjugateYoung(base, n, table, log_h_limit, collapse, numerics)
    young.regularizations = tuple(ledger.entries)
    return SobolevConjugate(young, collapse, float(np.exp(log_h_limit)), tuple(ledger.entries))


def hat_A(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None) -> TableYoung:
    """
    Density hat-a of the optimal Orlicz-Lorentz target, assembled as a step table.

    hat-a^{-1}(t) = K(a^{-1}(t))^{1/(1-n)} with
    K(s) = integral over (s, inf) of G(r)^{-n} a(r)^{-n/(n-1)} dr and
    G(s) = integral over (0, s) of a^{-1/(n-1)}.

    Raises:
        PreconditionError: In the collapse regime, where the optimal target is L^B(nu)
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    if collapses(A, n, numerics):
        raise PreconditionError(
            f"hat-A is undefined for {A.describe()} in dimension {n}: A_n collapses to L^inf; "
            f"use the L^B(nu) target instead"
        )
    _require_nonzero(A)
    base = regularize_near_zero(A, n, numerics, ledger, source='hat_A')
    tails, tables = numerics.tails, numerics.tables

    def log_g_integrand(u):
        return np.asarray(u, dtype=float) - base.log_density(u) / (n - 1.0)

    head_fit = fit_tail(log_g_integrand, -tails.head, tails.convergence_margin, direction=-1)
    if not head_fit.convergent:
        base = RegularizedYoung(base, 'floor', numerics.regularization.cutoff)
        ledger.record('near-zero-floor', f"density floor at {base.cutoff:g} for the hat-A integrals",
                      'hat_A', level='warning', cutoff=base.cutoff)

    g_table = LogAxisTable(log_g_integrand, tails.head, tails.limit, numerics)

    def log_j(u):
        u = np.asarray(u, dtype=float)
        return -n * g_table.log_at(u) - n * base.log_density(u) / (n - 1.0) + u

    grid = g_table.u
    log_j_grid = log_j(grid)
    tail = fit_tail(log_j, tails.limit, tails.convergence_margin)
    log_k = np.logaddexp(log_reverse_cumulative(grid, log_j_grid), tail.log_tail)

    lo, hi = tables.hat_range
    count = int(round((hi - lo) * tables.hat_points_per_decade)) + 1
    log_t = np.log(10.0) * np.linspace(lo, hi, count)
    u_star = base.log_density_inverse(log_t)
    inside = np.isfinite(u_star)
    log_k_star = np.full(log_t.shape, np.inf)
    log_k_star[inside] = np.interp(u_star[inside], grid, log_k)
    log_k_star[np.isposinf(u_star)] = -np.inf
    log_y = np.maximum.accumulate(log_k_star / (1.0 - n))

    keep = np.isfinite(log_y) & (log_y < 700.0)
    y = np.exp(log_y[keep])
    t = np.exp(log_t[keep])
    if not y.size:
        raise PreconditionError(f"hat-A of {A.describe()} has no finite values on the tabulation range")
    y, first = np.unique(y, return_index=True)
    hat = TableYoung(y, t[first], tail=float(t[first][-1]), numerics=numerics)
    for lo_t, hi_t in A.flat_stretches(numerics.regularization.flat_decades):
        ledger.record('flat-stretch', f"density flat on ({lo_t:g}, {hi_t:g}); generalized inverse used",
                      'hat_A', level='warning', start=lo_t, end=hi_t)
    hat.regularizations = tuple(ledger.entries)
    logger.debug(f"hat-A of {A.describe()}: {y.size} steps over ({y[0]:.3g}, {y[-1]:.3g})")
    return hat


@dataclass(frozen=True, eq=False)
class ContinuityKernels:
    """xi_A and eta_A tabulated on a graded log grid."""

    n: int
    u: np.ndarray
    log_xi: np.ndarray
    log_eta: np.ndarray
    xi_finite: bool
    conjugate: YoungFunction
    regularizations: Tuple[LedgerEntry, ...] = ()

    def xi(self, t: np.ndarray) -> np.ndarray:
        if not self.xi_finite:
            return np.full(np.shape(t), np.inf)
        return np.exp(np.interp(np.log(t), self.u, self.log_xi))

    def eta(self, t: np.ndarray) -> np.ndarray:
        return np.exp(np.interp(np.log(t), self.u, self.log_eta))

    def xi_inverse_log(self, log_y: np.ndarray) -> np.ndarray:
        return invert_table(self.u, self.log_xi, log_y)

    def eta_inverse_log(self, log_y: np.ndarray) -> np.ndarray:
        return invert_table(self.u, self.log_eta, log_y)


@lru_cache(maxsize=32)
def continuity_kernels(A: YoungFunction, n: int, numerics: Optional[NumericsConfig] = None) -> ContinuityKernels:
    """
    Tabulate xi(t) = t^{n'} int_t^inf conj(tau) tau^{-1-n'} and eta(t) = t int_0^t conj(tau) tau^{-2}.

    The conjugate receives a density ramp near 0 when the eta integral would
    diverge there (conj(0+) derivative positive).
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    tails = numerics.tails
    ledger = ChoiceLedger()
    n_dual = _dual_exponent(n)
    conj = conjugate(A)

    def log_eta_integrand(young):
        return lambda u: young.log_value(u) - np.asarray(u, dtype=float)

    head = fit_tail(log_eta_integrand(conj), -tails.head, tails.convergence_margin, direction=-1)
    if not head.convergent:
        conj = RegularizedYoung(conj, 'ramp', numerics.regularization.cutoff)
        ledger.record(
            'eta-near-zero-ramp',
            f"conjugate density of {A.describe()} replaced by a linear ramp on (0, {conj.cutoff:g})",
            'xi_eta', level='warning', cutoff=conj.cutoff,
        )

    u = log_axis_grid(tails.head, tails.limit, numerics.tables)
    log_conj = np.asarray(conj.log_value(u), dtype=float)

    def log_xi_integrand(v):
        return conj.log_value(v) - n_dual * np.asarray(v, dtype=float)

    xi_tail = fit_tail(log_xi_integrand, tails.limit, tails.convergence_margin)
    if xi_tail.convergent:
        log_xi = n_dual * u + np.logaddexp(log_reverse_cumulative(u, log_conj - n_dual * u), xi_tail.log_tail)
        log_xi = np.maximum.accumulate(log_xi)
    else:
        log_xi = np.full(u.shape, np.inf)
        ledger.record('xi-divergent', f"xi is infinite for {A.describe()} in dimension {n}", 'xi_eta',
                      level='warning')

    eta_integrand = log_eta_integrand(conj)
    eta_head = fit_tail(eta_integrand, -tails.head, tails.convergence_margin, direction=-1).log_tail
    log_eta = u + np.logaddexp(log_cumulative(u, log_conj - u), eta_head)
    log_eta = np.maximum.accumulate(log_eta)

    return ContinuityKernels(n, u, log_xi, log_eta, bool(xi_tail.convergent), conj, tuple(ledger.entries))


def xi_eta(A: YoungFunction, n: int, t: float, numerics: Optional[NumericsConfig] = None) -> Tuple[float, float]:
    """(xi_A(t), eta_A(t)); xi is +inf when the tail condition fails."""
    validate_positive_number(t, "t", strict=True)
    kernels = continuity_kernels(A, n, numerics)
    return float(kernels.xi(np.array([t]))[0]), float(kernels.eta(np.array([t]))[0])


def sigma_A(A: YoungFunction, n: int, r, numerics: Optional[NumericsConfig] = None):
    """
    sigma_A(r) = r^{1-n} / xi^{-1}(r^{-n}) + r^{1-n} / eta^{-1}(r^{-n}).

    Args:
        A: Young function satisfying the tail condition
        n: Dimension
        r: Radius or array of radii in (0, 1]

    Raises:
        PreconditionError: If xi is infinite
    """
    kernels = continuity_kernels(A, n, numerics)
    if not kernels.xi_finite:
        raise PreconditionError(
            f"sigma_A is undefined for {A.describe()} in dimension {n}: the tail integral diverges"
        )
    r_array = np.asarray(r, dtype=float)
    if np.any(r_array <= 0):
        raise ValidationError(f"Invalid r: {r}. Must be > 0")
    log_r = np.log(r_array)
    log_y = -n * log_r
    u_xi = kernels.xi_inverse_log(log_y)
    u_eta = kernels.eta_inverse_log(log_y)
    with np.errstate(over='ignore'):
        value = np.exp((1 - n) * log_r - u_xi) + np.exp((1 - n) * log_r - u_eta)
    return float(value) if np.ndim(r) == 0 else value


def second_differences(A: YoungFunction, t: np.ndarray) -> np.ndarray:
    """Normalized second differences of A on a geometric grid; nonnegative for convex A."""
    t = np.asarray(t, dtype=float)
    values = A.value(t)
    left = (values[1:-1] - values[:-2]) / (t[1:-1] - t[:-2])
    right = (values[2:] - values[1:-1]) / (t[2:] - t[1:-1])
    scale = np.maximum(np.abs(right), 1e-300)
    return (right - left) / scale
