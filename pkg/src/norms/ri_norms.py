"""
Evaluation of rearrangement-invariant norms on decreasing step profiles.

Lebesgue and Lorentz norms are closed-form on steps; Lorentz-Zygmund type
weights are integrated per step with adaptive quadrature; Orlicz-type norms
are Luxemburg norms found by bisection on log(lambda), with the modular exact
on steps for the plain Orlicz family and Gauss-Legendre on the log axis when a
weight multiplies f*.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.norms.norm_spec import NormFamily, NormSpec, WeightTable
from src.numerics.quadrature import fit_tail, integrate_quad
from src.rearrangement.profiles import (
    DecreasingProfile,
    geometric_edges,
    product_integral,
    profile_from_antiderivative,
    random_profile,
)
from src.utils.exceptions import DomainError, UnsupportedSpaceError, ValidationError
from src.utils.ledger import ChoiceLedger
from src.utils.logger import get_logger
from src.utils.validators import validate_measure, validate_positive_number
from src.young.calculus import conjugate
from src.young.young_function import YoungFunction

logger = get_logger(__name__)

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)
# log-axis pieces per Gauss-Legendre panel: half a decade
_PANEL = 0.5 * np.log(10.0)
# doublings allowed while bracketing the Luxemburg level
_MAX_DOUBLINGS = 1100


def _log_sum(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    if not values.size:
        return -np.inf
    return float(np.logaddexp.reduce(values))


def _prepare(spec: NormSpec, f: DecreasingProfile) -> DecreasingProfile:
    """Cut extended norms, check the interval, drop trailing zeros."""
    if spec.cut is not None and f.L > spec.cut:
        f = f.restricted(spec.cut)
    length = spec.cut if spec.cut is not None else spec.L
    if f.L > length * (1.0 + 1e-12):
        if f.support <= length:
            f = f.restricted(length)
        else:
            raise ValidationError(f"Invalid profile: support {f.support:g} exceeds L={length:g} of {spec.describe()}")
    return f.trimmed()


def _length(spec: NormSpec) -> float:
    return spec.cut if spec.cut is not None else spec.L


# -- power-weighted Lebesgue and Lorentz norms ---------------------------------


def _power_weighted_lq(f: DecreasingProfile, e: float, q: float) -> float:
    """|| s^e f*(s) ||_{L^q} for step profiles, exact."""
    if f.is_zero():
        return 0.0
    if np.isinf(q):
        lefts, rights = f.left_endpoints, f.breakpoints
        positive = f.values > 0
        if e > 0:
            return float(np.max(f.values[positive] * rights[positive] ** e))
        if e == 0:
            return f.sup
        if lefts[0] == 0 and f.values[0] > 0:
            return float('inf')
        with np.errstate(divide='ignore'):
            return float(np.max(f.values[positive] * lefts[positive] ** e))
    powered = DecreasingProfile(f.breakpoints, f.values ** q)
    return float(powered.kernel_integral(-q * e) ** (1.0 / q))


def _lebesgue(spec: NormSpec, f: DecreasingProfile, gamma: float) -> float:
    p = spec.p
    return _power_weighted_lq(f, -gamma, p)


def _lorentz(spec: NormSpec, f: DecreasingProfile, gamma: float) -> float:
    p, q = spec.p, spec.q
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    return _power_weighted_lq(f, inv_p - inv_q - gamma, q)


# -- logarithmic weights ---------------------------------------------------------------


def _ell(spec: NormSpec, s: np.ndarray) -> np.ndarray:
    """log(eL/s); inf at s = 0."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide='ignore'):
        return 1.0 + np.log(_length(spec)) - np.log(s)


def _step_sum(f: DecreasingProfile, q: float, step_integral: Callable[[float, float], float]) -> float:
    total = 0.0
    for i in np.nonzero(f.values > 0)[0]:
        total += f.values[i] ** q * step_integral(float(f.left_endpoints[i]), float(f.breakpoints[i]))
    return float(total ** (1.0 / q))


def _lorentz_zygmund(spec: NormSpec, f: DecreasingProfile, gamma: float, numerics: NumericsConfig) -> float:
    """
    || s^{1/p - 1/q - gamma} log^alpha(eL/s) f*(s) ||_{L^q}.

    Steps are integrated in x = log s; for a vanishing power the weight is a
    pure power of log(eL/s) and the step integrals are closed-form.
    """
    if f.is_zero():
        return 0.0
    q, alpha = spec.q, spec.alpha
    exponent = (0.0 if np.isinf(spec.p) else 1.0 / spec.p) - gamma
    if np.isinf(q):
        return _lorentz_zygmund_sup(spec, f, exponent)
    if exponent < 0 or (exponent == 0 and q * alpha >= -1.0):
        return float('inf')
    beta = q * alpha
    log_l = np.log(_length(spec))

    def step_integral(a: float, b: float) -> float:
        if exponent == 0:
            ell_a, ell_b = _ell(spec, a), _ell(spec, b)
            head = 0.0 if np.isinf(ell_a) else ell_a ** (beta + 1.0)
            return float((ell_b ** (beta + 1.0) - head) / -(beta + 1.0))
        x_a = np.log(a) if a > 0 else -np.inf
        return integrate_quad(lambda x: float(np.exp(q * exponent * x) * (1.0 + log_l - x) ** beta),
                              x_a, float(np.log(b)), numerics, label="Lorentz-Zygmund step")

    return _step_sum(f, q, step_integral)


def _lorentz_zygmund_sup(spec: NormSpec, f: DecreasingProfile, exponent: float) -> float:
    """sup of s^e log^alpha(eL/s) f*(s): step endpoints and the stationary point s = eL exp(-alpha/e)."""
    alpha = spec.alpha
    if exponent < 0 or (exponent == 0 and alpha > 0):
        return float('inf')
    log_l = np.log(_length(spec))

    def log_weight(x: float) -> float:
        if np.isinf(x):
            return 0.0 if (exponent == 0 and alpha == 0) else -np.inf
        return exponent * x + alpha * np.log(1.0 + log_l - x)

    stationary = 1.0 + log_l - alpha / exponent if exponent > 0 else None
    best = 0.0
    for i in np.nonzero(f.values > 0)[0]:
        x_lo = np.log(f.left_endpoints[i]) if f.left_endpoints[i] > 0 else -np.inf
        x_hi = float(np.log(f.breakpoints[i]))
        candidates = [x_lo, x_hi]
        if stationary is not None and x_lo < stationary < x_hi:
            candidates.append(stationary)
        best = max(best, float(f.values[i] * np.exp(max(log_weight(x) for x in candidates))))
    return best


def _glz(spec: NormSpec, f: DecreasingProfile, gamma: float, numerics: NumericsConfig) -> float:
    """
    || s^{-1/p - gamma} ell^{-1/p} (log(1 + ell))^{-1} f*(s) ||_{L^p}, ell = log(eL/s).

    With t = log(1 + ell)^{1-p} each step integral becomes a bounded integrand
    on a finite t-interval.
    """
    if f.is_zero():
        return 0.0
    p = spec.p
    if gamma > 0 and f.values[0] > 0:
        return float('inf')
    log_l = np.log(_length(spec))

    def integrand(t: float) -> float:
        y = t ** (1.0 / (1.0 - p))
        value = -1.0 / np.expm1(-y) / (p - 1.0)
        if gamma > 0:
            value *= np.exp(-p * gamma * (1.0 + log_l - np.expm1(y)))
        return float(value)

    def step_integral(a: float, b: float) -> float:
        with np.errstate(divide='ignore'):
            t_a = float(np.log1p(_ell(spec, a)) ** (1.0 - p))
            t_b = float(np.log1p(_ell(spec, b)) ** (1.0 - p))
        return integrate_quad(integrand, t_a, t_b, numerics, label="GLZ step")

    return _step_sum(f, p, step_integral)


# -- Luxemburg norms ----------------------------------------------------------------------


class _WeightedModular:
    """
    Integral of A(nu(s) f*(s) / lambda) over the steps of f, on log-axis Gauss-Legendre panels.

    The step touching the origin is integrated down to x = -D and closed by a
    head fit.
    """

    def __init__(self, f: DecreasingProfile, log_nu: Callable[[np.ndarray], np.ndarray],
                 numerics: NumericsConfig, breaks: Optional[np.ndarray] = None):
        self.numerics = numerics
        self.log_nu = log_nu
        tails = numerics.tails
        nodes, log_weights, log_args = [], [], []
        self.head = None
        lefts, rights = f.left_endpoints, f.breakpoints
        for i in np.nonzero(f.values > 0)[0]:
            x_hi = np.log(rights[i])
            if lefts[i] > 0:
                x_lo = np.log(lefts[i])
            else:
                distance = max(-tails.head, 40.0 - x_hi)
                x_lo = -distance
                self.head = (float(np.log(f.values[i])), distance)
            cuts = np.log(breaks[(breaks > np.exp(x_lo)) & (breaks < rights[i])]) if breaks is not None else []
            edges = [x_lo, *cuts, x_hi]
            for lo, hi in zip(edges[:-1], edges[1:]):
                panels = max(int(np.ceil((hi - lo) / _PANEL)), 1)
                panel_edges = np.linspace(lo, hi, panels + 1)
                half = 0.5 * np.diff(panel_edges)
                mid = 0.5 * (panel_edges[:-1] + panel_edges[1:])
                x = (mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]).ravel()
                w = (half[:, None] * _GAUSS_WEIGHTS[None, :]).ravel()
                nodes.append(x)
                log_weights.append(np.log(w) + x)
                log_args.append(np.log(f.values[i]) + log_nu(x))
        self.x = np.concatenate(nodes) if nodes else np.zeros(0)
        self.log_weights = np.concatenate(log_weights) if log_weights else np.zeros(0)
        self.log_args = np.concatenate(log_args) if log_args else np.zeros(0)

    def __call__(self, young: YoungFunction, log_lambda: float) -> float:
        with np.errstate(invalid='ignore'):
            body = _log_sum(self.log_weights + young.log_value(self.log_args - log_lambda))
        if self.head is None or np.isinf(body):
            return body
        log_v, distance = self.head

        def log_h(x):
            x = np.asarray(x, dtype=float)
            return x + young.log_value(log_v + self.log_nu(x) - log_lambda)

        fit = fit_tail(log_h, distance, self.numerics.tails.convergence_margin, direction=-1)
        return float(np.logaddexp(body, fit.log_tail))


def _exact_modular(f: DecreasingProfile) -> Callable[[YoungFunction, float], float]:
    positive = f.values > 0
    log_widths = np.log(f.widths[positive])
    log_values = np.log(f.values[positive])

    def log_modular(young: YoungFunction, log_lambda: float) -> float:
        with np.errstate(invalid='ignore'):
            return _log_sum(log_widths + young.log_value(log_values - log_lambda))
    return log_modular


def luxemburg(young: YoungFunction, log_modular: Callable[[YoungFunction, float], float],
              scale: float, numerics: NumericsConfig) -> float:
    """
    inf{lambda: modular(lambda) <= 1} by bisection on log(lambda).

    Args:
        young: Young function of the modular
        log_modular: (young, log lambda) -> log of the modular, nonincreasing in lambda
        scale: Starting guess for lambda
        numerics: Settings (bisection iterations, relative tolerance)

    Returns:
        The Luxemburg norm; inf when the modular exceeds 1 for every lambda
    """
    bisection = numerics.bisection
    step = np.log(2.0)
    hi = np.log(scale)
    if log_modular(young, hi) > 0:
        for _ in range(_MAX_DOUBLINGS):
            hi += step
            if log_modular(young, hi) <= 0:
                break
        else:
            return float('inf')
        lo = hi - step
    else:
        lo = hi
        for _ in range(_MAX_DOUBLINGS):
            lo -= step
            if log_modular(young, lo) > 0:
                break
        else:
            return 0.0
    tolerance = np.log1p(bisection.luxemburg_rel_tol)
    for _ in range(bisection.iterations):
        if hi - lo < tolerance:
            break
        mid = 0.5 * (lo + hi)
        if log_modular(young, mid) > 0:
            lo = mid
        else:
            hi = mid
    return float(np.exp(hi))


def _orlicz_type(spec: NormSpec, f: DecreasingProfile, gamma: float, numerics: NumericsConfig) -> float:
    if f.is_zero():
        return 0.0
    young = spec.young
    if spec.family == NormFamily.ORLICZ:
        log_nu = None if gamma == 0 else (lambda x: -gamma * np.asarray(x, dtype=float))
        breaks = None
    elif spec.family == NormFamily.ORLICZ_LORENTZ:
        exponent = 1.0 / spec.q + gamma
        log_nu = lambda x: -exponent * np.asarray(x, dtype=float)
        breaks = None
    else:
        weight: WeightTable = spec.weight
        log_nu = (weight.log_at if gamma == 0
                  else (lambda x: weight.log_at(x) - gamma * np.asarray(x, dtype=float)))
        breaks = weight.breaks()
    if log_nu is None:
        log_modular = _exact_modular(f)
    else:
        log_modular = _WeightedModular(f, log_nu, numerics, breaks)
    scale = max(f.sup, 1e-300)
    value = luxemburg(young, log_modular, scale, numerics)
    logger.debug(f"Luxemburg norm in {spec.describe()}: {value:.12g}")
    return value


def weighted_norm(spec: NormSpec, f: DecreasingProfile, gamma: float = 0.0,
                  numerics: Optional[NumericsConfig] = None) -> float:
    """
    || s^{-gamma} f*(s) ||_X for gamma >= 0 (the function stays nonincreasing).

    Args:
        spec: Norm X
        f: Decreasing profile
        gamma: Power of the extra weight
        numerics: Settings

    Returns:
        The norm, possibly inf
    """
    validate_positive_number(gamma, "gamma")
    numerics = resolve(numerics)
    f = _prepare(spec, f)
    family = spec.family
    if family == NormFamily.LEBESGUE:
        return _lebesgue(spec, f, gamma)
    if family == NormFamily.LORENTZ:
        return _lorentz(spec, f, gamma)
    if family == NormFamily.LORENTZ_ZYGMUND:
        return _lorentz_zygmund(spec, f, gamma, numerics)
    if family == NormFamily.GLZ:
        return _glz(spec, f, gamma, numerics)
    return _orlicz_type(spec, f, gamma, numerics)


def norm(spec: NormSpec, f: DecreasingProfile, numerics: Optional[NumericsConfig] = None) -> float:
    """
    ||f||_X for a decreasing step profile.

    Raises:
        ValidationError: If f is longer than the interval of X
    """
    return weighted_norm(spec, f, 0.0, numerics)


def tabulated_norm(spec: NormSpec, antiderivative: Callable[[np.ndarray], np.ndarray], hi: float,
                   extra: Optional[np.ndarray] = None, numerics: Optional[NumericsConfig] = None,
                   ledger: Optional[ChoiceLedger] = None, source: str = 'tabulated_norm') -> float:
    """
    Norm of a nonnegative function on (0, hi) given by its antiderivative.

    The function is replaced by its rearranged cell averages on a geometric grid
    from s_min_ratio * hi, which approach the norm from below; the grid density
    doubles until two values agree to refinement_rel_tol.

    Args:
        spec: Norm
        antiderivative: F with F(0) = 0, vectorized
        hi: Right end of the support
        extra: Breakpoints to add to every grid
        numerics: Settings
        ledger: Receives a 'refinement-cap' entry when the doublings run out
        source: Operation name for the ledger

    Returns:
        The finest value, possibly inf
    """
    numerics = resolve(numerics)
    tabulation = numerics.tabulation
    lo = tabulation.s_min_ratio * hi
    points = tabulation.points_per_decade
    previous = None
    value = float('nan')
    for _ in range(tabulation.refinements + 1):
        edges = geometric_edges(lo, hi, points, extra)
        value = norm(spec, profile_from_antiderivative(antiderivative, edges), numerics)
        if not np.isfinite(value):
            return value
        if previous is not None and abs(value - previous) <= tabulation.refinement_rel_tol * abs(value):
            return value
        previous = value
        points *= 2
    if ledger is not None:
        ledger.record('refinement-cap',
                      f"tabulated norm in {spec.describe()} still moving after {tabulation.refinements} "
                      f"doublings; reporting the finest value", source, level='warning',
                      points_per_decade=points // 2)
    return value


def modular(young: YoungFunction, f: DecreasingProfile) -> float:
    """Integral of A(f*) over (0, L), exact on steps."""
    if f.is_zero():
        return 0.0
    return float(np.exp(_exact_modular(f)(young, 0.0)))


def fundamental_function(spec: NormSpec, s: float, numerics: Optional[NumericsConfig] = None) -> float:
    """
    phi_X(s) = ||chi_(0,s)||_X.

    Raises:
        DomainError: If s <= 0 or s > L
    """
    validate_measure(s)
    length = _length(spec) if spec.cut is None else np.inf
    if s > length * (1.0 + 1e-12):
        raise DomainError(f"Invalid s: {s}. Must be <= L={length:g}")
    return norm(spec, DecreasingProfile.indicator(float(s)), numerics)


# -- associates ----------------------------------------------------------------------------


@dataclass(frozen=True)
class AssociateRule:
    """
    Associate norm of X as a known family within a bracket.

    lo * ||g||_spec <= ||g||_{X'} <= hi * ||g||_spec for every g.
    """

    spec: NormSpec
    lo: float
    hi: float
    exact: bool

    def bracket(self, value: float):
        return [self.lo * value, self.hi * value]


def dual_exponent(p: float) -> float:
    """Hoelder conjugate exponent p' in [1, inf]."""
    if p == 1.0:
        return float('inf')
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def associate_spec(spec: NormSpec) -> AssociateRule:
    """
    Known associate family of a norm.

    Lebesgue p <-> p' (exact); Lorentz (p,q) <-> (p',q') with Hoelder upper
    constant 1 and exact when q >= p; Lorentz-Zygmund (p,q,alpha) <->
    (p',q',-alpha) for 1 < p < inf; Orlicz A <-> conjugate within [1, 2].

    Raises:
        UnsupportedSpaceError: For families without a closed-form associate
    """
    family = spec.family
    L = _length(spec)
    if family == NormFamily.LEBESGUE:
        return AssociateRule(NormSpec.lebesgue(dual_exponent(spec.p), L), 1.0, 1.0, True)
    if family == NormFamily.LORENTZ:
        p, q = spec.p, spec.q
        if p == q:
            return AssociateRule(NormSpec.lebesgue(dual_exponent(p), L), 1.0, 1.0, True)
        dual = NormSpec.lorentz(dual_exponent(p), dual_exponent(q), L)
        if q >= p:
            return AssociateRule(dual, 1.0, 1.0, True)
        return AssociateRule(dual, 1.0 / p, 1.0, False)
    if family == NormFamily.LORENTZ_ZYGMUND and 1 < spec.p < np.inf:
        dual = NormSpec.lorentz_zygmund(dual_exponent(spec.p), dual_exponent(spec.q), -spec.alpha, L)
        return AssociateRule(dual, 1.0 / spec.p, 1.0, False)
    if family == NormFamily.ORLICZ:
        return AssociateRule(NormSpec.orlicz(conjugate(spec.young), L), 1.0, 2.0, False)
    raise UnsupportedSpaceError(f"Unknown associate family for {spec.describe()}")


def associate_pairing_lb(spec: NormSpec, f: DecreasingProfile, trials: int, seed: int,
                         numerics: Optional[NumericsConfig] = None) -> float:
    """
    Lower bound for ||f||_{X'}: the largest pairing of f with trial profiles g, ||g||_X = 1.

    The trials are deterministic candidates built from f (its powers and the
    indicators of its level sets) followed by `trials` random decreasing step
    profiles from a seeded generator.
    """
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ValidationError(f"Invalid trials: {trials}. Must be an integer >= 1")
    f = f.trimmed()
    if f.is_zero():
        return 0.0
    candidates = [DecreasingProfile(f.breakpoints, f.values ** r) for r in (0.5, 1.0, 2.0)]
    candidates += [DecreasingProfile.indicator(float(s)) for s in f.breakpoints]
    rng = np.random.default_rng(seed)
    candidates += [random_profile(rng, f.L) for _ in range(trials)]
    best = 0.0
    for g in candidates:
        size = norm(spec, g, numerics)
        if not np.isfinite(size) or size <= 0:
            continue
        best = max(best, product_integral(f, g) / size)
    logger.debug(f"Pairing lower bound over {len(candidates)} trials: {best:.12g}")
    return best
