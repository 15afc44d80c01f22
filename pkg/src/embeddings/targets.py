"""
Optimal rearrangement-invariant targets and moduli of continuity.

The target norm X_1 of E^1 X is handled through its associate,
||f||_{X_1'} = ||s^{1/n} f**(s)||_{X'}, with X' taken from the known associate
families. Tabulated functions are replaced by their cell averages on geometric
grids (64 points per decade, refined by doubling), which approach the norm from
below.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.norms.norm_spec import NormFamily, NormSpec
from src.norms.ri_norms import (
    AssociateRule,
    associate_spec,
    dual_exponent,
    norm,
    tabulated_norm,
    weighted_norm,
)
from src.numerics.quadrature import log_axis_integral
from src.rearrangement.profiles import (
    DecreasingProfile,
    geometric_edges,
    product_integral,
    profile_from_antiderivative,
)
from src.utils.exceptions import UnsupportedSpaceError, ValidationError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_choice, validate_dimension, validate_positive_number
from src.young.calculus import conjugate

logger = get_logger(__name__)

TARGET_MODES = ('X1', 'X1Rn')

# trial exponents of the truncated powers s^{-a} in the duality lower bound
_POWER_TRIALS = (0.25, 0.5)
_INDICATORS_PER_DECADE = 8
_INDICATOR_DECADES = 8


def _on_length(spec: NormSpec, L: float) -> NormSpec:
    """spec on (0, L); length-dependent families keep their own interval."""
    if spec.depends_on_length or spec.L == L:
        return spec
    return spec.with_length(L)


# -- the associate formula ----------------------------------------------------


def _x1_pieces(f: DecreasingProfile, L: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pieces (left, right, c, v) with integral of f* over (0, r) equal to c + v r on each piece."""
    breaks, values = f.breakpoints, f.values
    if L > f.L:
        breaks = np.append(breaks, L)
        values = np.append(values, 0.0)
    lefts = np.concatenate(([0.0], breaks[:-1]))
    partial = np.concatenate(([0.0], np.cumsum(values * np.diff(np.concatenate(([0.0], breaks))))))
    c = partial[:-1] - values * lefts
    return lefts, breaks, c, values


def _x1_antiderivative(f: DecreasingProfile, n: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    """Exact antiderivative of g(s) = s^{1/n} f**(s) on (0, L)."""
    lefts, rights, c, v = _x1_pieces(f, L)
    e = 1.0 / n

    def primitive(r, i):
        return c[i] * n * r ** e + v[i] * r ** (1.0 + e) / (1.0 + e)

    index = np.arange(rights.size)
    at_breaks = np.concatenate(([0.0], np.cumsum(primitive(rights, index) - primitive(lefts, index))))

    def antiderivative(s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, L)
        i = np.clip(np.searchsorted(rights, s, side='left'), 0, rights.size - 1)
        return at_breaks[i] + primitive(s, i) - primitive(lefts[i], i)
    return antiderivative


def _x1_sup(f: DecreasingProfile, n: int, L: float) -> float:
    """sup of s^{1/n} f**(s) over (0, L), at piece ends and the stationary points s = c(n-1)/v."""
    lefts, rights, c, v = _x1_pieces(f, L)
    e = 1.0 / n
    with np.errstate(divide='ignore', invalid='ignore'):
        stationary = c * (n - 1.0) / v
    inside = (v > 0) & (stationary > lefts) & (stationary < rights)
    best = float(np.max(rights ** (e - 1.0) * (c + v * rights)))
    if np.any(inside):
        r = stationary[inside]
        best = max(best, float(np.max(r ** (e - 1.0) * (c[inside] + v[inside] * r))))
    return best


def x1_associate_norm(Xprime: NormSpec, f: DecreasingProfile, n: int,
                      numerics: Optional[NumericsConfig] = None,
                      ledger: Optional[ChoiceLedger] = None) -> float:
    """
    ||s^{1/n} f**(s)||_{X'} on (0, L).

    L is the interval of X' when finite. On (0, inf) the function is tabulated
    over the support of f; beyond it equals ||f||_1 s^{-1/n'}, which is added in
    closed form for Lebesgue X'. Other families omit it, so their value is a
    lower bound and a 'x1-tail-omitted' entry is recorded.

    Args:
        Xprime: Associate norm X'
        f: Decreasing profile
        n: Dimension
        numerics: Settings
        ledger: Receives refinement-cap and tail entries

    Returns:
        The norm, possibly inf
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    f = f.trimmed()
    if f.is_zero():
        return 0.0
    unbounded = not np.isfinite(Xprime.L)
    L = f.L if unbounded else Xprime.L
    if f.L > L:
        raise ValidationError(f"Invalid profile: support {f.L:g} exceeds L={L:g} of {Xprime.describe()}")
    if Xprime.family == NormFamily.LEBESGUE and np.isinf(Xprime.p):
        # s^{-1/n'} ||f||_1 decreases past the support, so the sup is already attained on (0, L]
        return _x1_sup(f, n, L)
    head = tabulated_norm(Xprime, _x1_antiderivative(f, n, L), L, f.breakpoints, numerics, ledger,
                          'x1_associate_norm')
    if not unbounded or not np.isfinite(head):
        return head
    if Xprime.family == NormFamily.LEBESGUE and Xprime.cut is None:
        return _with_lebesgue_tail(head, Xprime.p, f.integral, f.L, n)
    message = (f"tail of s^(1/n) f** beyond s = {f.L:g} omitted in {Xprime.describe()}; "
               f"the value is a lower bound")
    if ledger is not None:
        ledger.record('x1-tail-omitted', message, 'x1_associate_norm', level='warning', support=f.L)
    else:
        logger.warning(message)
    return head


def _with_lebesgue_tail(head: float, p: float, mass: float, start: float, n: int) -> float:
    """Combine the L^p norm on (0, start) with that of mass * s^{-1/n'} on (start, inf)."""
    exponent = p / dual_exponent(n)
    if exponent <= 1.0:
        return float('inf')
    tail = mass ** p * start ** (1.0 - exponent) / (exponent - 1.0)
    return float((head ** p + tail) ** (1.0 / p))


def linf_embedding_check(X: NormSpec, n: int, L: float, numerics: Optional[NumericsConfig] = None) -> bool:
    """
    Whether ||r^{-1/n'}||_{X'(0,L)} is finite, i.e. E^1 X embeds into L^inf.

    Raises:
        UnsupportedSpaceError: If X has no known associate family
    """
    validate_dimension(n)
    validate_positive_number(L, "L", strict=True)
    rule = associate_spec(_on_length(X, L))
    value = weighted_norm(rule.spec, DecreasingProfile.indicator(float(min(L, rule.spec.L))),
                          1.0 / dual_exponent(n), numerics)
    logger.debug(f"||r^(-1/n')|| in {rule.spec.describe()}: {value:.12g}")
    return bool(np.isfinite(value))


# -- moduli of continuity ------------------------------------------------------


@dataclass(frozen=True)
class ModuliResult:
    """theta_X(s), rho_X(s), sigma_X(s) in the associate family, with its bracket."""

    s: float
    theta: float
    rho: float
    sigma: float
    radius: float
    bracket: Tuple[float, float]
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    @property
    def sigma_bracket(self) -> List[float]:
        return [self.bracket[0] * self.sigma, self.bracket[1] * self.sigma]


def _rho_antiderivative(start: float) -> Callable[[np.ndarray], np.ndarray]:
    """Antiderivative of tau -> 1/(start + tau)."""
    def antiderivative(tau):
        return np.log1p(np.asarray(tau, dtype=float) / start)
    return antiderivative


def _resolve_radius(n: int, d: float, R: Optional[float], numerics: NumericsConfig,
                    ledger: ChoiceLedger) -> float:
    if R is None:
        R = numerics.moduli.radius_factor * d ** n
        ledger.record('rho-radius', f"rho uses R = {numerics.moduli.radius_factor:g} * d^n = {R:.6g}",
                      'moduli', radius=R)
    elif not R > d ** n:
        raise ValidationError(f"Invalid R: {R}. Must be > d^n = {d ** n:g}")
    return float(R)


def moduli(X: NormSpec, n: int, d: float, s: float, R: Optional[float] = None,
           numerics: Optional[NumericsConfig] = None) -> ModuliResult:
    """
    theta_X(s) = ||r^{-1/n'} chi_(0,s^n)||_{X'} and rho_X(s) = s ||r^{-1} chi_(s^n,R)||_{X'}.

    For s > d both are continued by their values at d.

    Args:
        X: Norm of the gradient
        n: Dimension
        d: Domain diameter
        s: Scale
        R: Outer radius (> d^n); radius_factor * d^n when None
        numerics: Settings

    Raises:
        UnsupportedSpaceError: If X has no known associate family
    """
    validate_dimension(n)
    validate_positive_number(d, "d", strict=True)
    validate_positive_number(s, "s", strict=True)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    R = _resolve_radius(n, d, R, numerics, ledger)
    if s > d:
        ledger.record('continued-beyond-diameter', f"s = {s:g} > d = {d:g}; values at d reported",
                      'moduli', s=s, d=d)
        s = d
    rule = associate_spec(_on_length(X, R))
    Xprime = rule.spec
    length = Xprime.L if np.isfinite(Xprime.L) else R
    start = min(s ** n, length)
    theta = weighted_norm(Xprime, DecreasingProfile.indicator(float(start)), 1.0 / dual_exponent(n), numerics)
    extent = min(R, length) - s ** n
    rho = 0.0
    if extent > 0:
        rho = s * tabulated_norm(Xprime, _rho_antiderivative(s ** n), extent, None, numerics, ledger, 'moduli')
    return ModuliResult(float(s), float(theta), float(rho), float(theta + rho), R,
                        (rule.lo, rule.hi), tuple(ledger.entries))


@dataclass(frozen=True)
class ModulusCurve:
    """sigma_X on s = 2^{-k} and the uniform-continuity verdict."""

    s: np.ndarray
    sigma: np.ndarray
    uniform_continuity: bool
    bracket: Tuple[float, float]
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    def rows(self) -> List[List[float]]:
        return [[float(s), float(v)] for s, v in zip(self.s, self.sigma)]


def uniform_continuity_verdict(s: np.ndarray, sigma: np.ndarray,
                               numerics: Optional[NumericsConfig] = None) -> bool:
    """
    Whether sigma(s) -> 0 as s -> 0+ on a dyadic grid ordered by decreasing s.

    Vanishing means: nonincreasing over the last half of the grid with a
    log-log slope against log(1/s) at most verdict_slope, or a total drop by
    the factor verdict_drop.
    """
    settings = resolve(numerics).moduli
    s = np.asarray(s, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if not np.all(np.isfinite(sigma)):
        return False
    if sigma[-1] <= settings.verdict_drop * sigma[0]:
        return True
    half = sigma.size // 2
    tail_s, tail_sigma = s[half:], sigma[half:]
    if np.any(tail_sigma <= 0):
        return False
    nonincreasing = bool(np.all(np.diff(tail_sigma) <= 1e-12 * tail_sigma[:-1]))
    slope = np.polyfit(np.log(np.log(1.0 / tail_s)), np.log(tail_sigma), 1)[0]
    logger.debug(f"sigma tail slope against log log(1/s): {slope:.4f}")
    return nonincreasing and bool(slope <= settings.verdict_slope)


def modulus_curve(X: NormSpec, n: int, d: float = 1.0, R: Optional[float] = None,
                  numerics: Optional[NumericsConfig] = None) -> ModulusCurve:
    """sigma_X at s = 2^{-k}, k = 1..verdict_levels, with the verdict."""
    numerics = resolve(numerics)
    levels = numerics.moduli.verdict_levels
    s = 2.0 ** -np.arange(1, levels + 1)
    ledger = ChoiceLedger()
    values = []
    bracket = (1.0, 1.0)
    for point in s:
        result = moduli(X, n, d, float(point), R, numerics)
        ledger.extend(result.regularizations)
        values.append(result.sigma)
        bracket = result.bracket
    sigma = np.array(values)
    verdict = uniform_continuity_verdict(s, sigma, numerics)
    logger.info(f"Modulus of {X.describe()} in dimension {n}: uniform continuity {verdict}")
    return ModulusCurve(s, sigma, verdict, bracket, tuple(ledger.entries))


# -- R^n targets ---------------------------------------------------------------------


def rn_zero_space_admissible(X: NormSpec, n: int, numerics: Optional[NumericsConfig] = None) -> bool:
    """
    Whether ||(1 + r)^{-1/n'}||_{X'(0,inf)} is finite.

    Raises:
        UnsupportedSpaceError: For families without a known associate on (0, inf)
    """
    validate_dimension(n)
    n_dual = dual_exponent(n)
    family = X.family
    if family == NormFamily.LEBESGUE:
        q = dual_exponent(X.p)
        return bool(np.isinf(q) or q > n_dual)
    if family == NormFamily.LORENTZ:
        if X.p == X.q:
            q = dual_exponent(X.p)
            return bool(np.isinf(q) or q > n_dual)
        p_dual, q_dual = dual_exponent(X.p), dual_exponent(X.q)
        return bool(p_dual > n_dual or (p_dual == n_dual and np.isinf(q_dual)))
    if family == NormFamily.ORLICZ:
        conj = conjugate(X.young)

        def log_h(x):
            x = np.asarray(x, dtype=float)
            return x + conj.log_value(-np.logaddexp(0.0, x) / n_dual)
        return bool(log_axis_integral(log_h, 0.0, numerics).convergent)
    raise UnsupportedSpaceError(f"Unknown associate of {X.describe()} on (0, inf)")


def _power_trial(a: float, L: float, numerics: NumericsConfig) -> DecreasingProfile:
    """Cell averages of s^{-a} on (0, L)."""
    edges = geometric_edges(numerics.tabulation.s_min_ratio * L, L, numerics.tabulation.points_per_decade)
    return profile_from_antiderivative(lambda s: np.asarray(s, dtype=float) ** (1.0 - a) / (1.0 - a), edges)


class TargetNormHandle:
    """
    Optimal target norm of E^1 X.

    Mode X1 is the finite-measure target on (0, L); mode X1Rn is the sum norm
    on R^n built from the localized target and X itself.

    Attributes:
        X: Norm of the gradient
        mode: 'X1' or 'X1Rn'
        n: Dimension
        L: Measure of the domain (ignored in X1Rn mode)
    """

    def __init__(self, X: NormSpec, mode: str = 'X1', n: int = 2, L: float = 1.0,
                 numerics: Optional[NumericsConfig] = None):
        validate_choice(mode, TARGET_MODES, "target mode")
        validate_dimension(n)
        self.mode = mode
        self.n = n
        self.numerics = resolve(numerics)
        self.ledger = ChoiceLedger()
        if mode == 'X1':
            validate_positive_number(L, "L", strict=True)
            self.L = float(L)
            self.X = _on_length(X, L)
            self.rule: Optional[AssociateRule] = associate_spec(self.X)
        else:
            self.L = float('inf')
            self.X = X
            self.rule = None

    def associate_norm(self, f: DecreasingProfile) -> List[float]:
        """Bracket for ||f||_{X_1'} from the associate family of X."""
        if self.rule is None:
            raise UnsupportedSpaceError("The R^n target has no associate formula; use norm()")
        value = x1_associate_norm(self.rule.spec, f, self.n, self.numerics, self.ledger)
        return self.rule.bracket(value)

    def trials(self, f: DecreasingProfile) -> List[DecreasingProfile]:
        """Indicators at 8 per decade, truncated powers, f and sqrt(f)."""
        L = self.L
        count = _INDICATORS_PER_DECADE * _INDICATOR_DECADES
        levels = L * 10.0 ** (-np.arange(count + 1) / _INDICATORS_PER_DECADE)
        exponents = sorted(set(_POWER_TRIALS + (1.0 / self.n, 1.0 - 1.0 / self.n)))
        trials = [DecreasingProfile.indicator(float(m)) for m in levels]
        trials += [_power_trial(a, L, self.numerics) for a in exponents]
        f = f.trimmed()
        if not f.is_zero():
            trials += [f, DecreasingProfile(f.breakpoints, np.sqrt(f.values))]
        return trials

    def norm(self, f: DecreasingProfile) -> float:
        """
        Lower bound for ||f||_{X_1} by duality over the trial family.

        In X1Rn mode the value is rn_target_norm(X, f, n).
        """
        if self.mode == 'X1Rn':
            return rn_target_norm(self.X, f, self.n, self.numerics)
        f = f.trimmed()
        if f.is_zero():
            return 0.0
        if f.L > self.L * (1.0 + 1e-12):
            raise ValidationError(f"Invalid profile: support {f.L:g} exceeds L={self.L:g}")
        best = 0.0
        for g in self.trials(f):
            size = self.associate_norm(g)[1]
            if not np.isfinite(size) or size <= 0:
                continue
            best = max(best, product_integral(f, g) / size)
        logger.debug(f"X_1 norm lower bound for {self.X.describe()}: {best:.12g}")
        return best


def rn_target_norm(X: NormSpec, f: DecreasingProfile, n: int,
                   numerics: Optional[NumericsConfig] = None) -> float:
    """
    ||f||_{((X_r)_1)_e} + ||f||_X.

    The first term is the X_1 norm on (0, 1) of the restriction of f* to
    (0, 1], where X_r is X localized to (0, 1); mass at the cut s = 1
    belongs to this local part.

    Raises:
        UnsupportedSpaceError: If X depends on the interval length or has no known associate
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    f = f.trimmed()
    if f.is_zero():
        return 0.0
    local = TargetNormHandle(X.localized(1.0), 'X1', n, 1.0, numerics)
    local_part = local.norm(f.restricted(1.0))
    return float(local_part + norm(X, f, numerics))
