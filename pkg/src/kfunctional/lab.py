"""
K-functionals K(f, t; Z0, Z1) = inf over f = f0 + f1 of ||f0||_Z0 + t ||f1||_Z1.

Closed forms are evaluated exactly on step profiles; everything else is an
upper bound obtained from an explicit decomposition.
"""

import itertools
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from src.config.settings import NumericsConfig, resolve
from src.norms.norm_spec import NormFamily, NormSpec
from src.norms.ri_norms import dual_exponent, norm
from src.rearrangement.profiles import DecreasingProfile, WeightedSamples, rearrange
from src.symgrad.grid import VectorField2D, symmetric_gradient
from src.symgrad.maximal import maximal_function
from src.symgrad.truncation import truncate
from src.symgrad.verification import field_profile
from src.utils.exceptions import ResolutionError, ValidationError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_dimension, validate_measure

logger = get_logger(__name__)

MAX_SPLIT_STEPS = 12
_LEVEL_CANDIDATES = 64


@dataclass(frozen=True, eq=False)
class Decomposition:
    """
    Split f = f0 + f1 on the cells of f's step partition.

    Attributes:
        weights: Cell measures
        f0, f1: Part values per cell
    """

    weights: np.ndarray
    f0: np.ndarray
    f1: np.ndarray

    def __post_init__(self):
        for name in ('weights', 'f0', 'f1'):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.weights.shape == self.f0.shape == self.f1.shape):
            raise ValidationError("Invalid decomposition: parts and cells differ in size")

    @classmethod
    def of(cls, f: DecreasingProfile, fractions: np.ndarray) -> 'Decomposition':
        """f0 = fraction * f and f1 = f - f0 per step."""
        f0 = np.asarray(fractions, dtype=float) * f.values
        return cls(f.widths, f0, f.values - f0)

    @classmethod
    def zero(cls) -> 'Decomposition':
        return cls(np.zeros(0), np.zeros(0), np.zeros(0))

    def total(self) -> np.ndarray:
        return self.f0 + self.f1

    def is_additive(self, f: DecreasingProfile, rtol: float = 1e-12) -> bool:
        """f0 + f1 reproduces f cell by cell."""
        if self.f0.size == 0:
            return f.is_zero()
        return self.weights.shape == f.widths.shape and np.allclose(self.total(), f.values, rtol=rtol, atol=0.0)

    def parts(self) -> Tuple[DecreasingProfile, DecreasingProfile]:
        """Decreasing rearrangements of |f0| and |f1|."""
        if self.f0.size == 0:
            return DecreasingProfile.zero(), DecreasingProfile.zero()
        return (rearrange(WeightedSamples(np.abs(self.f0), self.weights)),
                rearrange(WeightedSamples(np.abs(self.f1), self.weights)))


@dataclass(frozen=True)
class KResult:
    """Upper bound on K together with the decomposition attaining it."""

    value: float
    decomposition: Decomposition
    method: str

    def __iter__(self) -> Iterator:
        return iter((self.value, self.decomposition))


def k_exact_l1_linf(f: DecreasingProfile, t: float) -> float:
    """K(f, t; L^1, L^inf) = integral of f* over (0, t)."""
    validate_measure(t, "t")
    return float(f.cumulative(t))


def _is_l1_linf(X0: NormSpec, X1: NormSpec) -> bool:
    return (X0.family == NormFamily.LEBESGUE and X0.p == 1.0
            and X1.family == NormFamily.LEBESGUE and np.isinf(X1.p))


def _threshold_search(f: DecreasingProfile, t: float, numerics: NumericsConfig) -> KResult:
    sup = f.sup

    def objective(level: float) -> float:
        level = float(np.clip(level, 0.0, sup))
        return float(f.excess(level).integral) + t * level

    tol = numerics.kfunctional.golden_rel_tol
    found = minimize_scalar(objective, bounds=(0.0, sup), method='bounded',
                            options={'xatol': tol * sup})
    candidates = [(objective(0.0), 0.0), (objective(sup), sup), (objective(found.x), float(np.clip(found.x, 0, sup)))]
    value, level = min(candidates)
    minimum = np.minimum(f.values, level)
    logger.debug(f"Threshold search: level {level:.6g}, K <= {value:.10g}")
    return KResult(value, Decomposition(f.widths, f.values - minimum, minimum), 'threshold')


def _split_value(f: DecreasingProfile, fractions: np.ndarray, t: float, X0: NormSpec, X1: NormSpec,
                 numerics: NumericsConfig) -> float:
    part0, part1 = Decomposition.of(f, fractions).parts()
    return norm(X0, part0, numerics) + t * norm(X1, part1, numerics)


def _split_search(f: DecreasingProfile, t: float, X0: NormSpec, X1: NormSpec,
                  numerics: NumericsConfig) -> KResult:
    settings = numerics.kfunctional
    grid = np.linspace(0.0, 1.0, settings.split_levels)
    k = len(f)
    if settings.split_levels ** k <= settings.exhaustive_limit:
        best = min(
            ((_split_value(f, np.array(fr), t, X0, X1, numerics), fr) for fr in itertools.product(grid, repeat=k)),
            key=lambda pair: pair[0],
        )
        return KResult(best[0], Decomposition.of(f, np.array(best[1])), 'exhaustive')

    best_value, best_fractions = np.inf, None
    for start in (0.0, 1.0, 0.5):
        fractions = np.full(k, start)
        value = _split_value(f, fractions, t, X0, X1, numerics)
        improved = True
        while improved:
            improved = False
            for i in range(k):
                for level in grid:
                    if level == fractions[i]:
                        continue
                    trial = fractions.copy()
                    trial[i] = level
                    trial_value = _split_value(f, trial, t, X0, X1, numerics)
                    if trial_value < value * (1 - 1e-14):
                        value, fractions, improved = trial_value, trial, True
        if value < best_value:
            best_value, best_fractions = value, fractions
    return KResult(best_value, Decomposition.of(f, best_fractions), 'coordinate')


def k_bruteforce(f: DecreasingProfile, t: float, X0: NormSpec, X1: NormSpec,
                 numerics: Optional[NumericsConfig] = None) -> KResult:
    """
    Best decomposition found by direct search; an upper bound on K(f, t; X0, X1).

    (L^1, L^inf) searches the truncation level lambda with f0 = (f - lambda)_+ and
    f1 = min(f, lambda). Other couples split every step of f by a fraction in
    {0, 1/8, ..., 1}: exhaustively when the grid is small, otherwise by cyclic
    coordinate search from the all-0, all-1 and all-1/2 splits.

    Returns:
        KResult; unpacks as (value, decomposition)

    Raises:
        ValidationError: If a general couple is asked for a profile with more than 12 steps
    """
    validate_measure(t, "t")
    numerics = resolve(numerics)
    f = f.trimmed()
    if f.is_zero():
        return KResult(0.0, Decomposition.zero(), 'zero')
    if _is_l1_linf(X0, X1):
        return _threshold_search(f, t, numerics)
    if len(f) > MAX_SPLIT_STEPS:
        raise ValidationError(f"Invalid profile for split search: {len(f)} steps. Must be <= {MAX_SPLIT_STEPS}")
    return _split_search(f, t, X0, X1, numerics)


def k_l1_ln1_predicted(f: DecreasingProfile, t: float, n: int) -> float:
    """Integral of f* over (0, t^{n'}) plus t times the integral of f*(s) s^{-1/n'} beyond t^{n'}."""
    validate_measure(t, "t")
    validate_dimension(n)
    n_dual = dual_exponent(n)
    cut = t ** n_dual
    return float(f.cumulative(cut)) + t * float(f.kernel_integral(1.0 / n_dual, cut))


def k_l1_ln1_two_step(f: DecreasingProfile, t: float, n: int,
                      numerics: Optional[NumericsConfig] = None) -> KResult:
    """
    inf over lambda of ||(f - lambda)_+||_1 + t ||min(f, lambda)||_{L^{n,1}}.

    Levels of f (at most 64 of them) are tried first; the best interval
    between neighbouring candidates is then refined.
    """
    validate_measure(t, "t")
    validate_dimension(n)
    numerics = resolve(numerics)
    f = f.trimmed()
    if f.is_zero():
        return KResult(0.0, Decomposition.zero(), 'zero')
    lorentz = NormSpec.lorentz(float(n), 1.0)

    def objective(level: float) -> float:
        level = float(np.clip(level, 0.0, f.sup))
        return float(f.excess(level).integral) + t * norm(lorentz, f.minimum(level), numerics)

    levels = np.unique(np.append(f.values, 0.0))
    if levels.size > _LEVEL_CANDIDATES:
        levels = np.unique(np.quantile(levels, np.linspace(0.0, 1.0, _LEVEL_CANDIDATES), method='nearest'))
    values = np.array([objective(level) for level in levels])
    best = int(np.argmin(values))
    value, level = float(values[best]), float(levels[best])
    lo = levels[max(best - 1, 0)]
    hi = levels[min(best + 1, levels.size - 1)]
    if hi > lo:
        found = minimize_scalar(objective, bounds=(lo, hi), method='bounded',
                                options={'xatol': numerics.kfunctional.golden_rel_tol * max(hi, 1e-300)})
        if found.fun < value:
            value, level = float(found.fun), float(found.x)
    minimum = np.minimum(f.values, level)
    return KResult(value, Decomposition(f.widths, f.values - minimum, minimum), 'two-step')


@dataclass(frozen=True)
class SymgradComparison:
    """
    Rearrangement prediction for K(u, t; E L^1, E L^inf) against the truncation upper bound.

    Attributes:
        predicted: Integral over (0, t) of the rearrangement of |u| + |eps(u)|
        upper: ||E(u - T u)||_1 + t (||T u||_inf + ||eps(T u)||_inf)
        theta, lam: Truncation levels M(u)*(t) and M(eps(u))*(t)
    """

    predicted: float
    upper: float
    theta: float
    lam: float
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    @property
    def ratio(self) -> Optional[float]:
        return self.upper / self.predicted if self.predicted > 0 else None

    def __iter__(self) -> Iterator[float]:
        return iter((self.predicted, self.upper))


def _full_magnitude(u: VectorField2D, eps_values: np.ndarray) -> np.ndarray:
    return u.magnitude() + eps_values


def k_symgrad_compare(u: VectorField2D, t: float, numerics: Optional[NumericsConfig] = None) -> SymgradComparison:
    """
    Compare the rearrangement formula for the symmetric-gradient K-functional with a truncation bound.

    Returns:
        SymgradComparison; unpacks as (predicted, upper)

    Raises:
        DomainError: If t <= 0
        ValidationError: If t >= |Omega|
        ResolutionError: If t is below the cell measure
        GridExtentError: If the truncation level set touches the grid edge
    """
    validate_measure(t, "t")
    domain = u.domain
    if t >= domain.measure:
        raise ValidationError(f"Invalid t: {t}. Must be < |Omega| = {domain.measure}")
    if t < domain.cell_measure:
        raise ResolutionError(f"t = {t} is below the cell measure {domain.cell_measure}; refine the grid")
    numerics = resolve(numerics)
    if u.is_zero():
        return SymgradComparison(0.0, 0.0, 0.0, 0.0)

    eps = symmetric_gradient(u)
    eps_values = eps.frobenius()
    predicted = float(field_profile(_full_magnitude(u, eps_values), domain).cumulative(t))
    theta = float(field_profile(maximal_function(u.magnitude(), domain), domain).value_at(t))
    lam = float(field_profile(maximal_function(eps_values, domain), domain).value_at(t))
    ledger = ChoiceLedger()
    if lam <= 0.0:
        lam = max(theta, 1.0) * 1e-12
        ledger.record('lambda-floor', f"M(eps(u))*(t) vanishes; lambda set to {lam:.3g}", 'k_symgrad_compare')
    if theta <= 0.0:
        theta = max(lam, 1.0) * 1e-12
        ledger.record('theta-floor', f"M(u)*(t) vanishes; theta set to {theta:.3g}", 'k_symgrad_compare')

    result = truncate(u, theta, lam, numerics)
    ledger.extend(result.regularizations)
    truncated = result.field
    remainder = u - truncated
    remainder_norm = domain.integrate(_full_magnitude(remainder, symmetric_gradient(remainder).frobenius()))
    upper = remainder_norm + t * (truncated.sup_norm() + symmetric_gradient(truncated).sup_norm())
    logger.info(f"k_symgrad_compare t={t:g}: predicted {predicted:.6g}, upper {upper:.6g}")
    return SymgradComparison(predicted, upper, theta, lam, tuple(ledger.entries))


def k_on_grid(f: DecreasingProfile, ts: np.ndarray, evaluator, *args) -> List[float]:
    """Evaluate a K evaluator on a grid of t values (for monotonicity and concavity checks)."""
    out = []
    for t in ts:
        value = evaluator(f, float(t), *args)
        out.append(float(value.value if isinstance(value, KResult) else value))
    return out
