"""
One-dimensional Hardy reduction operators and operator-norm estimates by trial ratios.

T f(s) = integral over (s, L) of f(r) r^{-1/n'} dr. Only nonincreasing trials
are generated: the reduction inequality holds for all measurable f as soon as
it holds for nonincreasing ones.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.norms.norm_spec import NormFamily, NormSpec
from src.norms.ri_norms import dual_exponent, norm, tabulated_norm
from src.rearrangement.profiles import (
    DecreasingProfile,
    geometric_edges,
    profile_from_antiderivative,
    random_profile,
)
from src.utils.exceptions import ValidationError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_choice, validate_dimension, validate_measure, validate_positive_number

logger = get_logger(__name__)

TRIAL_KINDS = ('random', 'power', 'indicator')


def hardy_finite(f: DecreasingProfile, s: float, L: float, n: int) -> float:
    """
    Integral of f(r) r^{-1/n'} over (s, L), exact on steps.

    Returns 0 for s >= L.

    Raises:
        DomainError: If s <= 0
    """
    validate_measure(s)
    validate_dimension(n)
    if s >= L:
        return 0.0
    return float(f.kernel_integral(1.0 / dual_exponent(n), s, L))


def hardy_rn(f: DecreasingProfile, s: float, n: int) -> float:
    """Integral of f(r) r^{-1/n'} over (s, inf) for a profile vanishing beyond its support."""
    return hardy_finite(f, s, f.support, n)


def _hardy_antiderivative(f: DecreasingProfile, n: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    """
    Antiderivative of Tf on (0, L).

    By Fubini the integral of Tf over (0, s) is s Tf(s) + integral of f(r) r^{1/n} over (0, s).
    """
    f = f.restricted(L) if f.L > L else f
    lefts, rights, v = f.left_endpoints, f.breakpoints, f.values
    e = 1.0 / n
    kernel = np.concatenate(([0.0], np.cumsum(v * n * (rights ** e - lefts ** e))))
    moment = np.concatenate(([0.0], np.cumsum(v * (rights ** (1 + e) - lefts ** (1 + e)) / (1 + e))))
    total = kernel[-1]

    def antiderivative(s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, L)
        i = np.clip(np.searchsorted(rights, s, side='left'), 0, rights.size - 1)
        inside = s <= rights[-1]
        partial_kernel = np.where(inside, kernel[i] + v[i] * n * (s ** e - lefts[i] ** e), total)
        partial_moment = np.where(inside, moment[i] + v[i] * (s ** (1 + e) - lefts[i] ** (1 + e)) / (1 + e),
                                  moment[-1])
        return s * (total - partial_kernel) + partial_moment
    return antiderivative


def hardy_norm(Y: NormSpec, f: DecreasingProfile, n: int, L: float,
               numerics: Optional[NumericsConfig] = None, ledger: Optional[ChoiceLedger] = None) -> float:
    """||Tf||_{Y(0,L)}; Tf is tabulated by its cell averages."""
    f = f.trimmed()
    if f.is_zero():
        return 0.0
    if Y.family == NormFamily.LEBESGUE and np.isinf(Y.p):
        return float(f.kernel_integral(1.0 / dual_exponent(n), 0.0, L))
    return tabulated_norm(Y, _hardy_antiderivative(f, n, L), L, f.breakpoints, numerics, ledger, 'hardy_norm')


@dataclass(frozen=True)
class TrialFamily:
    """
    Witness family of nonincreasing trials on (0, L).

    Kinds:
        random: `count` random step profiles from `seed`
        power: cell averages of r^{-a} for a in `scales`
        indicator: chi_(0, L/k) for k in `scales`
    """

    kind: str
    L: float = 1.0
    scales: Tuple[float, ...] = ()
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        validate_choice(self.kind, TRIAL_KINDS, "trial family kind")
        validate_positive_number(self.L, "L", strict=True)
        if self.kind == 'random' and self.count < 1:
            raise ValidationError(f"Invalid count: {self.count}. Must be >= 1")
        if self.kind != 'random' and not self.scales:
            raise ValidationError(f"Invalid {self.kind} family: scales are required")
        if self.kind == 'power' and any(not 0 <= a < 1 for a in self.scales):
            raise ValidationError("Invalid power family: exponents must lie in [0, 1)")
        if self.kind == 'indicator' and any(not k > 0 for k in self.scales):
            raise ValidationError("Invalid indicator family: scales must be > 0")
        object.__setattr__(self, 'scales', tuple(float(k) for k in self.scales))

    @classmethod
    def random(cls, count: int, seed: int, L: float = 1.0) -> 'TrialFamily':
        return cls('random', L=L, count=count, seed=seed)

    @classmethod
    def power(cls, exponents: Sequence[float], L: float = 1.0) -> 'TrialFamily':
        return cls('power', L=L, scales=tuple(exponents))

    @classmethod
    def indicator(cls, ks: Sequence[float], L: float = 1.0) -> 'TrialFamily':
        return cls('indicator', L=L, scales=tuple(ks))

    def generate(self, numerics: Optional[NumericsConfig] = None) -> List[Tuple[float, DecreasingProfile]]:
        """(scale, trial) pairs in a fixed order."""
        if self.kind == 'random':
            rng = np.random.default_rng(self.seed)
            return [(float(i), random_profile(rng, self.L)) for i in range(self.count)]
        if self.kind == 'indicator':
            return [(k, DecreasingProfile.indicator(self.L / k)) for k in self.scales]
        tabulation = resolve(numerics).tabulation
        edges = geometric_edges(tabulation.s_min_ratio * self.L, self.L, tabulation.points_per_decade)
        return [
            (a, profile_from_antiderivative(lambda s, a=a: np.asarray(s, dtype=float) ** (1 - a) / (1 - a), edges))
            for a in self.scales
        ]


@dataclass(frozen=True)
class RatioResult:
    """Largest ||Tf||_Y / ||f||_X over a family and its growth across the family scale."""

    best_ratio: float
    witness: Optional[DecreasingProfile]
    ratios: Tuple[Tuple[float, float], ...]
    slope_estimate: Optional[float]
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter((self.best_ratio, self.witness))


def _slope(ratios: Sequence[Tuple[float, float]]) -> Optional[float]:
    """Least-squares slope of log ratio against log scale."""
    points = [(k, r) for k, r in ratios if k > 0 and np.isfinite(r) and r > 0]
    if len(points) < 2:
        return None
    k, r = np.array(points).T
    return float(np.polyfit(np.log(k), np.log(r), 1)[0])


def _best(pairs: List[Tuple[float, float, DecreasingProfile]], kind: str, ledger: ChoiceLedger) -> RatioResult:
    best, witness = 0.0, None
    for _, ratio, trial in pairs:
        if ratio > best:
            best, witness = ratio, trial
    ratios = tuple((scale, ratio) for scale, ratio, _ in pairs)
    slope = None if kind == 'random' else _slope(ratios)
    return RatioResult(best, witness, ratios, slope, tuple(ledger.entries))


def ratio_sup(X: NormSpec, Y: NormSpec, n: int, L: float, family: TrialFamily,
              numerics: Optional[NumericsConfig] = None) -> RatioResult:
    """
    max over the family of ||Tf||_{Y(0,L)} / ||f||_{X(0,L)}.

    Trials of zero or infinite X-norm are skipped. The witness is the first
    maximizer in the family order.

    Returns:
        RatioResult; unpacks as (best_ratio, witness)
    """
    validate_dimension(n)
    validate_positive_number(L, "L", strict=True)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    pairs = []
    for scale, trial in family.generate(numerics):
        trial = trial.restricted(L) if trial.L > L else trial
        size = norm(X, trial, numerics)
        if not np.isfinite(size) or size <= 0:
            logger.debug(f"Skipping trial {scale:g}: ||f||_X = {size}")
            continue
        pairs.append((scale, hardy_norm(Y, trial, n, L, numerics, ledger) / size, trial))
    result = _best(pairs, family.kind, ledger)
    logger.info(f"ratio_sup {X.describe()} -> {Y.describe()}: {result.best_ratio:.6g} over {len(pairs)} trials")
    return result


def _beyond(f: DecreasingProfile, cut: float) -> DecreasingProfile:
    """Rearrangement of chi_(cut, inf) f*: the part of f beyond cut, shifted to the origin."""
    keep = f.breakpoints > cut
    if not np.any(keep):
        return DecreasingProfile.zero()
    return DecreasingProfile(f.breakpoints[keep] - cut, f.values[keep])


@dataclass(frozen=True)
class SplitResult:
    """Local and global halves of the R^n reduction."""

    local: RatioResult
    global_: RatioResult

    def __iter__(self):
        return iter((self.local.best_ratio, self.global_.best_ratio))


def rn_split_check(X: NormSpec, Y: NormSpec, n: int, family: TrialFamily,
                   numerics: Optional[NumericsConfig] = None) -> SplitResult:
    """
    Local ratio ||chi_(0,1) T_1 f||_Y / ||f||_X and global ratio ||chi_(1,inf) f||_Y / ||f||_X.

    T_1 integrates over (s, 1). Trials are taken on (0, family.L), which may
    exceed 1 so that the global part sees mass beyond the cut.

    Returns:
        SplitResult; unpacks as (local_ratio_sup, global_ratio_sup)
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    local_pairs, global_pairs = [], []
    local_Y = Y if Y.depends_on_length else Y.with_length(1.0)
    for scale, trial in family.generate(numerics):
        size = norm(X, trial, numerics)
        if not np.isfinite(size) or size <= 0:
            continue
        head = trial.restricted(1.0) if trial.L > 1.0 else trial
        local_pairs.append((scale, hardy_norm(local_Y, head, n, 1.0, numerics, ledger) / size, trial))
        global_pairs.append((scale, norm(Y, _beyond(trial, 1.0), numerics) / size, trial))
    result = SplitResult(_best(local_pairs, family.kind, ledger), _best(global_pairs, family.kind, ledger))
    logger.info(f"rn_split_check {X.describe()} -> {Y.describe()}: "
                f"local {result.local.best_ratio:.6g}, global {result.global_.best_ratio:.6g}")
    return result
