"""
Numerical checks of Sobolev, Poincare and modular inequalities for planar fields.

Norms act on decreasing rearrangements of |u| and |eps(u)|, so every check
reduces to the one-dimensional machinery of src.norms.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.norms.norm_spec import NormSpec
from src.norms.ri_norms import dual_exponent, norm
from src.rearrangement.profiles import DecreasingProfile, WeightedSamples, rearrange
from src.symgrad.fields import FieldFamily
from src.symgrad.grid import GridDomain, TensorField2D, VectorField2D, field_values, rigid_project, \
    rigid_residual, symmetric_gradient
from src.utils.exceptions import DomainError
from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import get_logger
from src.utils.validators import validate_dimension, validate_measure
from src.young.calculus import sobolev_conjugate
from src.young.young_function import YoungFunction

logger = get_logger(__name__)


def field_profile(values: Union[np.ndarray, VectorField2D, TensorField2D],
                  domain: Optional[GridDomain] = None) -> DecreasingProfile:
    """Decreasing rearrangement of per-cell magnitudes over the active cells."""
    if domain is None:
        domain = values.domain
    magnitudes = field_values(values)[domain.mask]
    return rearrange(WeightedSamples.uniform(magnitudes, domain.cell_measure))


def rearrangement_bound_profile(eps_profile: DecreasingProfile, s: float, n: int) -> float:
    """s^{-1/n'} times the integral of eps* over (0, s) plus the integral of eps*(r) r^{-1/n'} over (s, inf)."""
    validate_measure(s)
    validate_dimension(n)
    gamma = 1.0 / dual_exponent(n)
    head = float(eps_profile.cumulative(s)) * s ** -gamma
    return head + float(eps_profile.kernel_integral(gamma, s))


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    if denominator <= 0.0 or not np.isfinite(denominator):
        return None
    return numerator / denominator


@dataclass(frozen=True)
class SobolevReport:
    """
    ||u||_Y / ||eps(u)||_X over a field family at several resolutions.

    Attributes:
        ratios: resolution -> [(field label, ratio)]
        max_ratio: resolution -> largest ratio
        refinement_change: largest relative change of max_ratio between consecutive resolutions
        pointwise_constant: largest u*(s) / bound(s) over all fields and sampled s
        growth_slope: slope of log ratio against log level (log-cusp families only)
    """

    X: str
    Y: str
    ratios: Dict[int, List[Tuple[float, float]]]
    max_ratio: Dict[int, float]
    refinement_change: float
    pointwise_constant: float
    growth_slope: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            'X': self.X,
            'Y': self.Y,
            'max_ratio': {str(k): v for k, v in self.max_ratio.items()},
            'refinement_change': self.refinement_change,
            'pointwise_constant': self.pointwise_constant,
            'growth_slope': self.growth_slope,
            'ratios': {str(k): [list(pair) for pair in v] for k, v in self.ratios.items()},
        }


def pointwise_constants(u_profile: DecreasingProfile, eps_profile: DecreasingProfile, n: int,
                        s_values: np.ndarray) -> np.ndarray:
    """u*(s) divided by the rearrangement bound at each s."""
    out = []
    for s in s_values:
        bound = rearrangement_bound_profile(eps_profile, float(s), n)
        value = float(u_profile.value_at(s))
        out.append(0.0 if value == 0.0 else (np.inf if bound == 0.0 else value / bound))
    return np.array(out)


def verify_sobolev_2d(family: FieldFamily, X: NormSpec, Y: NormSpec, n: int = 2,
                      numerics: Optional[NumericsConfig] = None, s_count: int = 20) -> SobolevReport:
    """
    Embedding ratios ||u||_Y / ||eps(u)||_X with a refinement study and the pointwise bound.

    Args:
        family: Field family and resolutions
        X: Norm of the symmetric gradient
        Y: Norm of the field
        n: Dimension in the formulas (the grid is planar)
        numerics: Settings
        s_count: Number of sampled s for the pointwise bound
    """
    validate_dimension(n)
    numerics = resolve(numerics)
    ratios: Dict[int, List[Tuple[float, float]]] = {}
    pointwise = 0.0
    for resolution in family.resolutions:
        domain = family.domain(resolution)
        s_values = np.geomspace(10 * domain.cell_measure, 0.5 * domain.measure, s_count)
        rows = []
        for label, u in zip(family.labels(), family.fields(resolution)):
            u_profile = field_profile(u)
            eps_profile = field_profile(symmetric_gradient(u))
            ratio = _ratio(norm(Y, u_profile, numerics), norm(X, eps_profile, numerics))
            if ratio is None:
                logger.debug(f"Skipping field {label}: eps(u) vanishes")
                continue
            rows.append((float(label), float(ratio)))
            pointwise = max(pointwise, float(np.max(pointwise_constants(u_profile, eps_profile, n, s_values))))
        ratios[resolution] = rows
        logger.info(f"verify_sobolev_2d {X.describe()} -> {Y.describe()} at {resolution}^2: "
                    f"max ratio {max((r for _, r in rows), default=0.0):.6g}")

    max_ratio = {k: max((r for _, r in v), default=0.0) for k, v in ratios.items()}
    ordered = [max_ratio[k] for k in family.resolutions]
    changes = [abs(b - a) / a for a, b in zip(ordered, ordered[1:]) if a > 0]
    slope = None
    if family.kind == 'log-cusp':
        finest = ratios[family.resolutions[-1]]
        if len(finest) >= 2:
            k, r = np.array(finest).T
            slope = float(np.polyfit(np.log(k), np.log(r), 1)[0])
    return SobolevReport(X.describe(), Y.describe(), ratios, max_ratio, max(changes, default=0.0), pointwise, slope)


@dataclass(frozen=True)
class ModularResult:
    """
    Smallest c with integral of A_n(|u| / (c m^{1/n})) <= m, where m = integral of A(|eps(u)|).

    holds is False when no finite c works.
    """

    c: float
    holds: bool
    gradient_modular: float
    field_modular: float
    regularizations: Tuple[LedgerEntry, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.holds


def verify_orlicz_modular(u: VectorField2D, A: YoungFunction, n: int = 2,
                          numerics: Optional[NumericsConfig] = None) -> ModularResult:
    """Bisection for the smallest feasible constant in the Orlicz modular Sobolev inequality."""
    validate_dimension(n)
    numerics = resolve(numerics)
    ledger = ChoiceLedger()
    domain = u.domain
    rhs = domain.integrate(A.value(symmetric_gradient(u).frobenius()))
    magnitudes = u.magnitude()
    if rhs == 0.0:
        if u.is_zero():
            return ModularResult(0.0, True, 0.0, 0.0)
        ledger.record('rigid-field', "eps(u) vanishes for a nonzero field", 'verify_orlicz_modular')
        return ModularResult(np.inf, False, 0.0, np.inf, tuple(ledger.entries))

    conjugate = sobolev_conjugate(A, n, numerics)
    ledger.extend(conjugate.regularizations)
    A_n = conjugate.young
    scale = rhs ** (1.0 / n)

    def lhs(log_c: float) -> float:
        with np.errstate(over='ignore'):
            return domain.integrate(A_n.value(magnitudes / (np.exp(log_c) * scale)))

    hi = 0.0
    steps = 0
    while lhs(hi) > rhs:
        hi += np.log(2.0)
        steps += 1
        if steps > 400:
            ledger.record('modular-infeasible', "no finite constant found", 'verify_orlicz_modular',
                          level='warning')
            return ModularResult(np.inf, False, rhs, np.inf, tuple(ledger.entries))
    lo = hi - np.log(2.0)
    while lhs(lo) <= rhs and lo > -700.0:
        hi = lo
        lo -= np.log(2.0)
    for _ in range(numerics.bisection.iterations):
        mid = 0.5 * (lo + hi)
        if lhs(mid) <= rhs:
            hi = mid
        else:
            lo = mid
    c = float(np.exp(hi))
    logger.debug(f"Modular inequality for {A.describe()}: c = {c:.6g}")
    return ModularResult(c, True, rhs, lhs(hi), tuple(ledger.entries))


def sobolev_poincare_check(u: VectorField2D, X: NormSpec, Y: NormSpec, n: int = 2,
                           numerics: Optional[NumericsConfig] = None, rigid_tol: float = 1e-10) -> float:
    """
    ||u - R u||_Y / ||eps(u)||_X with R the least-squares rigid projection on the whole domain.

    Returns 0 for rigid fields.

    Raises:
        DomainError: If the domain is not connected
    """
    validate_dimension(n)
    if u.domain.components() != 1:
        raise DomainError(f"Invalid domain: {u.domain.components()} connected components. Must be connected")
    numerics = resolve(numerics)
    eps = symmetric_gradient(u)
    residual = rigid_residual(u, rigid_project(u))
    numerator = norm(Y, field_profile(residual), numerics)
    denominator = norm(X, field_profile(eps), numerics)
    if eps.sup_norm() <= rigid_tol * max(u.sup_norm(), 1.0) / u.domain.h:
        return 0.0
    return numerator / denominator
