"""
Symbolic targets for Young functions of power-log-loglog type.

Pure case analysis: given the behaviour t^p (log t)^alpha (log log t)^beta of A
near infinity (and t^p0 (log 1/t)^alpha0 near zero on the whole space), emit
the optimal Orlicz target and the optimal rearrangement-invariant target as
strings. Nothing is extrapolated; combinations outside the tabulated cases
raise UnsupportedCaseError.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.utils.exceptions import UnsupportedCaseError, ValidationError
from src.utils.validators import validate_dimension

Triple = Tuple[float, float, float]

SETTINGS = ('finite-domain-E10', 'finite-domain-E1', 'Rn-E10', 'Rn-E1')
SETTING_ALIASES = {
    'finite': 'finite-domain-E10',
    'finite-e10': 'finite-domain-E10',
    'finite-e1': 'finite-domain-E1',
    'rn': 'Rn-E10',
    'rn-e10': 'Rn-E10',
    'rn-e1': 'Rn-E1',
}

MODULUS_EXAMPLES = ('linf', 'exp', 'lnlog')


@dataclass(frozen=True)
class AsymptoticClass:
    """
    Power-log-loglog behaviour of a Young function.

    Attributes:
        zero: (p0, alpha0, beta0) for t^p0 (log 1/t)^alpha0 (log log 1/t)^beta0 near 0
        infinity: (p, alpha, beta) for t^p (log t)^alpha (log log t)^beta near infinity
        infinite: True for functions that jump to infinity (L^inf type)
    """

    zero: Triple = (1.0, 0.0, 0.0)
    infinity: Triple = (1.0, 0.0, 0.0)
    infinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'zero', tuple(float(x) for x in self.zero))
        object.__setattr__(self, 'infinity', tuple(float(x) for x in self.infinity))
        if len(self.zero) != 3 or len(self.infinity) != 3:
            raise ValidationError("Invalid asymptotic class: triples must have three entries")
        p, alpha, beta = self.infinity
        if p < 1 or (p == 1 and (alpha < 0 or (alpha == 0 and beta < 0))):
            raise ValidationError(
                f"Invalid asymptotic class near infinity: {self.infinity}. "
                f"Must have p > 1, or p = 1 with alpha >= 0"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AsymptoticClass':
        return cls(
            zero=tuple(data.get('zero', (1.0, 0.0, 0.0))),
            infinity=tuple(data['infinity']),
            infinite=bool(data.get('infinite', False)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {'zero': list(self.zero), 'infinity': list(self.infinity), 'infinite': self.infinite}


@dataclass(frozen=True)
class GrowthLaw:
    """
    Predicted growth of A_n near infinity, used to compare numerics with the table.

    kind 'power': t^exponent (log t)^log_exponent; 'exp': exp(t^exponent);
    'expexp': exp(exp(t^exponent)); 'infinite': A_n jumps to infinity.
    """

    kind: str
    exponent: float = 0.0
    log_exponent: float = 0.0

    def ratio(self, log_value: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Quantity that stays within a fixed bracket when the prediction is right."""
        t = np.asarray(t, dtype=float)
        log_value = np.asarray(log_value, dtype=float)
        if self.kind == 'power':
            return np.exp(log_value - self.exponent * np.log(t) - self.log_exponent * np.log(np.log(t)))
        if self.kind == 'exp':
            return log_value / t ** self.exponent
        if self.kind == 'expexp':
            return np.log(log_value) / t ** self.exponent
        return np.full(t.shape, np.nan)


@dataclass(frozen=True)
class TargetDescriptor:
    """Symbolic optimal targets for one Young-function class and setting."""

    setting: str
    n: int
    orlicz_target: str
    ri_target: Optional[str] = None
    orlicz_near_zero: Optional[str] = None
    orlicz_near_infinity: Optional[str] = None
    ri_near_zero: Optional[str] = None
    ri_near_infinity: Optional[str] = None
    weight: Optional[str] = None
    collapse: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {key: value for key, value in asdict(self).items() if value is not None}


@dataclass(frozen=True)
class ModulusDescriptor:
    """Symbolic modulus of continuity sigma_A(r) near r = 0."""

    example: str
    n: int
    expression: str
    r_exponent: float
    log_exponent: float

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        """r^r_exponent (log 1/r)^log_exponent."""
        r = np.asarray(r, dtype=float)
        return r ** self.r_exponent * np.log(1.0 / r) ** self.log_exponent

    def to_dict(self) -> Dict[str, Any]:
        return {'example': self.example, 'n': self.n, 'modulus': self.expression}


# -- formatting ---------------------------------------------------------------

def fmt(x: float) -> str:
    """Exact rational rendering: 6, 3/2, -1/2, inf."""
    if np.isinf(x):
        return 'inf' if x > 0 else '-inf'
    fraction = Fraction(x).limit_denominator(1000)
    return str(fraction)


def _sup(x: float) -> str:
    text = fmt(x)
    return text if len(text) == 1 else '{' + text + '}'


def _power(base: str, x: float) -> str:
    return f"{base}^{_sup(x)}"


def _with_logs(head: str, alpha: float, beta: float, log: str, loglog: str) -> str:
    parts = [head]
    if alpha != 0:
        parts.append(_power(f"({log})", alpha))
    if beta != 0:
        parts.append(_power(f"({loglog})", beta))
    return ' '.join(parts)


def zygmund_space(q: float, alpha: float = 0.0, beta: float = 0.0) -> str:
    """L^q (log L)^alpha (log log L)^beta."""
    return _with_logs(_power('L', q), alpha, beta, 'log L', 'log log L')


def lorentz_zygmund_space(p: float, q: float, *alphas: float) -> str:
    """L^{p,q;alpha...}; trailing zero log exponents are dropped."""
    inner = f"{fmt(p)},{fmt(q)}"
    alphas = list(alphas)
    while alphas and alphas[-1] == 0:
        alphas.pop()
    if alphas:
        inner += ';' + ','.join(fmt(a) for a in alphas)
    return f"L^{{{inner}}}"


def near_infinity_function(p: float, alpha: float = 0.0, beta: float = 0.0) -> str:
    """t^p (log t)^alpha (log log t)^beta."""
    return _with_logs(_power('t', p), alpha, beta, 'log t', 'log log t')


def near_zero_function(p: float, alpha: float = 0.0, beta: float = 0.0) -> str:
    """t^p (log 1/t)^alpha (log log 1/t)^beta."""
    return _with_logs(_power('t', p), alpha, beta, 'log 1/t', 'log log 1/t')


def canonical_setting(setting: str) -> str:
    """Map a setting name or alias to one of SETTINGS."""
    if setting in SETTINGS:
        return setting
    key = setting.strip().lower()
    if key in SETTING_ALIASES:
        return SETTING_ALIASES[key]
    raise ValidationError(f"Invalid setting: {setting}. Must be one of {SETTINGS + tuple(SETTING_ALIASES)}")


# -- case tables --------------------------------------------------------------

def _check_infinity(p: float, alpha: float) -> None:
    if not (p > 1 or (p == 1 and alpha >= 0)):
        raise UnsupportedCaseError(f"No tabulated case for p={fmt(p)}, alpha={fmt(alpha)} near infinity")


def _check_zero(p0: float, alpha0: float, beta0: float) -> None:
    if beta0 != 0 or not (p0 > 1 or (p0 == 1 and alpha0 <= 0)):
        raise UnsupportedCaseError(
            f"No tabulated case near zero for p0={fmt(p0)}, alpha0={fmt(alpha0)}, beta0={fmt(beta0)}"
        )


def _finite_loglog(p: float, beta: float, n: int, setting: str) -> TargetDescriptor:
    if p < n:
        q = n * p / (n - p)
        return TargetDescriptor(setting, n, zygmund_space(q, 0.0, n * beta / (n - p)))
    if p == n:
        return TargetDescriptor(setting, n, f"exp((log L)^{_sup(beta / (n - 1))})")
    return TargetDescriptor(setting, n, 'L^inf', ri_target='L^inf', collapse=True)


def _finite(cls: AsymptoticClass, n: int, setting: str) -> TargetDescriptor:
    if cls.infinite:
        return TargetDescriptor(setting, n, 'L^inf', ri_target='L^inf', collapse=True)
    p, alpha, beta = cls.infinity
    if beta != 0:
        if alpha != 0:
            raise UnsupportedCaseError(
                f"No tabulated case with both alpha={fmt(alpha)} and beta={fmt(beta)} nonzero"
            )
        return _finite_loglog(p, beta, n, setting)
    _check_infinity(p, alpha)
    if p < n:
        q = n * p / (n - p)
        return TargetDescriptor(
            setting, n,
            zygmund_space(q, n * alpha / (n - p)),
            ri_target=lorentz_zygmund_space(q, p, alpha / p),
        )
    if p == n and alpha < n - 1:
        return TargetDescriptor(
            setting, n,
            f"exp {_power('L', n / (n - 1 - alpha))}",
            ri_target=lorentz_zygmund_space(np.inf, n, -1 + alpha / n),
        )
    if p == n and alpha == n - 1:
        return TargetDescriptor(
            setting, n,
            f"exp exp {_power('L', n / (n - 1))}",
            ri_target=lorentz_zygmund_space(np.inf, n, -1 / n, -1),
        )
    return TargetDescriptor(setting, n, 'L^inf', ri_target='L^inf', collapse=True)


def _sobolev_near_infinity(p: float, alpha: float, n: int) -> Tuple[str, bool]:
    """A_n near infinity on the whole space, and whether it collapses to infinity."""
    if p < n:
        return near_infinity_function(n * p / (n - p), n * alpha / (n - p)), False
    if p == n and alpha < n - 1:
        return f"exp({_power('t', n / (n - alpha - 1))})", False
    if p == n and alpha == n - 1:
        return f"exp(exp({_power('t', n / (n - 1))}))", False
    return 'inf', True


def _hat_near_infinity(p: float, alpha: float, n: int) -> str:
    if p < n:
        return near_infinity_function(p, alpha)
    if alpha < n - 1:
        return near_infinity_function(n, alpha - n)
    return near_infinity_function(n, -1, -n)


def _rn_e10(cls: AsymptoticClass, n: int, setting: str) -> TargetDescriptor:
    p0, alpha0, beta0 = cls.zero
    p, alpha, beta = cls.infinity
    _check_zero(p0, alpha0, beta0)
    if beta != 0:
        raise UnsupportedCaseError("No tabulated whole-space case with a log log factor near infinity")
    _check_infinity(p, alpha)
    if p0 < n:
        orlicz_zero = near_zero_function(n * p0 / (n - p0), n * alpha0 / (n - p0))
        ri_zero = near_zero_function(p0, alpha0)
    elif p0 == n and alpha0 > n - 1:
        orlicz_zero = f"exp(-t^{{-{fmt(n / (alpha0 + 1 - n))}}})"
        ri_zero = near_zero_function(n, alpha0 - n)
    else:
        raise UnsupportedCaseError(
            f"Near-zero integrability fails for p0={fmt(p0)}, alpha0={fmt(alpha0)}, n={n}"
        )
    if cls.infinite:
        orlicz_inf, collapse = 'inf', True
    else:
        orlicz_inf, collapse = _sobolev_near_infinity(p, alpha, n)
    weight = f"min{{s^{{-1/{n}}},1}}"
    if collapse:
        return TargetDescriptor(
            setting, n, 'L^{A_n}', ri_target='L^B(nu)',
            orlicz_near_zero=orlicz_zero, orlicz_near_infinity=orlicz_inf,
            ri_near_zero=ri_zero, ri_near_infinity='inf', weight=weight, collapse=True,
        )
    return TargetDescriptor(
        setting, n, 'L^{A_n}', ri_target=f"L(Ahat,{n})",
        orlicz_near_zero=orlicz_zero, orlicz_near_infinity=orlicz_inf,
        ri_near_zero=ri_zero, ri_near_infinity=_hat_near_infinity(p, alpha, n),
    )


def _rn_e1(cls: AsymptoticClass, n: int, setting: str) -> TargetDescriptor:
    p0, alpha0, beta0 = cls.zero
    p, alpha, beta = cls.infinity
    _check_zero(p0, alpha0, beta0)
    if beta != 0:
        raise UnsupportedCaseError("No tabulated whole-space case with a log log factor near infinity")
    _check_infinity(p, alpha)
    near_zero = near_zero_function(p0, alpha0)
    if cls.infinite:
        near_inf, collapse = 'inf', True
    else:
        near_inf, collapse = _sobolev_near_infinity(p, alpha, n)
    if collapse:
        local = zygmund_space(p0) if alpha0 == 0 else _with_logs(_power('L', p0), alpha0, 0.0, 'log 1/L', '')
        target = f"L^inf ∩ {local}"
        return TargetDescriptor(
            setting, n, target, ri_target=target,
            orlicz_near_zero=near_zero, orlicz_near_infinity=near_inf, collapse=True,
        )
    return TargetDescriptor(
        setting, n, 'L^{Abar_n}', ri_target='Lambda^D(varpi)',
        orlicz_near_zero=near_zero, orlicz_near_infinity=near_inf,
        ri_near_zero=near_zero, ri_near_infinity=_hat_near_infinity(p, alpha, n),
        weight=f"max{{s^{{-1/{n}}},1}}",
    )


def zygmund_table(cls: AsymptoticClass, n: int, setting: str = 'finite-domain-E10') -> TargetDescriptor:
    """
    Optimal Orlicz and rearrangement-invariant targets for a power-log class.

    Args:
        cls: Asymptotic class of the Young function
        n: Dimension (>= 2)
        setting: One of SETTINGS or an alias such as 'finite' or 'rn-e1'

    Returns:
        TargetDescriptor with string-valued targets

    Raises:
        UnsupportedCaseError: If the class lies outside every tabulated case
    """
    validate_dimension(n)
    setting = canonical_setting(setting)
    if setting.startswith('finite'):
        return _finite(cls, n, setting)
    if setting == 'Rn-E10':
        return _rn_e10(cls, n, setting)
    return _rn_e1(cls, n, setting)


def growth_law(cls: AsymptoticClass, n: int) -> GrowthLaw:
    """Predicted growth of A_n near infinity for the finite-domain table."""
    validate_dimension(n)
    if cls.infinite:
        return GrowthLaw('infinite')
    p, alpha, beta = cls.infinity
    if beta != 0:
        raise UnsupportedCaseError("Growth laws are tabulated for log factors only")
    _check_infinity(p, alpha)
    if p < n:
        return GrowthLaw('power', n * p / (n - p), n * alpha / (n - p))
    if p == n and alpha < n - 1:
        return GrowthLaw('exp', n / (n - 1 - alpha))
    if p == n and alpha == n - 1:
        return GrowthLaw('expexp', n / (n - 1))
    return GrowthLaw('infinite')


def modulus_table(example: str, n: int, beta: Optional[float] = None,
                  alpha: Optional[float] = None) -> ModulusDescriptor:
    """
    Modulus of continuity sigma_A(r) near 0 for the three worked examples.

    Args:
        example: 'linf' (A = L^inf indicator), 'exp' (A = exp(t^beta) - 1) or
                 'lnlog' (A = t^n (log t)^alpha with alpha > n - 1)
        n: Dimension
        beta: Exponent for 'exp'
        alpha: Log exponent for 'lnlog'

    Raises:
        UnsupportedCaseError: For unknown examples or parameters outside their range
    """
    validate_dimension(n)
    if example == 'linf':
        return ModulusDescriptor(example, n, "r log(1/r)", 1.0, 1.0)
    if example == 'exp':
        if beta is None or beta <= 0:
            raise UnsupportedCaseError(f"Example 'exp' needs beta > 0, got {beta}")
        power = 1 + 1 / beta
        return ModulusDescriptor(example, n, f"r (log(1/r))^{_sup(power)}", 1.0, power)
    if example == 'lnlog':
        if alpha is None or alpha <= n - 1:
            raise UnsupportedCaseError(f"Example 'lnlog' needs alpha > n - 1, got {alpha}")
        power = (n - 1 - alpha) / n
        return ModulusDescriptor(example, n, f"(log(1/r))^{_sup(power)}", 0.0, power)
    raise UnsupportedCaseError(f"No modulus table for example {example}. Must be one of {MODULUS_EXAMPLES}")
