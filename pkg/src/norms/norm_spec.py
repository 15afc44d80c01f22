"""
Descriptions of rearrangement-invariant function norms on (0, L).

A NormSpec only carries parameters; evaluation lives in src.norms.ri_norms.
"""

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.config.settings import NumericsConfig
from src.numerics.quadrature import log_axis_integral
from src.utils.exceptions import UnsupportedSpaceError, ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_choice, validate_positive_number
from src.young.young_function import YoungFunction, parse_young, young_from_dict

logger = get_logger(__name__)


class NormFamily(str, Enum):
    """Supported norm families."""

    LEBESGUE = 'lebesgue'
    LORENTZ = 'lorentz'
    LORENTZ_ZYGMUND = 'lorentz-zygmund'
    GLZ = 'glz'
    ORLICZ = 'orlicz'
    ORLICZ_LORENTZ = 'orlicz-lorentz'
    LAMBDA = 'lambda'


WEIGHT_KINDS = ('table', 'power', 'power-max', 'power-min')


def _parse_exponent(value: Any, name: str) -> float:
    if isinstance(value, str) and value.strip().lower() in ('inf', 'infinity'):
        return float('inf')
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Invalid {name}: {value}. Must be a number or 'inf'") from e


def _dump_exponent(value: float) -> Any:
    return 'inf' if np.isinf(value) else float(value)


@dataclass(frozen=True, eq=False)
class WeightTable:
    """
    Positive weight nu on (0, L).

    Kinds:
        table: nu = values[i] on (breakpoints[i-1], breakpoints[i]], last value beyond
        power: nu(s) = s^{-exponent}
        power-max: nu(s) = max{s^{-exponent}, 1}
        power-min: nu(s) = min{s^{-exponent}, 1}
    """

    kind: str
    breakpoints: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    exponent: float = 0.0

    def __post_init__(self):
        validate_choice(self.kind, WEIGHT_KINDS, "weight kind")
        if self.kind == 'table':
            breaks = np.asarray(self.breakpoints, dtype=float).ravel()
            values = np.asarray(self.values, dtype=float).ravel()
            if breaks.size == 0 or breaks.shape != values.shape:
                raise ValidationError("Invalid weight table: breakpoints and values must be nonempty and match")
            if breaks[0] <= 0 or np.any(np.diff(breaks) <= 0):
                raise ValidationError("Invalid weight table breakpoints: must be positive and strictly increasing")
            if not np.all(np.isfinite(values)) or np.any(values <= 0):
                raise ValidationError("Invalid weight table values: must be finite and > 0")
            object.__setattr__(self, 'breakpoints', breaks)
            object.__setattr__(self, 'values', values)
        elif not np.isfinite(self.exponent):
            raise ValidationError(f"Invalid weight exponent: {self.exponent}. Must be finite")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> 'WeightTable':
        data = np.asarray(rows, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValidationError("Invalid weight rows: expected [[s, v], ...]")
        return cls('table', data[:, 0], data[:, 1])

    @classmethod
    def power(cls, exponent: float) -> 'WeightTable':
        return cls('power', exponent=float(exponent))

    @classmethod
    def power_max(cls, exponent: float) -> 'WeightTable':
        """max{s^{-exponent}, 1}."""
        return cls('power-max', exponent=float(exponent))

    @classmethod
    def power_min(cls, exponent: float) -> 'WeightTable':
        """min{s^{-exponent}, 1}."""
        return cls('power-min', exponent=float(exponent))

    def log_at(self, x: np.ndarray) -> np.ndarray:
        """log nu(e^x)."""
        x = np.asarray(x, dtype=float)
        if self.kind == 'table':
            with np.errstate(over='ignore'):
                index = np.searchsorted(self.breakpoints, np.exp(x), side='left')
            return np.log(self.values[np.minimum(index, self.values.size - 1)])
        power = -self.exponent * x
        if self.kind == 'power':
            return power
        if self.kind == 'power-max':
            return np.maximum(power, 0.0)
        return np.minimum(power, 0.0)

    def __call__(self, s) -> np.ndarray:
        return np.exp(self.log_at(np.log(np.asarray(s, dtype=float))))

    @property
    def nonincreasing(self) -> bool:
        if self.kind == 'table':
            return bool(np.all(np.diff(self.values) <= 0))
        return self.exponent >= 0

    def breaks(self) -> np.ndarray:
        """Points where nu is not smooth."""
        if self.kind == 'table':
            return self.breakpoints
        if self.kind == 'power':
            return np.zeros(0)
        return np.array([1.0])

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == 'table':
            return {'kind': 'table', 'rows': [[float(s), float(v)] for s, v in zip(self.breakpoints, self.values)]}
        return {'kind': self.kind, 'exponent': self.exponent}

    @classmethod
    def from_dict(cls, data: Any) -> 'WeightTable':
        if isinstance(data, list):
            return cls.from_rows(data)
        if not isinstance(data, dict) or 'kind' not in data:
            raise ValidationError(f"Invalid weight description: {data}")
        if data['kind'] == 'table':
            return cls.from_rows(data['rows'])
        return cls(data['kind'], exponent=float(data.get('exponent', 0.0)))

    def describe(self) -> str:
        if self.kind == 'table':
            return f"nu[{self.values.size} steps]"
        e = f"{self.exponent:g}"
        if self.kind == 'power':
            return f"s^-{e}"
        return f"{'max' if self.kind == 'power-max' else 'min'}{{s^-{e},1}}"


def _lorentz_admissible(p: float, q: float) -> bool:
    return (1 < p < np.inf and 1 <= q <= np.inf) or (p == q and p in (1.0, np.inf))


def _lorentz_zygmund_admissible(p: float, q: float, alpha: float) -> bool:
    if 1 < p < np.inf:
        return 1 <= q <= np.inf
    if p == 1.0:
        return q == 1.0 and alpha >= 0
    if p == np.inf:
        if q == np.inf:
            return alpha <= 0
        return 1 <= q and alpha + 1.0 / q < 0
    return False


def power_tail_integrable(A: YoungFunction, q: float, numerics: Optional[NumericsConfig] = None) -> bool:
    """Numerical test of the convergence of the integral of A(t)/t^{1+q} at infinity."""
    if not A.is_finite_valued():
        return False
    return log_axis_integral(lambda u: A.log_value(u) - q * np.asarray(u, dtype=float), 0.0, numerics).convergent


@dataclass(frozen=True, eq=False)
class NormSpec:
    """
    Tagged description of a rearrangement-invariant norm on (0, L).

    Attributes:
        family: Norm family
        L: Interval length, possibly inf
        p, q, alpha: Lebesgue/Lorentz/Zygmund parameters (q also for Orlicz-Lorentz)
        young: Young function of the Orlicz-type families
        weight: Weight of the Lambda family
        cut: For extended norms on (0, inf), profiles are cut at this length first
    """

    family: NormFamily
    L: float = float('inf')
    p: Optional[float] = None
    q: Optional[float] = None
    alpha: float = 0.0
    young: Optional[YoungFunction] = None
    weight: Optional[WeightTable] = None
    cut: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'family', NormFamily(self.family))
        if not (self.L > 0):
            raise ValidationError(f"Invalid L: {self.L}. Must be > 0")
        family = self.family
        if family == NormFamily.LEBESGUE:
            if self.p is None or not (1 <= self.p <= np.inf):
                raise UnsupportedSpaceError(f"Unsupported Lebesgue exponent: p={self.p}. Must be in [1, inf]")
        elif family == NormFamily.LORENTZ:
            if self.p is None or self.q is None or not _lorentz_admissible(self.p, self.q):
                raise UnsupportedSpaceError(
                    f"Unsupported Lorentz parameters: p={self.p}, q={self.q}. "
                    f"Need 1<p<inf and 1<=q<=inf, or p=q in {{1, inf}}"
                )
        elif family == NormFamily.LORENTZ_ZYGMUND:
            if not np.isfinite(self.L):
                raise UnsupportedSpaceError("Unsupported Lorentz-Zygmund space on (0, inf): L must be finite")
            if self.p is None or self.q is None or not _lorentz_zygmund_admissible(self.p, self.q, self.alpha):
                raise UnsupportedSpaceError(
                    f"Unsupported Lorentz-Zygmund parameters: p={self.p}, q={self.q}, alpha={self.alpha}"
                )
        elif family == NormFamily.GLZ:
            if not np.isfinite(self.L):
                raise UnsupportedSpaceError("Unsupported GLZ space on (0, inf): L must be finite")
            if self.p is None or not (1 < self.p < np.inf):
                raise UnsupportedSpaceError(f"Unsupported GLZ exponent: p={self.p}. Must be in (1, inf)")
        elif family in (NormFamily.ORLICZ, NormFamily.ORLICZ_LORENTZ, NormFamily.LAMBDA):
            if not isinstance(self.young, YoungFunction):
                raise ValidationError(f"Invalid {family.value} norm: a Young function is required")
            if family == NormFamily.ORLICZ_LORENTZ:
                if self.q is None or not (1 < self.q < np.inf):
                    raise UnsupportedSpaceError(f"Unsupported Orlicz-Lorentz index: q={self.q}. Must be in (1, inf)")
                if not power_tail_integrable(self.young, self.q, self.young.numerics):
                    raise UnsupportedSpaceError(
                        f"Unsupported Orlicz-Lorentz space L({self.young.describe()}, {self.q:g}): "
                        f"the integral of A(t)/t^(1+q) diverges at infinity"
                    )
            if family == NormFamily.LAMBDA and not isinstance(self.weight, WeightTable):
                raise ValidationError("Invalid lambda norm: a weight is required")
            if family == NormFamily.LAMBDA and not self.weight.nonincreasing:
                logger.warning(f"Weight {self.weight.describe()} increases somewhere; "
                               f"Lambda norm may fail the triangle inequality")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def lebesgue(cls, p: float, L: float = float('inf')) -> 'NormSpec':
        return cls(NormFamily.LEBESGUE, L=L, p=float(p))

    @classmethod
    def lorentz(cls, p: float, q: float, L: float = float('inf')) -> 'NormSpec':
        return cls(NormFamily.LORENTZ, L=L, p=float(p), q=float(q))

    @classmethod
    def lorentz_zygmund(cls, p: float, q: float, alpha: float, L: float = 1.0) -> 'NormSpec':
        return cls(NormFamily.LORENTZ_ZYGMUND, L=L, p=float(p), q=float(q), alpha=float(alpha))

    @classmethod
    def glz(cls, p: float, L: float = 1.0) -> 'NormSpec':
        return cls(NormFamily.GLZ, L=L, p=float(p))

    @classmethod
    def orlicz(cls, young: YoungFunction, L: float = float('inf')) -> 'NormSpec':
        return cls(NormFamily.ORLICZ, L=L, young=young)

    @classmethod
    def orlicz_lorentz(cls, young: YoungFunction, q: float, L: float = float('inf')) -> 'NormSpec':
        return cls(NormFamily.ORLICZ_LORENTZ, L=L, young=young, q=float(q))

    @classmethod
    def lambda_weighted(cls, young: YoungFunction, weight: WeightTable, L: float = float('inf')) -> 'NormSpec':
        return cls(NormFamily.LAMBDA, L=L, young=young, weight=weight)

    # -- derived norms ----------------------------------------------------------

    @property
    def depends_on_length(self) -> bool:
        return self.family in (NormFamily.LORENTZ_ZYGMUND, NormFamily.GLZ)

    def with_length(self, L: float) -> 'NormSpec':
        return replace(self, L=float(L))

    def localized(self, L: float) -> 'NormSpec':
        """X_r(0, L): ||f||_{X_r(0,L)} = ||f*||_{X(0,inf)} for f supported in (0, L)."""
        validate_positive_number(L, "L", strict=True)
        if self.depends_on_length:
            raise UnsupportedSpaceError(f"Cannot localize {self.describe()}: the norm depends on the interval length")
        return replace(self, L=float(L), cut=None)

    def extended(self) -> 'NormSpec':
        """X_e(0, inf): ||f||_{X_e(0,inf)} = ||f* restricted to (0, L)||_{X(0,L)}."""
        if not np.isfinite(self.L):
            return self
        return replace(self, cut=self.L)

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'family': self.family.value}
        if self.p is not None:
            data['p'] = _dump_exponent(self.p)
        if self.q is not None:
            data['q'] = _dump_exponent(self.q)
        if self.family == NormFamily.LORENTZ_ZYGMUND:
            data['alpha'] = self.alpha
        if self.young is not None:
            data['young'] = self.young.to_dict()
        if self.weight is not None:
            data['weight'] = self.weight.to_dict()
        data['L'] = _dump_exponent(self.L)
        if self.cut is not None:
            data['extended'] = True
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None,
                  numerics: Optional[NumericsConfig] = None) -> 'NormSpec':
        """
        Build a NormSpec from its JSON description.

        Examples:
            {"family": "lorentz", "p": 2.0, "q": 1.0, "L": 1.0}
            {"family": "orlicz", "young": {"kind": "power", "p": 2.0}, "L": 1.0}
            {"family": "lambda", "young": {...}, "weight": [[s, v], ...]}
        """
        if not isinstance(data, dict) or 'family' not in data:
            raise ValidationError(f"Invalid norm description: {data}")
        try:
            family = NormFamily(str(data['family']).lower())
        except ValueError as e:
            raise UnsupportedSpaceError(f"Unsupported norm family: {data['family']}") from e
        L = _parse_exponent(data.get('L', 'inf'), 'L')
        young = None
        if 'young' in data:
            young_data = data['young']
            young = (parse_young(young_data, numerics) if isinstance(young_data, str)
                     else young_from_dict(young_data, base_dir, numerics))
        weight = WeightTable.from_dict(data['weight']) if 'weight' in data else None
        p = _parse_exponent(data['p'], 'p') if 'p' in data else None
        q = _parse_exponent(data['q'], 'q') if 'q' in data else None
        spec = cls(family, L=L, p=p, q=q, alpha=float(data.get('alpha', 0.0)), young=young, weight=weight)
        return spec.extended() if data.get('extended') else spec

    def describe(self) -> str:
        interval = f"(0,{'inf' if np.isinf(self.L) else f'{self.L:g}'})"
        family = self.family
        if family == NormFamily.LEBESGUE:
            body = f"L^{self.p:g}"
        elif family == NormFamily.LORENTZ:
            body = f"L^{{{self.p:g},{self.q:g}}}"
        elif family == NormFamily.LORENTZ_ZYGMUND:
            body = f"L^{{{self.p:g},{self.q:g};{self.alpha:g}}}"
        elif family == NormFamily.GLZ:
            body = f"L^{{inf,{self.p:g};-1/{self.p:g},-1}}"
        elif family == NormFamily.ORLICZ:
            body = f"L^A[{self.young.describe()}]"
        elif family == NormFamily.ORLICZ_LORENTZ:
            body = f"L(A,{self.q:g})[{self.young.describe()}]"
        else:
            body = f"Lambda^A({self.weight.describe()})[{self.young.describe()}]"
        suffix = '_e' if self.cut is not None else ''
        return f"{body}{suffix}{interval}"

    def __repr__(self) -> str:
        return f"NormSpec({self.describe()})"


_SHORTHAND = {
    'lebesgue': ('p',),
    'lorentz': ('p', 'q'),
    'lz': ('p', 'q', 'alpha'),
    'lorentz-zygmund': ('p', 'q', 'alpha'),
    'glz': ('p',),
}


def parse_norm(text: str, L: Optional[float] = None, numerics: Optional[NumericsConfig] = None) -> NormSpec:
    """
    Parse a norm from JSON or from the shorthand used on the command line.

    Shorthand: `lebesgue:2`, `lorentz:2,1`, `lz:inf,2,-0.5`, `glz:2`,
    `orlicz:<young>`, `orlicz-lorentz:<q>:<young>`; `L` overrides the interval.
    """
    text = text.strip()
    if text.startswith('{'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Invalid norm JSON: {e}") from e
        if L is not None:
            data['L'] = L
        return NormSpec.from_dict(data, numerics=numerics)
    family, _, rest = text.partition(':')
    family = family.strip().lower()
    length = float('inf') if L is None else float(L)
    if family == 'orlicz':
        return NormSpec.orlicz(parse_young(rest, numerics), L=length)
    if family == 'orlicz-lorentz':
        q, _, young = rest.partition(':')
        return NormSpec.orlicz_lorentz(parse_young(young, numerics), _parse_exponent(q, 'q'), L=length)
    if family not in _SHORTHAND:
        raise UnsupportedSpaceError(f"Unsupported norm family: {family}")
    names = _SHORTHAND[family]
    args = [_parse_exponent(x, name) for x, name in zip(rest.split(','), names)] if rest.strip() else []
    if len(args) != len(names):
        raise ValidationError(f"Invalid norm {text}: expected parameters {names}")
    params = dict(zip(names, args))
    if family == 'lebesgue':
        return NormSpec.lebesgue(params['p'], L=length)
    if family == 'lorentz':
        return NormSpec.lorentz(params['p'], params['q'], L=length)
    if family == 'glz':
        return NormSpec.glz(params['p'], L=1.0 if L is None else length)
    return NormSpec.lorentz_zygmund(params['p'], params['q'], params['alpha'], L=1.0 if L is None else length)
