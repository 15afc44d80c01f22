"""
Young functions A(t) = integral of a nondecreasing left-continuous density a over (0, t).

Every kind evaluates in logarithmic coordinates: log_value(u) = log A(e^u) and
log_density(u) = log a(e^u). Orlicz modulars, conjugates and Sobolev conjugates
routinely overflow double precision in t but stay finite in u.
"""

import csv
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from src.config.settings import NumericsConfig, resolve
from src.numerics.inversion import bisect_first_reach
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.utils.validators import validate_choice, validate_exponent, validate_positive_number
from src.young.zygmund_table import AsymptoticClass

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

YOUNG_KINDS = ('power', 'powerlog', 'powerloglog', 'exppower', 'linf', 'table')

# log A(e^u) is evaluated by exp(u) directly up to this point
_EXP_SAFE = 700.0


def _flat(values: ArrayLike) -> Tuple[np.ndarray, Tuple[int, ...]]:
    array = np.asarray(values, dtype=float)
    return array.ravel(), array.shape


def _log_add_offset(log_f: np.ndarray, offset: float) -> np.ndarray:
    """log(exp(log_f) + offset) for a possibly negative offset with exp(log_f) + offset > 0."""
    log_f = np.asarray(log_f, dtype=float)
    if offset == 0:
        return log_f
    with np.errstate(divide='ignore', invalid='ignore'):
        if offset > 0:
            return np.logaddexp(log_f, np.log(offset))
        ratio = np.exp(np.log(-offset) - log_f)
        out = log_f + np.log1p(-np.minimum(ratio, 1.0))
    return np.where(np.isposinf(log_f), np.inf, out)


class YoungFunction(ABC):
    """
    Base class for Young functions.

    Subclasses implement log_value and log_density; inverses, conjugate values
    and evaluation in t are derived here.
    """

    kind: str = 'abstract'
    # choices that fired while constructing a derived function
    regularizations: Tuple[Any, ...] = ()

    def __init__(self, numerics: Optional[NumericsConfig] = None):
        self._numerics = numerics

    @property
    def numerics(self) -> NumericsConfig:
        return resolve(self._numerics)

    @abstractmethod
    def log_value(self, u: ArrayLike) -> np.ndarray:
        """log A(e^u); -inf where A vanishes and +inf where A is infinite."""

    @abstractmethod
    def log_density(self, u: ArrayLike) -> np.ndarray:
        """log a(e^u) for the left-continuous density."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON description of the function."""

    def describe(self) -> str:
        return self.kind

    def asymptotics(self) -> Optional[AsymptoticClass]:
        """Power-log class near zero and near infinity, when the kind has one."""
        return None

    # -- derived evaluation -------------------------------------------------

    def log_density_inverse(self, v: ArrayLike) -> np.ndarray:
        """log a^{-1}(e^v) for the generalized left-continuous inverse inf{tau: a(tau) >= e^v}."""
        bisection = self.numerics.bisection
        return bisect_first_reach(
            self.log_density, np.asarray(v, dtype=float),
            -bisection.log_bracket, bisection.log_bracket, bisection.iterations
        )

    def log_conjugate_value(self, v: ArrayLike) -> np.ndarray:
        """
        log of the Young conjugate at t = e^v.

        Uses the Legendre identity conj(t) = t a^{-1}(t) - A(a^{-1}(t)).
        """
        v, shape = _flat(v)
        u_star = np.asarray(self.log_density_inverse(v), dtype=float).ravel()
        out = np.full(v.shape, np.nan)
        out = np.where(np.isneginf(u_star), -np.inf, out)
        out = np.where(np.isposinf(u_star), np.inf, out)
        finite = np.isfinite(u_star)
        if np.any(finite):
            vf = v[finite]
            uf = u_star[finite]
            with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
                gap = np.minimum(np.asarray(self.log_value(uf), dtype=float) - vf - uf, 0.0)
                out[finite] = vf + uf + np.log1p(-np.exp(gap))
        return out.reshape(shape)

    def value(self, t: ArrayLike) -> np.ndarray:
        """A(t)."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide='ignore', over='ignore'):
            out = np.exp(self.log_value(np.log(np.where(t > 0, t, 1.0))))
        return np.where(t > 0, out, 0.0)

    def density(self, t: ArrayLike) -> np.ndarray:
        """a(t); a(0) is reported as the limit a(0+)."""
        t = np.asarray(t, dtype=float)
        floor = -self.numerics.bisection.log_bracket
        with np.errstate(divide='ignore', over='ignore'):
            return np.exp(self.log_density(np.where(t > 0, np.log(np.where(t > 0, t, 1.0)), floor)))

    def density_inverse(self, y: ArrayLike) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        with np.errstate(divide='ignore', over='ignore'):
            return np.where(y > 0, np.exp(self.log_density_inverse(np.log(np.where(y > 0, y, 1.0)))), 0.0)

    def conjugate_value(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide='ignore', over='ignore'):
            out = np.exp(self.log_conjugate_value(np.log(np.where(t > 0, t, 1.0))))
        return np.where(t > 0, out, 0.0)

    def is_finite_valued(self) -> bool:
        """True unless A jumps to infinity at a finite point."""
        return bool(np.isfinite(self.log_value(np.array([self.numerics.bisection.log_bracket])))[0])

    def flat_stretches(self, decades: float) -> List[Tuple[float, float]]:
        """Intervals where the density is constant over more than `decades` decades."""
        return []

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"


class PowerYoung(YoungFunction):
    """A(t) = coef * t^p with p >= 1."""

    kind = 'power'

    def __init__(self, p: float, coef: float = 1.0, numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics)
        validate_exponent(p, "p", allow_infinity=False)
        validate_positive_number(coef, "coef", strict=True)
        self.p = float(p)
        self.coef = float(coef)

    def log_value(self, u):
        return np.log(self.coef) + self.p * np.asarray(u, dtype=float)

    def log_density(self, u):
        return np.log(self.coef * self.p) + (self.p - 1.0) * np.asarray(u, dtype=float)

    def log_density_inverse(self, v):
        v = np.asarray(v, dtype=float)
        if self.p == 1.0:
            return np.where(v <= np.log(self.coef), -np.inf, np.inf)
        return (v - np.log(self.coef * self.p)) / (self.p - 1.0)

    def asymptotics(self):
        return AsymptoticClass(zero=(self.p, 0.0, 0.0), infinity=(self.p, 0.0, 0.0))

    def to_dict(self):
        data = {'kind': self.kind, 'p': self.p}
        if self.coef != 1.0:
            data['coef'] = self.coef
        return data

    def describe(self):
        prefix = '' if self.coef == 1.0 else f"{self.coef:g}*"
        return f"{prefix}t^{self.p:g}"


class CutoffYoung(YoungFunction):
    """
    Closed-form primitive F above a cutoff t0, linear density ramp below it.

    A(t) = a(t0) t^2 / (2 t0) on (0, t0) and A(t) = A(t0) + F(t) - F(t0) beyond.
    When t0 is not given it is the first point of a geometric grid on
    [e, 1e12] after which the raw density F' stays positive and nondecreasing.
    """

    _CUTOFF_GRID = np.log(np.geomspace(np.e, 1e12, 1201))

    def __init__(self, t0: Optional[float] = None, numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics)
        if t0 is None:
            t0 = self._auto_cutoff()
        validate_positive_number(t0, "t0", strict=True)
        self.t0 = float(t0)
        self._u0 = float(np.log(self.t0))
        log_a0 = float(self._log_raw_density(np.array([self._u0]))[0])
        if not np.isfinite(log_a0):
            raise ValidationError(f"Invalid t0: {t0}. Density must be positive and finite there")
        self._log_a0 = log_a0
        # A(t0) for the ramp and the primitive offset above t0
        self._log_A0 = log_a0 + self._u0 - np.log(2.0)
        self._offset = float(np.exp(self._log_A0) - np.exp(self._log_raw_primitive(np.array([self._u0]))[0]))

    @abstractmethod
    def _log_raw_primitive(self, u: np.ndarray) -> np.ndarray:
        """log F(e^u) where the closed form is valid."""

    @abstractmethod
    def _log_raw_density(self, u: np.ndarray) -> np.ndarray:
        """log F'(e^u); nan or -inf where the closed form is invalid."""

    def _auto_cutoff(self) -> float:
        with np.errstate(invalid='ignore', divide='ignore'):
            raw = np.asarray(self._log_raw_density(self._CUTOFF_GRID), dtype=float)
        bad = ~np.isfinite(raw)
        bad[:-1] |= np.diff(raw) < 0
        indices = np.nonzero(bad)[0]
        start = int(indices[-1]) + 1 if indices.size else 0
        if start >= raw.size:
            raise ValidationError(f"Invalid {self.kind} parameters: density not eventually nondecreasing")
        return float(np.exp(self._CUTOFF_GRID[start]))

    def log_value(self, u):
        u, shape = _flat(u)
        below = u < self._u0
        out = np.empty(u.shape)
        out[below] = self._log_a0 - self._u0 - np.log(2.0) + 2.0 * u[below]
        if np.any(~below):
            with np.errstate(invalid='ignore', over='ignore'):
                out[~below] = _log_add_offset(self._log_raw_primitive(u[~below]), self._offset)
        return out.reshape(shape)

    def log_density(self, u):
        u, shape = _flat(u)
        below = u < self._u0
        out = np.empty(u.shape)
        out[below] = self._log_a0 - self._u0 + u[below]
        if np.any(~below):
            with np.errstate(invalid='ignore', over='ignore'):
                out[~below] = self._log_raw_density(u[~below])
        return out.reshape(shape)


class PowerLogYoung(CutoffYoung):
    """A(t) ~ t^p (log t)^alpha near infinity."""

    kind = 'powerlog'

    def __init__(self, p: float, alpha: float, t0: Optional[float] = None,
                 numerics: Optional[NumericsConfig] = None):
        validate_exponent(p, "p", allow_infinity=False)
        if p == 1.0 and alpha < 0:
            raise ValidationError(f"Invalid alpha: {alpha}. Must be >= 0 when p = 1")
        self.p = float(p)
        self.alpha = float(alpha)
        super().__init__(t0, numerics)

    def _log_raw_primitive(self, u):
        return self.p * u + self.alpha * np.log(u)

    def _log_raw_density(self, u):
        return (self.p - 1.0) * u + (self.alpha - 1.0) * np.log(u) + np.log(self.p * u + self.alpha)

    def asymptotics(self):
        return AsymptoticClass(zero=(2.0, 0.0, 0.0), infinity=(self.p, self.alpha, 0.0))

    def to_dict(self):
        return {'kind': self.kind, 'p': self.p, 'alpha': self.alpha, 't0': self.t0}

    def describe(self):
        return f"t^{self.p:g} (log t)^{self.alpha:g}"


class PowerLogLogYoung(CutoffYoung):
    """A(t) ~ t^p (log t)^alpha (log log t)^beta near infinity."""

    kind = 'powerloglog'

    def __init__(self, p: float, alpha: float, beta: float, t0: Optional[float] = None,
                 numerics: Optional[NumericsConfig] = None):
        validate_exponent(p, "p", allow_infinity=False)
        if p == 1.0 and (alpha < 0 or (alpha == 0 and beta < 0)):
            raise ValidationError(f"Invalid exponents for p = 1: alpha={alpha}, beta={beta}")
        self.p = float(p)
        self.alpha = float(alpha)
        self.beta = float(beta)
        super().__init__(t0, numerics)

    def _log_raw_primitive(self, u):
        return self.p * u + self.alpha * np.log(u) + self.beta * np.log(np.log(u))

    def _log_raw_density(self, u):
        log_u = np.log(u)
        factor = self.p + self.alpha / u + self.beta / (u * log_u)
        return ((self.p - 1.0) * u + self.alpha * log_u + self.beta * np.log(log_u)
                + np.log(factor))

    def asymptotics(self):
        return AsymptoticClass(zero=(2.0, 0.0, 0.0), infinity=(self.p, self.alpha, self.beta))

    def to_dict(self):
        return {'kind': self.kind, 'p': self.p, 'alpha': self.alpha, 'beta': self.beta, 't0': self.t0}

    def describe(self):
        return f"t^{self.p:g} (log t)^{self.alpha:g} (log log t)^{self.beta:g}"


class ExpPowerYoung(CutoffYoung):
    """A(t) = exp(t^beta) - 1; a density ramp replaces the nonconvex start when beta < 1."""

    kind = 'exppower'

    def __init__(self, beta: float, t0: Optional[float] = None,
                 numerics: Optional[NumericsConfig] = None):
        validate_positive_number(beta, "beta", strict=True)
        self.beta = float(beta)
        if self.beta >= 1.0:
            YoungFunction.__init__(self, numerics)
            self.t0 = 0.0
            self._u0 = -np.inf
            self._log_a0 = -np.inf
            self._offset = 0.0
        else:
            super().__init__(t0, numerics)

    def _log_raw_primitive(self, u):
        with np.errstate(over='ignore', divide='ignore'):
            x = np.exp(self.beta * u)
            return np.where(x > 30.0, x + np.log1p(-np.exp(-np.minimum(x, 700.0))),
                            np.log(np.expm1(np.minimum(x, 30.0))))

    def _log_raw_density(self, u):
        with np.errstate(over='ignore'):
            return np.log(self.beta) + (self.beta - 1.0) * u + np.exp(self.beta * u)

    def asymptotics(self):
        return None

    def to_dict(self):
        data = {'kind': self.kind, 'beta': self.beta}
        if self.beta < 1.0:
            data['t0'] = self.t0
        return data

    def describe(self):
        return f"exp(t^{self.beta:g}) - 1"


class LinfYoung(YoungFunction):
    """A(t) = 0 on [0, 1] and infinity beyond; L^A = L^inf."""

    kind = 'linf'

    def log_value(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u <= 0.0, -np.inf, np.inf)

    def log_density(self, u):
        return self.log_value(u)

    def log_density_inverse(self, v):
        return np.zeros(np.shape(v))

    def is_finite_valued(self) -> bool:
        return False

    def asymptotics(self):
        return AsymptoticClass(zero=(1.0, 0.0, 0.0), infinity=(1.0, 0.0, 0.0), infinite=True)

    def to_dict(self):
        return {'kind': self.kind}

    def describe(self):
        return "chi_(1,inf) * inf"


class TableYoung(YoungFunction):
    """
    Step density: a = values[i] on (breakpoints[i-1], breakpoints[i]], `tail` beyond.

    The tail defaults to the last value; an infinite tail makes A infinite past
    the last breakpoint. The conjugate of a table is again a table.
    """

    kind = 'table'

    def __init__(self, breakpoints, values, tail: Optional[float] = None,
                 source: Optional[str] = None, numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics)
        breaks = np.asarray(breakpoints, dtype=float).ravel()
        values = np.asarray(values, dtype=float).ravel()
        if breaks.shape != values.shape:
            raise ValidationError("Invalid table: breakpoints and values differ in length")
        if breaks.size and (breaks[0] <= 0 or np.any(np.diff(breaks) <= 0) or not np.all(np.isfinite(breaks))):
            raise ValidationError("Invalid table breakpoints: must be positive and strictly increasing")
        if np.any(np.isnan(values)) or np.any(values < 0) or np.any(np.isinf(values)):
            raise ValidationError("Invalid table density: values must be finite and >= 0")
        if np.any(np.diff(values) < 0):
            raise ValidationError("Invalid table density: must be nondecreasing")
        tail = float(values[-1]) if tail is None else float(tail)
        if values.size and tail < values[-1]:
            raise ValidationError(f"Invalid table tail: {tail}. Must be >= last value")
        if not tail > 0:
            raise ValidationError("Invalid table density: identically zero")
        self.breakpoints = breaks
        self.values = values
        self.tail = tail
        self.source = source
        self._lefts = np.concatenate(([0.0], breaks[:-1])) if breaks.size else np.zeros(0)
        self._cumulative = np.concatenate(([0.0], np.cumsum(values * np.diff(np.concatenate(([0.0], breaks))))))

    @property
    def end(self) -> float:
        return float(self.breakpoints[-1]) if self.breakpoints.size else 0.0

    def _density_t(self, t: np.ndarray) -> np.ndarray:
        index = np.searchsorted(self.breakpoints, t, side='left')
        padded = np.append(self.values, self.tail)
        return padded[index]

    def _value_t(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float).ravel()
        index = np.minimum(np.searchsorted(self.breakpoints, t, side='left'), self.values.size)
        out = np.empty(t.shape)
        inside = index < self.values.size
        i = index[inside]
        out[inside] = self._cumulative[i] + self.values[i] * (t[inside] - self._lefts[i])
        beyond = ~inside
        with np.errstate(invalid='ignore'):
            out[beyond] = np.where(
                t[beyond] > self.end,
                self._cumulative[-1] + self.tail * (t[beyond] - self.end),
                self._cumulative[-1],
            )
        return out

    def log_value(self, u):
        u, shape = _flat(u)
        out = np.empty(u.shape)
        safe = u <= _EXP_SAFE
        with np.errstate(divide='ignore'):
            out[safe] = np.log(self._value_t(np.exp(u[safe])))
            out[~safe] = np.log(self.tail) + u[~safe]
        return out.reshape(shape)

    def log_density(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide='ignore', over='ignore'):
            return np.log(self._density_t(np.exp(u)))

    def log_density_inverse(self, v):
        v = np.asarray(v, dtype=float)
        y = np.exp(np.minimum(v, _EXP_SAFE))
        levels = np.append(self.values, self.tail)
        rights = np.append(self.breakpoints, self.end)
        index = np.searchsorted(levels, y, side='left')
        with np.errstate(divide='ignore'):
            starts = np.log(np.concatenate(([0.0], rights)))
        out = starts[np.minimum(index, levels.size)]
        return np.where(index >= levels.size, np.inf, out)

    def conjugate(self) -> 'TableYoung':
        """Exact conjugate: density a^{-1} is a step function with breakpoints at the levels of a."""
        levels = np.append(self.values, self.tail)
        rights = np.append(self.breakpoints, self.end)
        lefts = np.concatenate(([0.0], rights[:-1]))
        positive = np.unique(levels[(levels > 0) & np.isfinite(levels)])
        first = np.searchsorted(levels, positive, side='left')
        conj_values = lefts[first]
        conj_tail = np.inf if np.isfinite(self.tail) else self.end
        return TableYoung(positive, conj_values, tail=conj_tail, numerics=self._numerics)

    def flat_stretches(self, decades: float) -> List[Tuple[float, float]]:
        stretches = []
        if not self.values.size:
            return stretches
        change = np.nonzero(np.diff(self.values) > 0)[0]
        starts = np.concatenate(([0], change + 1))
        ends = np.concatenate((change, [self.values.size - 1]))
        for i, j in zip(starts, ends):
            lo = self._lefts[i]
            hi = self.breakpoints[j]
            if self.values[i] > 0 and lo > 0 and np.log10(hi / lo) > decades:
                stretches.append((float(lo), float(hi)))
        return stretches

    def to_dict(self):
        if self.source is not None:
            return {'kind': self.kind, 'path': self.source}
        return {
            'kind': self.kind,
            'points': [[float(t), float(a)] for t, a in zip(self.breakpoints, self.values)],
            'tail': self.tail if np.isfinite(self.tail) else 'inf',
        }

    def describe(self):
        return f"table[{self.values.size} steps]"


class ConjugateYoung(YoungFunction):
    """
    Young conjugate of a base function through its generalized inverse density.

    log values and log densities are tabulated once on a uniform u-grid over the
    bisection bracket and interpolated; points next to an infinite or vanishing
    node are evaluated directly.
    """

    kind = 'conjugate'
    TABLE_STEP = 0.005

    def __init__(self, base: YoungFunction, numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics if numerics is not None else base._numerics)
        self.base = base
        self._table: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None

    def _tables(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self._table is None:
            bracket = self.numerics.bisection.log_bracket
            grid = np.arange(-bracket, bracket + 0.5 * self.TABLE_STEP, self.TABLE_STEP)
            self._table = (grid,
                           np.asarray(self.base.log_conjugate_value(grid), dtype=float),
                           np.asarray(self.base.log_density_inverse(grid), dtype=float))
            logger.debug(f"Tabulated conjugate of {self.base.describe()} on {grid.size} nodes")
        return self._table

    def _lookup(self, u: ArrayLike, column: int, direct) -> np.ndarray:
        u, shape = _flat(u)
        grid, *columns = self._tables()
        values = columns[column]
        index = np.clip(np.searchsorted(grid, u, side='right') - 1, 0, grid.size - 2)
        left, right = values[index], values[index + 1]
        smooth = (u >= grid[0]) & (u <= grid[-1]) & np.isfinite(left) & np.isfinite(right)
        out = np.empty(u.shape)
        weight = (u[smooth] - grid[index[smooth]]) / self.TABLE_STEP
        out[smooth] = left[smooth] + weight * (right[smooth] - left[smooth])
        if np.any(~smooth):
            out[~smooth] = direct(u[~smooth])
        return out.reshape(shape)

    def log_value(self, u):
        return self._lookup(u, 0, self.base.log_conjugate_value)

    def log_density(self, u):
        return self._lookup(u, 1, self.base.log_density_inverse)

    def log_density_inverse(self, v):
        # the generalized inverse of a^{-1} is the left-continuous a itself
        return self.base.log_density(v)

    def to_dict(self):
        return {'kind': self.kind, 'of': self.base.to_dict()}

    def describe(self):
        return f"conj({self.base.describe()})"


class RegularizedYoung(YoungFunction):
    """
    Base function with its density replaced on (0, cutoff).

    'floor' uses the constant a(cutoff); 'ramp' uses a(cutoff) t / cutoff.
    Both agree with the base function up to a constant above the cutoff, hence
    are equivalent to it near infinity.
    """

    kind = 'regularized'
    MODES = ('floor', 'ramp')

    def __init__(self, base: YoungFunction, mode: str, cutoff: float = 1.0,
                 numerics: Optional[NumericsConfig] = None):
        super().__init__(numerics if numerics is not None else base._numerics)
        validate_choice(mode, self.MODES, "mode")
        validate_positive_number(cutoff, "cutoff", strict=True)
        self.base = base
        self.mode = mode
        cutoff = self._admissible_cutoff(float(cutoff))
        self.cutoff = cutoff
        self._uc = float(np.log(cutoff))
        self._log_ac = float(base.log_density(np.array([self._uc]))[0])
        if mode == 'floor':
            self._log_Ac = self._log_ac + self._uc
        else:
            self._log_Ac = self._log_ac + self._uc - np.log(2.0)
        base_at_cut = float(np.exp(base.log_value(np.array([self._uc]))[0]))
        self._offset = float(np.exp(self._log_Ac)) - base_at_cut

    def _admissible_cutoff(self, cutoff: float) -> float:
        """First cutoff * 2^k (k >= 0) where 0 < a < inf."""
        for k in range(64):
            candidate = cutoff * 2.0 ** k
            log_a = float(self.base.log_density(np.array([np.log(candidate)]))[0])
            if np.isfinite(log_a):
                if k:
                    logger.debug(f"Regularization cutoff moved from {cutoff} to {candidate}")
                return candidate
        raise ValidationError(f"Cannot regularize {self.base.describe()}: density is 0 or infinite everywhere")

    def log_value(self, u):
        u, shape = _flat(u)
        below = u < self._uc
        out = np.empty(u.shape)
        if self.mode == 'floor':
            out[below] = self._log_ac + u[below]
        else:
            out[below] = self._log_ac - self._uc - np.log(2.0) + 2.0 * u[below]
        if np.any(~below):
            out[~below] = _log_add_offset(self.base.log_value(u[~below]), self._offset)
        return out.reshape(shape)

    def log_density(self, u):
        u, shape = _flat(u)
        below = u < self._uc
        out = np.empty(u.shape)
        if self.mode == 'floor':
            out[below] = self._log_ac
        else:
            out[below] = self._log_ac - self._uc + u[below]
        if np.any(~below):
            out[~below] = self.base.log_density(u[~below])
        return out.reshape(shape)

    def asymptotics(self):
        base = self.base.asymptotics()
        if base is None:
            return None
        zero = (1.0, 0.0, 0.0) if self.mode == 'floor' else (2.0, 0.0, 0.0)
        return AsymptoticClass(zero=zero, infinity=base.infinity, infinite=base.infinite)

    def to_dict(self):
        return {'kind': self.kind, 'mode': self.mode, 'cutoff': self.cutoff, 'of': self.base.to_dict()}

    def describe(self):
        return f"{self.mode}@{self.cutoff:g}({self.base.describe()})"


def read_density_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """Read a density table from CSV with header `t,a`."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"Density table not found: {path}")
    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = [cell.strip() for cell in next(reader, [])]
        if header != ['t', 'a']:
            raise ValidationError(f"Invalid header in {path}: {header}. Expected t,a")
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    try:
        data = np.array([[float(t), float(a)] for t, a in rows])
    except ValueError as e:
        raise ValidationError(f"Invalid number in density table {path}") from e
    if not data.size:
        raise ValidationError(f"Density table is empty: {path}")
    return data[:, 0], data[:, 1]


def young_from_dict(data: Dict[str, Any], base_dir: Optional[Path] = None,
                    numerics: Optional[NumericsConfig] = None) -> YoungFunction:
    """
    Build a Young function from its JSON description.

    Args:
        data: e.g. {"kind": "powerlog", "p": 3.0, "alpha": 1.0}
        base_dir: Directory against which relative table paths are resolved
        numerics: Settings for derived evaluations

    Returns:
        YoungFunction instance

    Raises:
        ValidationError: On unknown kinds or missing parameters
    """
    if not isinstance(data, dict) or 'kind' not in data:
        raise ValidationError(f"Invalid Young function description: {data}")
    kind = data['kind']
    try:
        if kind == 'power':
            return PowerYoung(float(data['p']), float(data.get('coef', 1.0)), numerics=numerics)
        if kind == 'powerlog':
            return PowerLogYoung(float(data['p']), float(data['alpha']), data.get('t0'), numerics=numerics)
        if kind == 'powerloglog':
            return PowerLogLogYoung(float(data['p']), float(data['alpha']), float(data['beta']),
                                    data.get('t0'), numerics=numerics)
        if kind == 'exppower':
            return ExpPowerYoung(float(data['beta']), data.get('t0'), numerics=numerics)
        if kind == 'linf':
            return LinfYoung(numerics=numerics)
        if kind == 'table':
            tail = data.get('tail')
            tail = float(tail) if tail is not None else None
            if 'path' in data:
                path = Path(data['path'])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                breaks, values = read_density_csv(path)
                return TableYoung(breaks, values, tail=tail, source=str(data['path']), numerics=numerics)
            points = np.asarray(data['points'], dtype=float)
            return TableYoung(points[:, 0], points[:, 1], tail=tail, numerics=numerics)
        if kind == 'conjugate':
            return ConjugateYoung(young_from_dict(data['of'], base_dir, numerics), numerics=numerics)
        if kind == 'regularized':
            return RegularizedYoung(young_from_dict(data['of'], base_dir, numerics), data['mode'],
                                    float(data.get('cutoff', 1.0)), numerics=numerics)
    except KeyError as e:
        raise ValidationError(f"Missing parameter {e} for Young function kind {kind}") from e
    raise ValidationError(f"Invalid Young function kind: {kind}. Must be one of {YOUNG_KINDS}")


def parse_young(text: str, numerics: Optional[NumericsConfig] = None) -> YoungFunction:
    """
    Parse the command-line shorthand `kind[:a,b,...]`.

    Examples: `power:2`, `powerlog:3,1`, `powerloglog:1,0,2`, `exppower:1`, `linf`,
    `table:density.csv`.
    """
    kind, _, rest = text.partition(':')
    kind = kind.strip().lower()
    if kind == 'table':
        return young_from_dict({'kind': 'table', 'path': rest}, numerics=numerics)
    names = {
        'power': ('p',),
        'powerlog': ('p', 'alpha'),
        'powerloglog': ('p', 'alpha', 'beta'),
        'exppower': ('beta',),
        'linf': (),
    }
    if kind not in names:
        raise ValidationError(f"Invalid Young function kind: {kind}. Must be one of {YOUNG_KINDS}")
    try:
        args = [float(x) for x in rest.split(',')] if rest.strip() else []
    except ValueError as e:
        raise ValidationError(f"Invalid Young function parameters: {rest}") from e
    if len(args) != len(names[kind]):
        raise ValidationError(f"Invalid Young function {text}: expected parameters {names[kind]}")
    return young_from_dict({'kind': kind, **dict(zip(names[kind], args))}, numerics=numerics)
