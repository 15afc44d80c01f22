"""Typed numerical settings built from numerics.yaml."""

from dataclasses import dataclass, field, fields, asdict
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from src.config.config_loader import load_config, get_config_path, merge_config
from src.utils.exceptions import ConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    limit: int = 200


@dataclass(frozen=True)
class BisectionSettings:
    iterations: int = 60
    luxemburg_rel_tol: float = 1e-10
    log_bracket: float = 700.0


@dataclass(frozen=True)
class TailSettings:
    rel_tol: float = 1e-8
    start: float = 16.0
    limit: float = 700.0
    head: float = -60.0
    convergence_margin: float = 0.05


@dataclass(frozen=True)
class TableSettings:
    step: float = 0.02
    growth: float = 1.01
    switch: float = 40.0
    hat_points_per_decade: int = 40
    hat_range: Tuple[float, float] = (-10.0, 15.0)


@dataclass(frozen=True)
class TabulationSettings:
    points_per_decade: int = 64
    s_min_ratio: float = 1e-12
    refinements: int = 3
    refinement_rel_tol: float = 1e-6


@dataclass(frozen=True)
class RegularizationSettings:
    cutoff: float = 1.0
    flat_decades: float = 1.0


@dataclass(frozen=True)
class KFunctionalSettings:
    golden_rel_tol: float = 1e-8
    split_levels: int = 9
    exhaustive_limit: int = 4096


@dataclass(frozen=True)
class ModuliSettings:
    radius_factor: float = 2.0
    verdict_levels: int = 40
    verdict_slope: float = -0.05
    verdict_drop: float = 1e-3


@dataclass(frozen=True)
class WhitneySettings:
    lower: float = 8.0
    upper: float = 32.0
    dilation: float = 1.125
    min_projection_cells: int = 3
    max_depth: int = 12


@dataclass(frozen=True)
class NumericsConfig:
    """All tolerances of the numerical layer, grouped as in numerics.yaml."""

    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    bisection: BisectionSettings = field(default_factory=BisectionSettings)
    tails: TailSettings = field(default_factory=TailSettings)
    tables: TableSettings = field(default_factory=TableSettings)
    tabulation: TabulationSettings = field(default_factory=TabulationSettings)
    regularization: RegularizationSettings = field(default_factory=RegularizationSettings)
    kfunctional: KFunctionalSettings = field(default_factory=KFunctionalSettings)
    moduli: ModuliSettings = field(default_factory=ModuliSettings)
    whitney: WhitneySettings = field(default_factory=WhitneySettings)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> 'NumericsConfig':
        """
        Build settings from a nested dictionary.

        Args:
            config: Mapping section -> {key: value}; missing keys keep defaults

        Returns:
            NumericsConfig instance

        Raises:
            ConfigError: On unknown sections/keys or badly typed values
        """
        sections = {f.name: f for f in fields(cls)}
        kwargs = {}
        for name, values in (config or {}).items():
            if name not in sections:
                raise ConfigError(f"Unknown numerics section: {name}")
            if not isinstance(values, dict):
                raise ConfigError(f"Numerics section {name} must be a mapping")
            section_type = sections[name].default_factory
            known = {f.name: f for f in fields(section_type)}
            section_kwargs = {}
            for key, value in values.items():
                if key not in known:
                    raise ConfigError(f"Unknown numerics key: {name}.{key}")
                default = getattr(section_type(), key)
                try:
                    if isinstance(default, tuple):
                        section_kwargs[key] = tuple(float(v) for v in value)
                    else:
                        section_kwargs[key] = type(default)(value)
                except (TypeError, ValueError) as e:
                    raise ConfigError(f"Invalid value for {name}.{key}: {value}") from e
            kwargs[name] = section_type(**section_kwargs)
        return cls(**kwargs)

    def with_overrides(self, overrides: Dict[str, Any]) -> 'NumericsConfig':
        """Return a copy with nested overrides applied."""
        return NumericsConfig.from_dict(merge_config(self.to_dict(), overrides))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['tables']['hat_range'] = list(data['tables']['hat_range'])
        return data


@lru_cache(maxsize=1)
def default_numerics() -> NumericsConfig:
    """Settings from the bundled numerics.yaml (cached)."""
    return NumericsConfig.from_dict(load_config(get_config_path('numerics')))


def load_numerics(config_file: Optional[Path] = None) -> NumericsConfig:
    """
    Load settings from a user file layered over the bundled defaults.

    Args:
        config_file: Optional YAML file with partial overrides

    Returns:
        NumericsConfig instance
    """
    if config_file is None:
        return default_numerics()
    logger.info(f"Loading numerics overrides from {config_file}")
    return default_numerics().with_overrides(load_config(config_file))


def resolve(numerics: Optional[NumericsConfig]) -> NumericsConfig:
    """Return `numerics` or the bundled defaults."""
    return numerics if numerics is not None else default_numerics()
