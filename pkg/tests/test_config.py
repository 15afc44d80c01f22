"""Tests for configuration loading and numerical settings."""

from pathlib import Path

import pytest

from src.config.config_loader import get_config_path, load_config, merge_config, parse_override
from src.config.settings import NumericsConfig, default_numerics, load_numerics, resolve
from src.utils.exceptions import ConfigError


class TestConfigLoader:
    """Test YAML loading."""

    def test_bundled_numerics_exists(self):
        """Test the bundled numerics file is found and parsed."""
        path = get_config_path('numerics')
        assert path.name == 'numerics.yaml'
        config = load_config(path)
        assert config['bisection']['iterations'] == 60

    def test_missing_file(self, tmp_path):
        """Test a missing file raises ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / 'absent.yaml')

    def test_invalid_yaml(self, tmp_path):
        """Test malformed YAML is wrapped in ConfigError."""
        path = tmp_path / 'bad.yaml'
        path.write_text("quadrature: [1, 2\n")
        with pytest.raises(ConfigError, match="Invalid YAML"):
            load_config(path)

    def test_empty_file(self, tmp_path):
        """Test an empty file is rejected."""
        path = tmp_path / 'empty.yaml'
        path.write_text("")
        with pytest.raises(ConfigError, match="empty"):
            load_config(path)

    def test_non_mapping_root(self, tmp_path):
        """Test a list at the root is rejected."""
        path = tmp_path / 'list.yaml'
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError, match="mapping"):
            load_config(path)


class TestOverrides:
    """Test override parsing and merging."""

    def test_parse_override_nested(self):
        """Test section.key=value becomes a nested dict with a typed value."""
        assert parse_override('bisection.iterations=80') == {'bisection': {'iterations': 80}}
        assert parse_override('quadrature.rel_tol=1.0e-7') == {'quadrature': {'rel_tol': 1e-7}}

    def test_parse_override_malformed(self):
        """Test overrides without '=' are rejected."""
        with pytest.raises(ConfigError, match="Expected section.key=value"):
            parse_override('bisection.iterations')

    def test_merge_keeps_untouched_keys(self):
        """Test nested merging only replaces the given keys."""
        merged = merge_config({'a': {'x': 1, 'y': 2}, 'b': 3}, {'a': {'y': 5}})
        assert merged == {'a': {'x': 1, 'y': 5}, 'b': 3}


class TestNumericsConfig:
    """Test the typed numerics settings."""

    def test_defaults_match_bundled_file(self):
        """Test the bundled file reproduces the documented defaults."""
        numerics = default_numerics()
        assert numerics.quadrature.rel_tol == 1e-9
        assert numerics.quadrature.abs_tol == 1e-14
        assert numerics.tabulation.points_per_decade == 64
        assert numerics.kfunctional.split_levels == 9
        assert numerics.whitney.dilation == 1.125
        assert numerics.moduli.radius_factor == 2.0

    def test_resolve_defaults(self):
        """Test resolve(None) returns the bundled settings."""
        assert resolve(None) is default_numerics()
        custom = NumericsConfig()
        assert resolve(custom) is custom

    def test_with_overrides(self):
        """Test overrides produce a new settings object."""
        numerics = default_numerics().with_overrides({'bisection': {'iterations': 90}})
        assert numerics.bisection.iterations == 90
        assert isinstance(numerics.bisection.iterations, int)
        assert default_numerics().bisection.iterations == 60

    def test_unknown_section(self):
        """Test unknown sections are rejected."""
        with pytest.raises(ConfigError, match="Unknown numerics section"):
            NumericsConfig.from_dict({'splines': {'knots': 16}})

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        with pytest.raises(ConfigError, match="Unknown numerics key"):
            NumericsConfig.from_dict({'bisection': {'steps': 3}})

    def test_bad_value(self):
        """Test badly typed values are rejected."""
        with pytest.raises(ConfigError, match="Invalid value"):
            NumericsConfig.from_dict({'bisection': {'iterations': 'many'}})

    def test_load_numerics_layers_user_file(self, tmp_path):
        """Test a partial user file is layered over the defaults."""
        path = tmp_path / 'numerics.yaml'
        path.write_text("tabulation:\n  points_per_decade: 32\n")
        numerics = load_numerics(Path(path))
        assert numerics.tabulation.points_per_decade == 32
        assert numerics.tabulation.s_min_ratio == 1e-12

    def test_round_trip_through_dict(self):
        """Test to_dict feeds back into from_dict unchanged."""
        numerics = default_numerics()
        assert NumericsConfig.from_dict(numerics.to_dict()) == numerics
