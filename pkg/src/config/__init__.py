"""Configuration modules for the embedding lab."""

from src.config.settings import NumericsConfig, default_numerics

__all__ = ['NumericsConfig', 'default_numerics']
