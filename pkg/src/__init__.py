"""Rearrangement-invariant norms, Sobolev embedding targets and their numerical verification."""

__version__ = "1.0.0"
