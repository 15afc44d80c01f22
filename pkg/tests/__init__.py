"""Tests for the Sobolev embedding lab."""
