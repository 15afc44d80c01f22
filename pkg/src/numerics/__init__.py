"""Quadrature on the logarithmic axis and monotone inversion."""
