"""Numerical checks of Toeplitz-determinant bounds for k-fold starlike functions and mappings."""

__version__ = "0.1.0"
