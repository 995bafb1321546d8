"""Numerical laboratory for the sharp fractional Morrey constant."""

__version__ = "0.1.0"
