"""Numerical laboratory for Thue-Morse values along Piatetski-Shapiro sequences."""

__version__ = "0.1.0"
