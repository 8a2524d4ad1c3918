"""Exact and numerical checks for U(2)-invariant extremal and Bach-flat Kaehler metrics."""

__version__ = "0.1.0"
