"""Exact computations with skein relations, link state sums and trivalent graphs."""

__version__ = "0.1.0"
