"""Numerical laboratory for the Moser-Trudinger-Onofri inequality."""

__version__ = "0.1.0"
