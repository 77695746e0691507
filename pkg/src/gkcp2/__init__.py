"""Toric generalised Kähler structure on CP^2 from elliptic functions."""

__version__ = "0.1.0"
