"""Empirical code-length CGFs, LZ78 coders and their finite-state bounds."""

__version__ = "0.1.0"
