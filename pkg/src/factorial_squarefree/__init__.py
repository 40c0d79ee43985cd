"""Factorization of n!+1 and searches for its repeated prime factors."""

__version__ = "0.1.0"
