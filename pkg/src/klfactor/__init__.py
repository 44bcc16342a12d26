"""Parabolic factorizations of permutations and Kazhdan-Lusztig cross-checks."""

__version__ = "0.1.0"
