"""Exact-arithmetic random walks and Tits-alternative certificates on
compact subsets of the line."""

__version__ = "0.1.0"
