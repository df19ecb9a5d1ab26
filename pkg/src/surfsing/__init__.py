"""Combinatorics of resolution graphs, thick-thin decompositions and carrousels."""

__version__ = "0.1.0"
