"""Exact recomputation toolkit for the tile threefold and its cones."""

__version__ = "0.1.0"
