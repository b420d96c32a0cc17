"""Exact homological algebra for invariant models of holomorphic Poisson manifolds."""

__version__ = "0.1.0"
