"""Exact lattice and Lie-algebra calculus for atomic objects on hyper-Kaehler manifolds."""

__version__ = "0.1.0"
