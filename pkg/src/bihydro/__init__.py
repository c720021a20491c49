"""Symbolic verification of bihamiltonian systems of hydrodynamic type under
linear reciprocal transformations."""

__version__ = "0.1.0"
