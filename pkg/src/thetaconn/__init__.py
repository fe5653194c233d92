"""Exact computations with gradings of simple Lie algebras and their theta-connections."""

__version__ = "0.1.0"
