"""Coset enumeration and permutation-group tools for the group nu(G) and the
non-abelian tensor square of a finite group."""

__version__ = "0.1.0"
