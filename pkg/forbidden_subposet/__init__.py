"""Forbidden induced subposets in the Boolean lattice: exact checks, sampling and copy search."""
__version__ = "1.0.0"
