"""Residue-targeted specializations of parametric Galois families."""

__version__ = "0.1.0"
