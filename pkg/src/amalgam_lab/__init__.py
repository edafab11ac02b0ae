"""Numerical laboratory for weighted amalgam spaces and the algebras A^{p,1,q,r} on the real line."""

__version__ = "0.1.0"
