"""Twisted spinor algebra, curvature identities and Dirac eigenvalue bounds."""

__version__ = "0.1.0"
