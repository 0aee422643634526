"""Archimedean local zeta integrals on rank-one prehomogeneous vector spaces."""

__version__ = "0.1.0"
