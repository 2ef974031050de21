"""Arithmetic dynamics of plane polynomial maps over Q: dynamical degrees,
Weil and canonical heights, arithmetic degrees and orbit classification."""

__version__ = "1.0.0"
