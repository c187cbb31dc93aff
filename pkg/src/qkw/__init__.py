"""Kac polynomials of quivers, their nilpotent variants and the point counts
derived from them, with a finite-field brute-force census for cross-checks."""

__version__ = "0.1.0"
