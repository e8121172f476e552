"""Candidate poles of complex local zeta functions of Newton non-degenerate polynomials."""

__version__ = "0.1.0"
